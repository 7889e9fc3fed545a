#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace swb {

using Integer = mpz_class;
using Rational = mpq_class;

// Place index for the real place in hilbert_symbol.
inline constexpr long kInfinitePlace = 0;

struct Valuation {
    bool infinite = false;
    long value = 0;

    bool operator==(const Valuation&) const = default;
    std::string to_string() const { return infinite ? "inf" : std::to_string(value); }
};

class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

bool is_prime(long n);

long valuation(const Integer& x, long p);  // x != 0
Valuation valuation(const Rational& x, long p);

// Unit part u with x = p^{v} u; requires x != 0.
Rational unit_part(const Rational& x, long p);

// p^e for any integer e.
Rational rpow(long p, long e);
Integer ipow(long p, unsigned long e);

// Reduces a p-integral rational to a residue mod m (m a power of p).
std::uint64_t residue_mod(const Rational& x, long p, std::uint64_t m);

bool is_p_integral(const Rational& x, long p);

int quad_residue_symbol(const Rational& u, long p);
int hilbert_symbol(const Rational& a, const Rational& b, long v);

// Kronecker symbol (D/n) for a fundamental-type discriminant D and prime n.
int kronecker(const Integer& D, long n);

std::string to_string(const Rational& x);

}  // namespace swb

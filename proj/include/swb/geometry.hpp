#pragma once

#include "swb/analytic.hpp"
#include "swb/padic.hpp"
#include "swb/report.hpp"
#include "swb/symbolic.hpp"

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace swb {

// A closed-form identity that the ledger route failed to reproduce; the message carries both sides.
class IdentityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::map<long, long> prime_factorization(const Integer& n);  // n >= 1

Integer euler_phi(const Integer& n);
Integer dedekind_psi(const Integer& n);
int moebius(const Integer& n);

struct ArithFunctions {
    Integer phi;
    Integer psi;
    std::vector<std::pair<Integer, int>> mu;  // (d, mu(d)) over the divisors d of N, ascending
};

ArithFunctions arith_functions(const Integer& N);

std::vector<Integer> divisors(const Integer& N);

// sum over r | t of mu(t/r) mu(N/r) phi(N)/phi(N/r); t must divide N.
Integer a_N(const Integer& N, const Integer& t);

struct CuspComponent {
    long p = 0;
    long n = 0;
    long a = 0;  // -n <= a <= n, a = n mod 2
    Integer deg1;
    Integer deg2;
};

std::vector<CuspComponent> cusp_components(long p, long n);

struct CuspClass {
    long component = 0;  // 2k - n
    Integer ra1;
    Integer ra2;
};

// The cusp a / p^k on X_0(p^n); a must be a unit mod p^{min(k, n-k)}.
CuspClass classify_cusp(long p, long n, const Integer& a, long k);

struct FiberComponent {
    long p = 0;
    Integer N;
    long a = 0;
    Integer multiplicity;  // phi(p^{(n-|a|)/2}) in div(p)
    Integer degree_p1;     // psi(N_p), times p^{-a} when a < 0
};

std::vector<FiberComponent> special_fiber(const Integer& N, long p);

// Divisors supported on vertical fibers at p | N and on the two cusps at infinity and zero.
struct DivisorLedger {
    Integer N = 1;
    std::map<std::pair<long, long>, Rational> vertical;  // (p, a) -> coefficient; no zero entries
    Rational cusp_inf = 0;
    Rational cusp_zero = 0;  // always zero at N = 1, where the two cusps coincide

    explicit DivisorLedger(Integer level = 1) : N(std::move(level)) {}

    void add_vertical(long p, long a, const Rational& c);
    void add_cusp_inf(const Rational& c);
    void add_cusp_zero(const Rational& c);
    Rational coefficient(long p, long a) const;

    DivisorLedger& operator+=(const DivisorLedger& o);
    DivisorLedger& operator-=(const DivisorLedger& o);
    DivisorLedger& operator*=(const Rational& c);
    friend DivisorLedger operator+(DivisorLedger a, const DivisorLedger& b) { return a += b; }
    friend DivisorLedger operator-(DivisorLedger a, const DivisorLedger& b) { return a -= b; }
    friend DivisorLedger operator*(DivisorLedger a, const Rational& c) { return a *= c; }
    friend DivisorLedger operator*(const Rational& c, DivisorLedger a) { return a *= c; }
    bool operator==(const DivisorLedger& o) const;

    std::string to_string() const;
};

// Single vertical component <X^a_p(N)>.
DivisorLedger vertical_component(const Integer& N, long p, long a);

// div(p) = sum_a phi(p^{(n-|a|)/2}) X^a_p(N).
DivisorLedger div_p(const Integer& N, long p);

// Pairing of two ledgers; every vertical-vertical term is a rational multiple of log p.
// Throws DomainError when a cusp meets X^{+-n} with nonzero weight, or two cusps meet.
SymbolicNumber intersection_pairing(const DivisorLedger& A, const DivisorLedger& B);

// Pairing of two components at the same p.
Rational component_pairing_coefficient(const Integer& N, long p, long a, long b);

DivisorLedger xhat(const Integer& N, long p);

SymbolicNumber xhat_self_intersection_closed(const Integer& N, long p);

// Ledger route; throws IdentityError if it disagrees with the closed form.
SymbolicNumber xhat_self_intersection(const Integer& N, long p);

DivisorLedger f_p(const Integer& N, long p);
DivisorLedger f_p_zero(const Integer& N, long p);

struct DeltaSections {
    DivisorLedger delta;       // div(Delta_N)
    DivisorLedger delta_zero;  // div(Delta_N^0)
};

DeltaSections div_delta_section(const Integer& N);

// a <-> -a and infinity <-> zero.
DivisorLedger atkin_lehner_pullback(const DivisorLedger& L);

CaseResult check_hodge_difference(const Integer& N);

// Sum_b mult_b <X^a, X^b> = 0 for every a.
CaseResult check_div_p_trivial(const Integer& N, long p);

SymbolicNumber fp_self_pairing_closed(const Integer& N, long p);

struct DeltaSelfPairing {
    std::map<long, SymbolicNumber> fp_pairings;  // ledger route, checked against the closed form
    SymbolicNumber total;                        // <Delta_N, Delta_N>
};

DeltaSelfPairing delta_self_pairing(const Integer& N);

// <omega_N, omega_N> = psi(N)/24 (1/2 - LambdaRatio), taken as an input constant.
SymbolicNumber omega_self_pairing(const Integer& N);

// (24/psi(N)) (4 <omega, omega> - sum_p <X_p, X_p>) + log det y.
EisensteinConstantTerm geometric_t0_side(const Integer& N);

CaseResult check_siegel_weil_t0(const Integer& N);

}  // namespace swb

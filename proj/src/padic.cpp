#include "swb/padic.hpp"

namespace swb {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long valuation(const Integer& x, long p) {
    if (x == 0) throw DomainError("valuation of zero integer");
    mpz_class t = abs(x);
    long v = 0;
    mpz_class pp = p;
    while (mpz_divisible_p(t.get_mpz_t(), pp.get_mpz_t())) {
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), pp.get_mpz_t());
        ++v;
    }
    return v;
}

Valuation valuation(const Rational& x, long p) {
    if (!is_prime(p)) throw DomainError("valuation: p must be prime");
    if (x == 0) return {true, 0};
    return {false, valuation(x.get_num(), p) - valuation(x.get_den(), p)};
}

Rational rpow(long p, long e) {
    Rational r = 1;
    Integer pe = ipow(p, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0)
        r = Rational(pe);
    else
        r = Rational(Integer(1), pe);
    r.canonicalize();
    return r;
}

Integer ipow(long p, unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), e);
    return r;
}

Rational unit_part(const Rational& x, long p) {
    Valuation v = valuation(x, p);
    if (v.infinite) throw DomainError("unit_part of zero");
    Rational u = x / rpow(p, v.value);
    u.canonicalize();
    return u;
}

bool is_p_integral(const Rational& x, long p) {
    return x == 0 || valuation(x.get_den(), p) == 0;
}

std::uint64_t residue_mod(const Rational& x, long p, std::uint64_t m) {
    if (!is_p_integral(x, p)) throw DomainError("residue_mod: value is not p-integral");
    Integer mm(std::to_string(m));
    Integer num = x.get_num() % mm;
    if (num < 0) num += mm;
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), Integer(x.get_den()).get_mpz_t(), mm.get_mpz_t()) == 0) {
        if (m != 1) throw DomainError("residue_mod: denominator not invertible");
        return 0;
    }
    Integer r = (num * inv) % mm;
    return std::stoull(r.get_str());
}

static int legendre_int(const Integer& a, long p) {
    Integer pp = p;
    return mpz_legendre(a.get_mpz_t(), pp.get_mpz_t());
}

int quad_residue_symbol(const Rational& u, long p) {
    if (p == 2) throw DomainError("quad_residue_symbol: p = 2 is not supported");
    if (!is_prime(p)) throw DomainError("quad_residue_symbol: p must be prime");
    Valuation v = valuation(u, p);
    if (v.infinite) return 0;
    if (v.value % 2 != 0) return 0;
    Rational w = unit_part(u, p);
    Integer nd = w.get_num() * w.get_den();  // same square class as w
    return legendre_int(nd, p);
}

// (x mod 8) helpers for odd integers.
static long mod8(const Integer& x) {
    Integer r = x % 8;
    if (r < 0) r += 8;
    return r.get_si();
}

int hilbert_symbol(const Rational& a, const Rational& b, long v) {
    if (a == 0 || b == 0) throw DomainError("hilbert_symbol: zero argument");
    if (v == kInfinitePlace) return (a < 0 && b < 0) ? -1 : 1;
    if (!is_prime(v)) throw DomainError("hilbert_symbol: place must be prime or infinity");
    // Replace by integers in the same square class.
    Integer A = a.get_num() * a.get_den();
    Integer B = b.get_num() * b.get_den();
    long alpha = valuation(A, v), beta = valuation(B, v);
    Integer pa = ipow(v, static_cast<unsigned long>(alpha));
    Integer pb = ipow(v, static_cast<unsigned long>(beta));
    Integer u = A / pa, w = B / pb;
    if (v != 2) {
        int s = 1;
        if ((alpha * beta) % 2 != 0 && (v % 4) == 3) s = -s;
        if (beta % 2 != 0) s *= legendre_int(u, v);
        if (alpha % 2 != 0) s *= legendre_int(w, v);
        return s;
    }
    long u8 = mod8(u), w8 = mod8(w);
    auto eps = [](long x) { return ((x - 1) / 2) % 2; };
    auto omega = [](long x) { return ((x * x - 1) / 8) % 2; };
    long e = eps(u8) * eps(w8) + alpha * omega(w8) + beta * omega(u8);
    return (e % 2 == 0) ? 1 : -1;
}

int kronecker(const Integer& D, long n) {
    Integer nn = n;
    return mpz_kronecker(D.get_mpz_t(), nn.get_mpz_t());
}

std::string to_string(const Rational& x) { return x.get_str(); }

}  // namespace swb

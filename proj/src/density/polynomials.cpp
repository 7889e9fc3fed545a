#include "engines.hpp"

namespace swb {

std::string to_string(DensityKind k) {
    switch (k) {
        case DensityKind::Den: return "Den";
        case DensityKind::DenFlat: return "DenFlat";
        case DensityKind::DenDelta: return "DenDelta";
    }
    return "?";
}

Poly normalizer(long p, int eps, int n) {
    if (n < 0) throw DomainError("normalizer needs n >= 0");
    Poly out(1);
    if (n % 2) out = Poly(std::vector<Rational>{1, Rational(-eps) * rpow(p, -(n + 1) / 2)});
    for (int i = 1; 2 * i < n + 1; ++i) out *= Poly(std::vector<Rational>{1, 0, -rpow(p, -2 * i)});
    return out;
}

namespace {

// Square-free kernel of a nonzero rational, as an integer.
Integer squarefree_part(const Rational& x) {
    Integer v = x.get_num() * x.get_den();
    Integer sign = v < 0 ? -1 : 1;
    v = abs(v);
    Integer out = 1;
    for (Integer q = 2; q * q <= v; ++q) {
        int e = 0;
        while (v % q == 0) {
            v /= q;
            ++e;
        }
        if (e % 2) out *= q;
    }
    out *= v;
    return sign * out;
}

}  // namespace

int lattice_chi(const QuadLattice& L) {
    const long p = L.p;
    const int n = L.rank();
    if (p != 2) {
        auto inv = invariants(L);
        return *inv.chi;
    }
    if (n % 2) throw DomainError("chi at p = 2 is defined here for even rank only");
    Rational d = L.det_T();
    if ((n / 2) % 2) d = -d;
    Integer s = squarefree_part(d);
    Integer D = (s % 4 == 1 || s % 4 == -3) ? s : Integer(4 * s);
    if (D == 1) return 1;
    return kronecker(D, 2);
}

Rational density_sample(const QuadLattice& L, DensityKind kind, int eps, int k, const Rational& N,
                        const DensityConfig& cfg) {
    const long p = L.p;
    const int n = L.rank();
    const Rational X = rpow(p, -k);
    switch (kind) {
        case DensityKind::Den: {
            QuadLattice H = make_hyperbolic(p, 2 * k + n + 1, eps);
            return local_density(H, L, cfg).value / normalizer(p, eps, n).eval(X);
        }
        case DensityKind::DenFlat: {
            if (n < 1) throw DomainError("DenFlat needs a lattice of positive rank");
            QuadLattice H = make_hyperbolic(p, 2 * k + n, eps);
            Rational chi = lattice_chi(L);
            // The extra 1 - X^2 makes a self-dual L flat (constant 1) and is what the functional equation needs.
            return local_density(H, L, cfg).value / normalizer(p, eps, n - 1).eval(X) * (1 - eps * chi * X) /
                   (1 - X * X);
        }
        case DensityKind::DenDelta: {
            if (n < 1) throw DomainError("DenDelta needs a lattice of positive rank");
            QuadLattice T = direct_sum(make_delta(p, N), make_hyperbolic(p, 2 * k + n - 2, eps));
            Rational den = local_density(T, L, cfg).value;
            if (valuation(N, p).value > 0) return den / normalizer(p, eps, n - 1).eval(X);
            if (p == 2) throw DomainError("DenDelta at p = 2 needs 2 | N");
            return den / normalizer(p, eps * quad_residue_symbol(N, p), n).eval(X);
        }
    }
    throw DomainError("unknown density kind");
}

DensityPolynomial interpolate_density_polynomial(const QuadLattice& L, DensityKind kind, int eps, const Rational& N,
                                                 const DensityConfig& cfg) {
    const long p = L.p;
    long val = L.rank() ? valuation(L.det_b(), p).value : 0;
    if (kind == DensityKind::DenDelta) val += valuation(N, p).value + 1;
    const int degree_guess = static_cast<int>(val) + 2;
    std::vector<Rational> xs, ys;
    for (int k = 1; k <= degree_guess + 1; ++k) {
        xs.push_back(rpow(p, -k));
        ys.push_back(density_sample(L, kind, eps, k, N, cfg));
    }
    Poly poly = interpolate(xs, ys);
    for (int k = degree_guess + 2; k <= degree_guess + 3; ++k) {
        Rational y = density_sample(L, kind, eps, k, N, cfg);
        if (poly.eval(rpow(p, -k)) != y)
            throw InterpolationError("density polynomial failed the extra sample at k = " + std::to_string(k), k);
    }
    DensityPolynomial out;
    out.poly = poly;
    out.kind = kind;
    out.eps = eps;
    out.lattice = L.to_string();
    out.level = N;
    out.samples = degree_guess + 3;
    return out;
}

Rational derived_density(const DensityPolynomial& poly) { return -poly.poly.derivative().eval(1); }

}  // namespace swb

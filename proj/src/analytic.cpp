#include "swb/analytic.hpp"

#include <map>

namespace swb {

namespace {

RationalFunction var() { return RationalFunction(Poly::x()); }
RationalFunction cst(const Rational& c) { return RationalFunction(c); }

long vp(const Integer& x, long p) { return valuation(x, p); }

std::map<long, long> factor(Integer n) {
    std::map<long, long> out;
    n = abs(n);
    for (long q = 2; Integer(q) * q <= n; ++q)
        while (n % q == 0) {
            ++out[q];
            n /= q;
        }
    if (n > 1) ++out[n.get_si()];
    return out;
}

void require_level(const Integer& N, const Integer& t) {
    if (N < 1) throw DomainError("level N must be positive");
    if (t == 0) throw DomainError("t must be nonzero");
}

}  // namespace

DiscSplit fundamental_disc_split(const Integer& t, const Integer& N) {
    require_level(N, t);
    DiscSplit s{t, N, 0, 0};
    const Integer m = -t * N;
    if (m > 0 && mpz_perfect_square_p(m.get_mpz_t())) {
        Integer r = sqrt(m);
        s.d = -1;
        s.c = 2 * r;
        return s;
    }
    Integer core = m < 0 ? Integer(-1) : Integer(1), f = 1;
    for (auto [q, e] : factor(m)) {
        if (e % 2) core *= q;
        for (long i = 0; i < e / 2; ++i) f *= q;
    }
    Integer mod4 = ((core % 4) + 4) % 4;
    Integer D = mod4 == 1 ? core : Integer(4 * core);
    s.d = -D;
    s.c = mod4 == 1 ? Rational(2 * f) : Rational(f);
    return s;
}

int chi_t(const DiscSplit& s, long p) {
    if (s.d == -1) return 1;
    return kronecker(-s.d, p);
}

Poly flat_density_poly(const Integer& t, const Integer& N, long p, const DensityConfig& cfg) {
    QuadLattice L = make_diagonal(p, {Rational(t), Rational(N)});
    return interpolate_density_polynomial(L, DensityKind::DenFlat, 1, 0, cfg).poly;
}

RationalFunction g_p_function(const Integer& N, const Integer& t, long p, const DensityConfig& cfg) {
    require_level(N, t);
    if (vp(N, p) <= 1) return RationalFunction(0);
    const Integer Np2 = N / (p * p);
    Poly num = flat_density_poly(t, Np2, p, cfg).scale_var(Rational(1, p));
    Poly den = flat_density_poly(t, N, p, cfg).scale_var(Rational(1, p));
    return RationalFunction(num, den);
}

bool g_p_functional_equation_holds(const RationalFunction& G, long p) {
    RationalFunction rhs = cst(p) * G.reciprocal(p) / (var() * var());
    return rhs == G;
}

BetaFunction beta_p_function(const Integer& N, const Integer& t, long p, const DensityConfig& cfg) {
    RationalFunction G = g_p_function(N, t, p, cfg);
    const RationalFunction X = var();
    RationalFunction Gs = G.scale_var(p);  // g_p(s - 1)
    RationalFunction first = (cst(1) + cst(1) / (cst(p) * X)) / (cst(1) + X / cst(p));
    RationalFunction second = (cst(1) - X * X * Gs) / (cst(1) - Gs);
    BetaFunction out;
    out.beta = first * second;
    if (out.beta.eval(1) != 1) throw DomainError("beta_p(0) != 1");
    // d/ds = -X log p d/dX, and beta(X = 1) = 1
    out.derivative_formal = -out.beta.derivative().eval(1);
    const Rational g0 = G.eval(1) / p;
    out.derivative_closed = Rational(2) / (1 + p) + 2 * g0 / (1 - g0);
    return out;
}

RationalFunction a_p_closed(long n, long p) {
    if (n < 0) throw DomainError("n must be non-negative");
    const RationalFunction X = var();
    const Rational absN = rpow(p, -n);
    RationalFunction base = cst(1) / (cst(1) + X / cst(p));
    if (n == 0) return cst(absN) * base;
    const RationalFunction pX = cst(p) * X;
    RationalFunction a = base * (cst(1) - pX.pow(n + 1)) / (cst(1) - pX);
    RationalFunction b = X * X * base * (cst(1) - pX.pow(n - 1)) / (cst(1) - pX);
    return cst(absN) * (a - b);
}

namespace {

// lim_{a,b} Den^+(X, M + <p^m u>) for m >= 0, zero for a non-integral level.
RationalFunction wedhorn_limit(long m, long p) {
    if (m < 0) return RationalFunction(0);
    const RationalFunction X = var(), pX = cst(p) * X;
    return (cst(1) - pX.pow(m + 1)) / ((cst(1) - pX) * (cst(1) - cst(p) * X * X));
}

}  // namespace

RationalFunction a_p_limit_route(long n, long p) {
    if (n < 0) throw DomainError("n must be non-negative");
    const RationalFunction X = var();
    RationalFunction den_delta = wedhorn_limit(n, p) - X * X * wedhorn_limit(n - 2, p);
    RationalFunction nor = RationalFunction(normalizer(p, 1, 1));
    RationalFunction zeta_2s_plus_2 = cst(1) / (cst(1) - X * X / cst(p * p));
    RationalFunction zeta_2s_minus_1 = cst(1) / (cst(1) - cst(p) * X * X);
    return cst(rpow(p, -n)) * nor * den_delta * zeta_2s_plus_2 / zeta_2s_minus_1;
}

RationalFunction whittaker_part_function(const Integer& t, const Integer& N, long p, int genus,
                                         const DensityConfig& cfg) {
    require_level(N, t);
    if (genus != 1 && genus != 2) throw DomainError("genus must be 1 or 2");
    const RationalFunction Y = var();
    const DiscSplit split = fundamental_disc_split(t, N);
    const Rational chi = chi_t(split, p);
    const RationalFunction G = g_p_function(N, t, p, cfg);
    const RationalFunction Df(flat_density_poly(t, N, p, cfg));
    const bool divides = vp(N, p) > 0;
    RationalFunction F = divides ? cst(1) - Y / cst(p) : cst(1) - Y * Y / cst(p * p);
    if (genus == 2)
        return Df * (cst(1) - Y * Y * G.scale_var(p)) / (cst(1) - cst(chi) * Y) * F;
    return Df.scale_var(Rational(1, p)) * (cst(1) - Y * Y / cst(p) * G) / (cst(1) - cst(chi) * Y / cst(p)) * F;
}

LocalWhittakerPart whittaker_finite(const Integer& t, const Integer& N, long p, int k, int genus,
                                    const DensityConfig& cfg) {
    RationalFunction f = whittaker_part_function(t, N, p, genus, cfg);
    LocalWhittakerPart out;
    out.value = f.eval(rpow(p, -k));
    out.prefactor = genus == 2 ? "|2|_p |N|_p^(1/2) gamma(V_p)^2" : "|2N|_p^(1/2) gamma(V_p) (-1,N)_p";
    return out;
}

namespace {

// (m, c) with f = c (X - y)^m + higher order terms; f nonzero.
std::pair<int, Rational> laurent_leading(const RationalFunction& f, const Rational& y) {
    if (f.is_zero()) throw DomainError("Laurent expansion of the zero function");
    const Poly root(std::vector<Rational>{-y, 1});
    auto strip = [&](Poly a, int& m) {
        Poly q, r;
        for (;;) {
            divmod(a, root, q, r);
            if (!r.is_zero()) return a;
            a = q;
            ++m;
        }
    };
    int zn = 0, zd = 0;
    Poly num = strip(f.num(), zn), den = strip(f.den(), zd);
    return {zn - zd, num.eval(y) / den.eval(y)};
}

}  // namespace

CaseResult check_singular_relation(const Integer& N, const Integer& t, long p, int k, const DensityConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> inputs = {
        {"p", std::to_string(p)}, {"N", N.get_str()}, {"t", t.get_str()}, {"k", std::to_string(k)}};
    try {
        const RationalFunction Y = var();
        const DiscSplit split = fundamental_disc_split(t, N);
        const Rational chi = chi_t(split, p);
        const long h = valuation(split.c, p).value;
        const QuadLattice L = make_diagonal(p, {Rational(t), Rational(N)});
        CaseResult fe = check_functional_equation(L, 1, DensityKind::DenFlat, static_cast<int>(h), cfg);
        if (fe.status != CaseStatus::Pass) {
            fe.name = "singular-relation";
            fe.inputs = inputs;
            fe.detail = "Den^flat functional equation exponent mismatch";
            return fe;
        }
        RationalFunction W2 = whittaker_part_function(t, N, p, 2, cfg);
        RationalFunction W1 = whittaker_part_function(t, N, p, 1, cfg).reciprocal(1);  // at s = 1/2 - k
        RationalFunction zeta_2k = cst(1) / (cst(1) - Y * Y);
        RationalFunction zeta_2k2 = cst(1) / (cst(1) - Y * Y / cst(p * p));
        RationalFunction zeta_2m2k = cst(1) / (cst(1) - cst(1) / (cst(p * p) * Y * Y));
        RationalFunction L_k = cst(1) / (cst(1) - cst(chi) * Y);
        RationalFunction L_1mk = cst(1) / (cst(1) - cst(chi) / (cst(p) * Y));
        RationalFunction lhs = (W2 * zeta_2k / L_k) / (W1 * zeta_2m2k / L_1mk);
        RationalFunction rhs = cst(rpow(p, h)) * (Y * Y).pow(static_cast<int>(h)) * zeta_2k / zeta_2k2;
        if (vp(N, p) > 0) rhs *= beta_p_function(N, t, p, cfg).beta;
        const Rational y = rpow(p, -k);
        // At a pole of beta_p both sides are compared by their leading Laurent term in Y - p^-k.
        const auto [lo, lv] = laurent_leading(lhs, y);
        const auto [ro, rv] = laurent_leading(rhs, y);
        if (lo != ro) {
            CaseResult c = make_case("singular-relation", inputs, lhs.to_string("Y"), rhs.to_string("Y"));
            c.status = CaseStatus::Fail;
            c.detail = "vanishing local factor at k = " + std::to_string(k);
            return c;
        }
        auto render = [&](const Rational& v) {
            return lo == 0 ? v.get_str() : v.get_str() + " (Y - " + y.get_str() + ")^" + std::to_string(lo);
        };
        CaseResult c = make_case("singular-relation", inputs, render(lv), render(rv));
        if (lo < 0) c.detail = "pole at k = " + std::to_string(k) + "; leading Laurent coefficients compared";
        if (!(lhs == rhs)) {
            c.status = CaseStatus::Fail;
            c.detail = "formal identity in Y = p^-k fails: " + lhs.to_string("Y") + " vs " + rhs.to_string("Y");
        }
        return c;
    } catch (const BudgetExceeded& e) {
        CaseResult c;
        c.name = "singular-relation";
        c.inputs = inputs;
        c.status = CaseStatus::SkippedBudget;
        c.detail = e.what();
        return c;
    }
}

CaseResult check_level_lowering_sum(const Integer& N, const Integer& t, long p, const DensityConfig& cfg) {
    const long n = vp(N, p);
    if (n < 2) throw DomainError("level lowering needs nu_p(N) >= 2");
    std::vector<std::pair<std::string, std::string>> inputs = {
        {"p", std::to_string(p)}, {"N", N.get_str()}, {"t", t.get_str()}};
    try {
        // s = 1 for the twisted series is k = 0 in the genus-1 Whittaker part.
        const Rational wN = whittaker_part_function(t, N, p, 1, cfg).eval(1);
        Rational lhs = 0;
        Integer M = N;
        for (long i = 1; 2 * i <= n; ++i) {
            M /= p * p;
            const long nm = n - 2 * i;
            const Rational wM = whittaker_part_function(t, M, p, 1, cfg).eval(1);
            Rational c_ratio = rpow(p, -4 * i);
            if (nm == 0) c_ratio /= 1 - rpow(p, -2);
            const Rational absN_ratio = rpow(p, i);  // |2M|_p^{1/2} / |2N|_p^{1/2}
            const Rational R = c_ratio * absN_ratio * wM / wN;
            const Rational phi = nm == 0 ? Rational(1) : rpow(p, nm - 1) * (p - 1);
            lhs += rpow(p, n - 1) * (p - 1) / phi * R;
        }
        const Rational g0 = g_p_function(N, t, p, cfg).eval(1) / p;
        const Rational rhs = g0 / (1 - g0);
        return make_case("level-lowering", inputs, lhs.get_str(), rhs.get_str());
    } catch (const BudgetExceeded& e) {
        CaseResult c;
        c.name = "level-lowering";
        c.inputs = inputs;
        c.status = CaseStatus::SkippedBudget;
        c.detail = e.what();
        return c;
    }
}

Rational eis0_log_coefficient(long n, long p) {
    const Rational P(p);
    return (-n * rpow(p, n + 1) + 2 * rpow(p, n) + n * rpow(p, n - 1) - 2) / (rpow(p, n - 1) * (P * P - 1));
}

SymbolicNumber eis0_closed_form(const Integer& N) {
    if (N < 1) throw DomainError("level N must be positive");
    SymbolicNumber out(1, Symbol::log_det_y());
    out += SymbolicNumber(2);
    out += SymbolicNumber(-4, Symbol::lambda_ratio());
    for (auto [p, n] : factor(N)) out -= SymbolicNumber(eis0_log_coefficient(n, p), Symbol::log_prime(p));
    return out;
}

EisensteinConstantTerm eis0_assemble(const Integer& N, ApNormalization norm) {
    if (N < 1) throw DomainError("level N must be positive");
    // f(s) = y^{-s/2} h(s) G(s) + y^{s/2}, h(s) = (s-1)/(s+1) Lambda(2s-1)/Lambda(2s+2), G = prod A_p.
    Rational G0 = 1;
    SymbolicNumber dlogG;  // G'(0) / G(0)
    for (auto [p, n] : factor(N)) {
        RationalFunction A = a_p_limit_route(n, p);
        if (norm == ApNormalization::Tilde) A *= cst(1) + var() / cst(p);
        const Rational a0 = A.eval(1);
        G0 *= a0;
        // d/ds log A = -log p * A'(X)/A(X) at X = 1
        dlogG += SymbolicNumber(-A.derivative().eval(1) / a0, Symbol::log_prime(p));
    }
    const Rational h0 = -1;  // ((0-1)/(0+1)) * Lambda(-1)/Lambda(2), and Lambda(-1) = Lambda(2)
    auto [c_m1, s_m1] = parse_symbol("Lambda'(-1)/Lambda(-1)");
    auto [c_2, s_2] = parse_symbol("Lambda'(2)/Lambda(2)");
    SymbolicNumber dlogh(-2);
    dlogh += SymbolicNumber(2 * c_m1, s_m1);
    dlogh -= SymbolicNumber(2 * c_2, s_2);
    EisensteinConstantTerm out;
    out.central_value = h0 * G0 + 1;
    SymbolicNumber v(Rational(1, 2) * (-h0 * G0) + Rational(1, 2), Symbol::log_det_y());
    v += (h0 * G0) * dlogh;
    v += (h0 * G0) * dlogG;
    out.value = v;
    return out;
}

EisensteinConstantTerm eis0_derivative(const Integer& N, ApNormalization norm) {
    EisensteinConstantTerm out = eis0_assemble(N, norm);
    if (out.central_value != 0)
        throw DomainError("incoherent constant term does not vanish at s = 0 (value " + out.central_value.get_str() +
                          ")");
    return out;
}

}  // namespace swb

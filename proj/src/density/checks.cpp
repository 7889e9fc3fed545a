#include "engines.hpp"

namespace swb {

namespace {

std::string sign_str(int eps) { return eps > 0 ? "+" : "-"; }

CaseResult skipped(std::string name, std::vector<std::pair<std::string, std::string>> inputs, const std::string& why) {
    CaseResult c;
    c.name = std::move(name);
    c.inputs = std::move(inputs);
    c.status = CaseStatus::SkippedBudget;
    c.detail = why;
    return c;
}

}  // namespace

CaseResult check_difference_formula(int k, int eps, const QuadLattice& M, const Rational& N,
                                    const DensityConfig& cfg) {
    const long p = M.p;
    std::vector<std::pair<std::string, std::string>> inputs = {{"p", std::to_string(p)},
                                                               {"H", "hyp:" + std::to_string(k) + ":" + sign_str(eps)},
                                                               {"M", M.to_string()},
                                                               {"N", N.get_str()}};
    try {
        const QuadLattice H = make_hyperbolic(p, k, eps);
        const int r = M.rank();
        const long n = valuation(N, p).value;
        Rational lhs = local_density(H, direct_sum(M, make_diagonal(p, {N})), cfg).value;
        Rational rhs = 0;
        for (long i = 0; 2 * i <= n; ++i) {
            Rational Ni = N * rpow(p, -2 * i);
            Rational pden = primitive_density(H, make_diagonal(p, {Ni}), cfg).value;
            Rational den = local_density(twist_h(p, k, eps, N, i), M, cfg).value;
            rhs += rpow(p, (2 - k + r) * i) * pden * den;
        }
        return make_case("difference-formula", inputs, lhs.get_str(), rhs.get_str());
    } catch (const BudgetExceeded& e) {
        return skipped("difference-formula", inputs, e.what());
    }
}

int functional_equation_sign(const QuadLattice& L, int eps) {
    const long p = L.p;
    if (p == 2) throw DomainError("functional equation sign is defined here for odd p");
    const int n = L.rank();
    Rational u = eps > 0 ? Rational(1) : Rational(nonresidue(p));
    long binom = static_cast<long>(n + 1) * n / 2;
    Rational second = (binom % 2 ? Rational(1) : Rational(-1)) * u;
    // Hasse product over the q-values of a diagonalization; the 2 a_i product in invariants() differs by
    // (2, det)^(n-1) and gives the wrong sign when (2/p) = -1.
    const std::vector<Rational> a = diagonalize(L);
    int hasse = 1;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j) hasse *= hilbert_symbol(a[i], a[j], p);
    return hilbert_symbol(L.det_T(), second, p) * hasse;
}

CaseResult check_functional_equation(const QuadLattice& L, int eps, DensityKind kind, int flat_exponent,
                                     const DensityConfig& cfg) {
    const long p = L.p;
    std::vector<std::pair<std::string, std::string>> inputs = {
        {"p", std::to_string(p)}, {"L", L.to_string()}, {"eps", sign_str(eps)}, {"kind", to_string(kind)}};
    try {
        DensityPolynomial dp = interpolate_density_polynomial(L, kind, eps, 0, cfg);
        const Poly& P = dp.poly;
        const long val = L.rank() ? valuation(L.det_b(), p).value : 0;
        if (kind == DensityKind::Den) {
            const int w = functional_equation_sign(L, eps);
            if (P.degree() > val) {
                CaseResult c = make_case("functional-equation", inputs, P.to_string(), "degree exceeds val(L)");
                c.status = CaseStatus::Fail;
                return c;
            }
            Poly rhs = P.reciprocal(1, static_cast<int>(val)) * Poly(Rational(w));
            inputs.emplace_back("sign", std::to_string(w));
            return make_case("functional-equation", inputs, P.to_string(), rhs.to_string());
        }
        if (kind != DensityKind::DenFlat) throw DomainError("functional equation is checked for Den and DenFlat");
        const long h = flat_exponent >= 0 ? flat_exponent : val / 2;
        if (P.degree() > 2 * h) {
            CaseResult c = make_case("functional-equation", inputs, P.to_string(), "degree exceeds the exponent");
            c.status = CaseStatus::Fail;
            return c;
        }
        Poly rhs = P.reciprocal(Rational(1, p), static_cast<int>(2 * h)) * Poly(rpow(p, h));
        inputs.emplace_back("exponent", std::to_string(2 * h));
        return make_case("functional-equation", inputs, P.to_string(), rhs.to_string());
    } catch (const BudgetExceeded& e) {
        return skipped("functional-equation", inputs, e.what());
    }
}

CaseResult check_stabilization_target(const QuadLattice& M, const QuadLattice& L, const Rational& a, int m_max,
                                      const DensityConfig& cfg) {
    const long p = M.p;
    std::vector<std::pair<std::string, std::string>> inputs = {
        {"p", std::to_string(p)}, {"M", M.to_string()}, {"L", L.to_string()}, {"a", a.get_str()}};
    try {
        Rational base = local_density(M, L, cfg).value;
        bool prev_equal = false;
        for (int m = 0; m <= m_max; ++m) {
            QuadLattice T = direct_sum(make_diagonal(p, {a * rpow(p, m)}), M);
            Rational v = local_density(T, L, cfg).value;
            bool eq = v == base;
            if (eq && prev_equal) {
                inputs.emplace_back("m0", std::to_string(m - 1));
                return make_case("stabilization-target", inputs, v.get_str(), base.get_str());
            }
            prev_equal = eq;
        }
        CaseResult c = make_case("stabilization-target", inputs, "no stabilization", base.get_str());
        c.status = CaseStatus::Fail;
        return c;
    } catch (const BudgetExceeded& e) {
        return skipped("stabilization-target", inputs, e.what());
    }
}

CaseResult check_stabilization_source(int k, int eps, const QuadLattice& M, const Rational& a, int m_max,
                                      const DensityConfig& cfg) {
    const long p = M.p;
    std::vector<std::pair<std::string, std::string>> inputs = {{"p", std::to_string(p)},
                                                               {"H", "hyp:" + std::to_string(k) + ":" + sign_str(eps)},
                                                               {"M", M.to_string()},
                                                               {"a", a.get_str()}};
    try {
        const int r = M.rank();
        const QuadLattice H = make_hyperbolic(p, k, eps);
        const Rational rho = rpow(p, 2 - k + r);
        if (rho == 1) throw DomainError("stabilization limit needs k != r + 2");
        Rational limit = local_density(make_hyperbolic(p, k - 2, eps), M, cfg).value *
                         primitive_density(H, make_diagonal(p, {Rational(p)}), cfg).value / (1 - rho);
        // D(m) - lim = rho (D(m-2) - lim) once the tail term is constant; extrapolate and compare.
        std::vector<Rational> D;
        bool prev_ok = false;
        for (int m = 0; m <= m_max; ++m) {
            D.push_back(local_density(H, direct_sum(M, make_diagonal(p, {a * rpow(p, m)})), cfg).value);
            if (m < 2) continue;
            Rational extrapolated = (D[m] - rho * D[m - 2]) / (1 - rho);
            bool ok = extrapolated == limit;
            if (ok && prev_ok) {
                inputs.emplace_back("m0", std::to_string(m - 1));
                return make_case("stabilization-source", inputs, extrapolated.get_str(), limit.get_str());
            }
            prev_ok = ok;
        }
        CaseResult c = make_case("stabilization-source", inputs, "no stabilization", limit.get_str());
        c.status = CaseStatus::Fail;
        return c;
    } catch (const BudgetExceeded& e) {
        return skipped("stabilization-source", inputs, e.what());
    }
}

}  // namespace swb

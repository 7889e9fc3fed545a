#include "swb/geometry.hpp"

#include <doctest.h>

#include <numeric>

using namespace swb;

namespace {

// phi and psi by direct counting, independent of the factorization helpers.
Integer phi_count(long N) {
    long c = 0;
    for (long a = 1; a <= N; ++a) c += std::gcd(a, N) == 1;
    return c;
}

// psi(N) = [SL_2(Z) : Gamma_0(N)] = number of points of P^1(Z/N).
Integer psi_count(long N) {
    long c = 0;
    for (long a = 0; a < N; ++a)
        for (long b = 0; b < N; ++b)
            if (std::gcd(std::gcd(a, b), N) == 1) ++c;
    return c / phi_count(N).get_si();
}

}  // namespace

TEST_CASE("arithmetic functions") {
    CHECK(dedekind_psi(1) == 1);
    CHECK(euler_phi(1) == 1);
    CHECK(dedekind_psi(2) == 3);
    CHECK(dedekind_psi(12) == 24);
    CHECK(euler_phi(12) == 4);
    for (long N = 1; N <= 60; ++N) {
        CAPTURE(N);
        CHECK(euler_phi(N) == phi_count(N));
        CHECK(dedekind_psi(N) == psi_count(N));
        int mu = 1;
        for (const auto& [p, e] : prime_factorization(N)) mu = e > 1 ? 0 : -mu;
        CHECK(moebius(N) == mu);
    }
}

TEST_CASE("a_N identities") {
    for (long p : {2L, 3L, 5L, 7L}) {
        CHECK(a_N(p, 1) == -1);
        CHECK(a_N(p, p) == p);
    }
    Integer s = 0;
    for (const Integer& t : divisors(12)) s += a_N(12, t);
    CHECK(s == euler_phi(12));
    CHECK(a_N(4, 2) == 2 * a_N(2, 1));
    for (long N = 2; N <= 60; ++N) {
        Integer s0 = 0, s1 = 0;
        Rational sm = 0;
        for (const Integer& t : divisors(N)) {
            s0 += a_N(N, t);
            s1 += t * a_N(N, t);
            sm += Rational(a_N(N, t)) / t;
        }
        CAPTURE(N);
        CHECK(s0 == euler_phi(N));
        CHECK(s1 == dedekind_psi(N) * euler_phi(N));
        CHECK(sm == 0);
        for (const auto& [p, e] : prime_factorization(N))
            for (const Integer& t : divisors(N / p)) CHECK(a_N(N, p * t) == p * a_N(N / p, t));
    }
    // the two cusps of X_0(1) coincide, so the inverse-weighted sum is a_1(1) = 1
    CHECK(a_N(1, 1) == 1);
}

TEST_CASE("cusp components and ramification") {
    std::vector<CuspComponent> c = cusp_components(2, 2);
    REQUIRE(c.size() == 3);
    CHECK(c[0].a == -2);
    CHECK(c[0].deg1 == 4);
    CHECK(c[1].deg1 == 1);
    CHECK(c[2].deg1 == 1);
    for (long p : {2L, 3L, 5L})
        for (long n = 1; n <= 4; ++n) {
            Integer s1 = 0, s2 = 0;
            for (const auto& cc : cusp_components(p, n)) {
                s1 += cc.deg1;
                s2 += cc.deg2;
            }
            CHECK(s1 == dedekind_psi(ipow(p, n)));
            CHECK(s2 == dedekind_psi(ipow(p, n)));
        }
    CuspClass mid = classify_cusp(3, 2, 1, 1);
    CHECK(mid.component == 0);
    CHECK(mid.ra1 == 1);
    CHECK(mid.ra2 == 1);
    for (long p : {2L, 3L, 5L})
        for (long n = 1; n <= 3; ++n) {
            CuspClass inf = classify_cusp(p, n, 1, n);
            CHECK(inf.component == n);
            CHECK(inf.ra1 == 1);
            CHECK(inf.ra2 == ipow(p, n));
        }
}

TEST_CASE("special fibers") {
    for (long p : {2L, 3L, 5L}) {
        std::vector<FiberComponent> f = special_fiber(p, p);
        REQUIRE(f.size() == 2);
        CHECK(f[0].multiplicity == 1);
        CHECK(f[1].multiplicity == 1);
        CHECK(std::abs(f[0].a) == 1);
        CHECK(std::abs(f[1].a) == 1);
        std::vector<FiberComponent> g = special_fiber(7, p);
        REQUIRE(g.size() == 1);
        CHECK(g[0].a == 0);
        CHECK(g[0].multiplicity == 1);
        for (long N : {p * p, p * p * p * 5, p * 2 * 5}) {
            Integer s = 0;
            for (const auto& fc : special_fiber(N, p)) s += fc.multiplicity * fc.degree_p1;
            CHECK(s == dedekind_psi(N));
        }
    }
}

TEST_CASE("pairings of vertical components") {
    const Rational l = Rational(1) / 24;
    CHECK(intersection_pairing(vertical_component(2, 2, 1), vertical_component(2, 2, -1)) ==
          SymbolicNumber(l, Symbol::log_prime(2)));
    CHECK(intersection_pairing(vertical_component(2, 2, 1), vertical_component(2, 2, 1)) ==
          SymbolicNumber(-l, Symbol::log_prime(2)));
    for (long N : {2L, 3L, 4L, 9L, 12L, 50L})
        for (const auto& [p, e] : prime_factorization(N)) {
            CAPTURE(N);
            CHECK(check_div_p_trivial(N, p).status == CaseStatus::Pass);
            for (long a = -e; a <= e; a += 2) CHECK(intersection_pairing(vertical_component(N, p, a), div_p(N, p)).is_zero());
        }
    CHECK_THROWS_AS(vertical_component(3, 2, 1), DomainError);
    CHECK_THROWS_AS(vertical_component(4, 2, 1), DomainError);
    DivisorLedger inf(4);
    inf.add_cusp_inf(1);
    CHECK_THROWS_AS(intersection_pairing(inf, vertical_component(4, 2, 2)), DomainError);
    CHECK_THROWS_AS(intersection_pairing(inf, inf), DomainError);
    CHECK(intersection_pairing(inf, vertical_component(4, 2, 0)).is_zero());
}

TEST_CASE("xhat self-intersection and Atkin-Lehner symmetry") {
    CHECK(xhat_self_intersection(2, 2) == SymbolicNumber(Rational(-1) / 24, Symbol::log_prime(2)));
    for (long p : {2L, 3L, 5L})
        for (long N : {p, p * p, p * p * p, 2 * 5 * p * p}) {
            CAPTURE(N);
            const DivisorLedger X = xhat(N, p);
            CHECK(intersection_pairing(X, X) == xhat_self_intersection_closed(N, p));
            CHECK(atkin_lehner_pullback(X) == X * Rational(-1));
            CHECK(atkin_lehner_pullback(atkin_lehner_pullback(f_p(N, p))) == f_p(N, p));
        }
    DivisorLedger inf(6);
    inf.add_cusp_inf(3);
    DivisorLedger zero(6);
    zero.add_cusp_zero(3);
    CHECK(atkin_lehner_pullback(inf) == zero);
}

TEST_CASE("divisors of the Delta sections") {
    for (long p : {2L, 3L, 5L, 7L}) {
        const DivisorLedger F = f_p(p, p);
        CHECK(F.coefficient(p, -1) == -12 * p);
        CHECK(F.coefficient(p, 1) == 0);
        for (long n = 2; n <= 4; ++n) CHECK(f_p(ipow(p, n), p).coefficient(p, n) == 0);
        CHECK(fp_self_pairing_closed(p, p) == SymbolicNumber(Rational(-6 * p * p * (p - 1)), Symbol::log_prime(p)));
        CHECK(intersection_pairing(F, F) == fp_self_pairing_closed(p, p));
    }
    CHECK(div_delta_section(12).delta.cusp_inf == dedekind_psi(12) * euler_phi(12));
    CHECK(div_delta_section(1).delta.to_string() == "1*P_inf");
    for (long N = 1; N <= 60; ++N) {
        CAPTURE(N);
        CHECK(check_hodge_difference(N).status == CaseStatus::Pass);
    }
}

TEST_CASE("self-pairing of Delta and the T = 0 assembly") {
    const SymbolicNumber w1 = SymbolicNumber(Rational(1) / 2) - SymbolicNumber(1, Symbol::lambda_ratio());
    CHECK(delta_self_pairing(1).total == w1 * Rational(6));
    CHECK(omega_self_pairing(1) == w1 * (Rational(1) / 24));
    DeltaSelfPairing d4 = delta_self_pairing(4);
    CHECK(d4.fp_pairings.at(2) == fp_self_pairing_closed(4, 2));
    CHECK(geometric_t0_side(1).value.to_string() == "log_det_y + 2 - 4*LambdaRatio");
    CHECK(geometric_t0_side(2).value.to_string() == "log_det_y + 2 - 4*LambdaRatio + 1/3*log(2)");
    for (long N = 1; N <= 60; ++N) {
        CAPTURE(N);
        CHECK(geometric_t0_side(N).value == eis0_derivative(N).value);
        CHECK(check_siegel_weil_t0(N).status == CaseStatus::Pass);
    }
}

#include "swb/analytic.hpp"

#include <doctest.h>

using namespace swb;

namespace {

// Coefficient of log p in d/ds log F(p^{-s}) at s = 0.
Rational log_derivative_at_zero(const RationalFunction& F) {
    return -F.derivative().eval(1) / F.eval(1);
}

}  // namespace

TEST_CASE("fundamental discriminant split") {
    DiscSplit a = fundamental_disc_split(1, 3);
    CHECK(a.d == 3);
    CHECK(a.c == 2);
    DiscSplit b = fundamental_disc_split(-1, 1);
    CHECK(b.d == -1);
    CHECK(b.c == 2);
    DiscSplit c = fundamental_disc_split(1, 1);
    CHECK(c.d == 4);
    CHECK(c.c == 1);
    for (long t = -12; t <= 12; ++t)
        for (long N = 1; N <= 12; ++N) {
            if (t == 0) continue;
            DiscSplit s = fundamental_disc_split(t, N);
            CHECK(s.c * s.c * s.d == 4 * N * t);
            if (s.d != -1) CHECK(chi_t(s, 5) == kronecker(-Integer(s.d).get_si(), 5));
        }
    CHECK(chi_t(fundamental_disc_split(-1, 1), 7) == 1);
    CHECK(chi_t(fundamental_disc_split(-4, 9), 3) == 1);
}

TEST_CASE("g_p vanishes at low level and satisfies its functional equation") {
    for (long p : {2L, 3L, 5L})
        for (long nu : {0L, 1L}) CHECK(g_p_function(ipow(p, nu) * 7, 3, p).is_zero());
    RationalFunction G = g_p_function(9, 1, 3);
    CHECK_FALSE(G.is_zero());
    CHECK(g_p_functional_equation_holds(G, 3));
    for (long p : {2L, 3L})
        for (long nu = 2; nu <= 4; ++nu)
            for (long t : {-5L, -2L, -1L, 1L, 3L, 6L}) {
                CAPTURE(p);
                CAPTURE(nu);
                CAPTURE(t);
                CHECK(g_p_functional_equation_holds(g_p_function(ipow(p, nu), t, p), p));
            }
    CHECK_FALSE(g_p_functional_equation_holds(RationalFunction(Poly::x()), 3));
}

TEST_CASE("beta_p at the center") {
    for (long p : {2L, 3L, 5L}) {
        BetaFunction b = beta_p_function(p * 7, 1, p);
        CHECK(b.beta.eval(1) == 1);
        CHECK(b.derivative_formal == Rational(2) / (1 + p));
        CHECK(b.derivative_closed == b.derivative_formal);
        for (long nu = 2; nu <= 3; ++nu)
            for (long t : {-3L, 1L, 2L}) {
                BetaFunction g = beta_p_function(ipow(p, nu), t, p);
                CAPTURE(p);
                CAPTURE(nu);
                CAPTURE(t);
                CHECK(g.beta.eval(1) == 1);
                CHECK(g.derivative_formal == g.derivative_closed);
            }
    }
}

TEST_CASE("A_p closed form and limit route") {
    const RationalFunction X(Poly::x());
    for (long p : {2L, 3L, 5L, 7L}) {
        CHECK(a_p_closed(0, p) == RationalFunction(1) / (RationalFunction(1) + X * Rational(1) / p));
        CHECK(a_p_closed(1, p) == RationalFunction(Rational(1) / p) * (RationalFunction(1) + X * Rational(p)) /
                                      (RationalFunction(1) + X * Rational(1) / p));
        CHECK(log_derivative_at_zero(a_p_closed(1, p)) == -Rational(p - 1) / (p + 1));
        for (long n = 0; n <= 4; ++n) {
            CAPTURE(p);
            CAPTURE(n);
            CHECK(a_p_limit_route(n, p) == a_p_closed(n, p));
            if (n >= 1) CHECK(log_derivative_at_zero(a_p_closed(n, p)) == eis0_log_coefficient(n, p));
        }
    }
}

TEST_CASE("Whittaker local factors") {
    const RationalFunction W2 = whittaker_part_function(1, 7, 3, 2);
    CHECK(W2.eval(rpow(3, -2)) == whittaker_finite(1, 7, 3, 2, 2).value);
    const RationalFunction W1 = whittaker_part_function(1, 9, 3, 1);
    CHECK(W1.eval(rpow(3, -3)) == whittaker_finite(1, 9, 3, 3, 1).value);
}

TEST_CASE("singular relation") {
    CHECK(check_singular_relation(9, 1, 3, 2).status == CaseStatus::Pass);
    CHECK(check_singular_relation(7, 1, 3, 2).status == CaseStatus::Pass);
    CHECK(check_singular_relation(7, 6, 3, 3).status == CaseStatus::Pass);
    CHECK(check_singular_relation(8, -1, 2, 1).status == CaseStatus::Pass);
    for (long t : {-4L, -1L, 2L, 5L}) {
        CAPTURE(t);
        CHECK(check_singular_relation(27, t, 3, 1).status == CaseStatus::Pass);
        CHECK(check_singular_relation(4 * 7, t, 2, 2).status == CaseStatus::Pass);
    }
}

TEST_CASE("level lowering") {
    for (long t : {-2L, 1L, 3L}) {
        CAPTURE(t);
        CHECK(check_level_lowering_sum(9, t, 3).status == CaseStatus::Pass);
        CHECK(check_level_lowering_sum(27, t, 3).status == CaseStatus::Pass);
        CHECK(check_level_lowering_sum(16, t, 2).status == CaseStatus::Pass);
    }
    CHECK_THROWS_AS(check_level_lowering_sum(3, 1, 3), DomainError);
}

TEST_CASE("constant term derivative") {
    CHECK(eis0_derivative(1).value.to_string() == "log_det_y + 2 - 4*LambdaRatio");
    CHECK(eis0_log_coefficient(2, 2) == -1);
    for (long p : {2L, 3L, 5L, 7L}) CHECK(eis0_log_coefficient(1, p) == -Rational(p - 1) / (p + 1));
    CHECK(eis0_derivative(4).value.coefficient(Symbol::log_prime(2)) == 1);
    for (long N = 1; N <= 60; ++N) {
        CAPTURE(N);
        EisensteinConstantTerm e = eis0_derivative(N);
        CHECK(e.central_value == 0);
        CHECK(e.value == eis0_closed_form(N));
    }
}

TEST_CASE("tilde normalization leaves a nonzero central value") {
    int nonzero = 0;
    for (long N = 2; N <= 30; ++N) nonzero += eis0_assemble(N, ApNormalization::Tilde).central_value != 0;
    CHECK(nonzero > 0);
    CHECK_THROWS_AS(eis0_derivative(4, ApNormalization::Tilde), DomainError);
}

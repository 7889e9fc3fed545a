#include "swb/density.hpp"
#include "../src/density/engines.hpp"

#include <doctest.h>

#include <random>

using namespace swb;

namespace {

long to_long(const Rational& r) {
    REQUIRE(r.get_den() == 1);
    return r.get_num().get_si();
}

// Naive count over (M / p^d M)^n for rank-1 or rank-2 integral sources.
long naive_count(const QuadLattice& M, const QuadLattice& L, int d, bool primitive, Convention conv) {
    const long p = M.p, P = ipow(p, d).get_si();
    const int m = M.rank(), n = L.rank();
    const long mod_b = conv == Convention::B ? 2 * P : P;
    auto q = [&](const std::vector<long>& x) {
        long s = 0;
        for (int i = 0; i < m; ++i) {
            s += to_long(M.gram[i][i]) * x[i] * x[i];
            for (int j = i + 1; j < m; ++j) s += to_long(M.gram[i][j]) * x[i] * x[j];
        }
        return s;
    };
    auto bil = [&](const std::vector<long>& x, const std::vector<long>& y) {
        long s = 0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) s += to_long(M.b(i, j)) * x[i] * y[j];
        return s;
    };
    auto mod = [](long a, long r) { return ((a % r) + r) % r; };
    std::vector<std::vector<long>> vecs;
    long total = 1;
    for (int i = 0; i < m; ++i) total *= P;
    for (long code = 0; code < total; ++code) {
        std::vector<long> x(m);
        long c = code;
        for (int i = 0; i < m; ++i, c /= P) x[i] = c % P;
        vecs.push_back(x);
    }
    auto nonzero_mod_p = [&](const std::vector<long>& x) {
        for (long v : x)
            if (v % p) return true;
        return false;
    };
    long count = 0;
    const long q0 = to_long(L.q(0));
    for (const auto& x : vecs) {
        if (mod(q(x) - q0, P)) continue;
        if (n == 1) {
            if (!primitive || nonzero_mod_p(x)) ++count;
            continue;
        }
        const long q1 = to_long(L.q(1)), b01 = to_long(L.b(0, 1));
        for (const auto& y : vecs) {
            if (mod(q(y) - q1, P) || mod(bil(x, y) - b01, mod_b)) continue;
            if (primitive) {
                bool indep = false;
                for (int i = 0; i < m && !indep; ++i)
                    for (int j = i + 1; j < m && !indep; ++j) indep = mod(x[i] * y[j] - x[j] * y[i], p) != 0;
                if (!indep) continue;
            }
            ++count;
        }
    }
    return count;
}

DensityConfig with_engine(Engine e) {
    DensityConfig cfg;
    cfg.engine = e;
    return cfg;
}

}  // namespace

TEST_CASE("dimension and trivial counts") {
    CHECK(rep_dimension(4, 1) == 3);
    CHECK(rep_dimension(4, 2) == 5);
    CHECK(count_reps(make_hyperbolic(3, 2, 1), make_diagonal(3, {}), 3, false) == 1);
    CHECK(count_reps(make_hyperbolic(3, 2, 1), make_diagonal(3, {1}), 2, false) == 6);
    CHECK(count_reps(make_hyperbolic(3, 2, 1), make_diagonal(3, {1}), 2, true) == 6);
    CHECK_THROWS_AS(count_reps(make_hyperbolic(3, 2, 1), make_diagonal(5, {1}), 2, false), DomainError);
}

TEST_CASE("count engines agree with a naive enumeration") {
    struct Case {
        std::string M, L;
        long p;
        int d;
    };
    const std::vector<Case> cases = {
        {"hyp:2:+", "diag:1", 3, 3},      {"hyp:4:+", "diag:3", 3, 2},        {"hyp:4:-", "diag:9", 3, 2},
        {"diag:1,1,1", "diag:2", 5, 2},   {"hyp:2:+", "diag:4", 2, 4},        {"hyp:4:+", "diag:2", 2, 2},
        {"hyp:2:+", "diag:1,3", 3, 2},    {"diag:1,2,3", "diag:1,3", 3, 2},   {"hyp:2:+", "diag:1,1", 2, 3},
        {"hyp:2:+", "diag:2,6", 2, 4},    {"diag:1,1,1", "diag:1,2", 2, 2},   {"hyp:4:+", "diag:1,3", 2, 2},
        {"delta:3", "diag:1", 3, 2},      {"delta:2", "diag:2,1", 2, 2},    {"diag:1,1,3", "diag:2,3", 3, 2},
        {"diag:1,3,9", "diag:1,9", 3, 2}, {"diag:2,5", "diag:3,5", 5, 2},
    };
    for (const Case& c : cases) {
        QuadLattice M = parse_lattice(c.M, c.p), L = parse_lattice(c.L, c.p);
        for (bool primitive : {false, true})
            for (Convention conv : {Convention::A, Convention::B}) {
                CAPTURE(c.M);
                CAPTURE(c.L);
                CAPTURE(primitive);
                CAPTURE(to_string(conv));
                const long oracle = naive_count(M, L, c.d, primitive, conv);
                DensityConfig cfg = with_engine(Engine::Enumerate);
                cfg.convention = conv;
                CHECK(count_reps(M, L, c.d, primitive, cfg) == oracle);
                if (conv == Convention::B) continue;
                CHECK(count_reps(M, L, c.d, primitive) == oracle);
                if (L.rank() == 1) CHECK(count_reps(M, L, c.d, primitive, with_engine(Engine::Histogram)) == oracle);
                if (L.rank() == 2 && c.p == 2 && !primitive)
                    CHECK(count_reps(M, L, c.d, primitive, with_engine(Engine::Gram)) == oracle);
            }
    }
}

TEST_CASE("scalar and avx2 kernels agree") {
    using namespace swb::detail;
    std::mt19937_64 rng(11);
    for (std::uint32_t mod : {8u, 9u, 27u, 25u, 64u, 121u, 343u}) {
        for (int m : {1, 3, 4, 6}) {
            CandidateSoA cand;
            cand.m = m;
            cand.count = 1 + rng() % 2000;
            cand.stride = (cand.count + 7) / 8 * 8;
            cand.coord.assign(static_cast<std::size_t>(m) * cand.stride, 0);
            for (int l = 0; l < m; ++l)
                for (std::size_t i = 0; i < cand.count; ++i) cand.coord[l * cand.stride + i] = rng() % 3 ? rng() % mod : 0;
            const int nc = 1 + static_cast<int>(rng() % 3);
            std::vector<std::uint32_t> w(nc * m), t(nc);
            for (auto& x : w) x = rng() % mod;
            for (auto& x : t) x = rng() % 2 ? rng() % mod : 0;
            const KernelModulus km = make_modulus(mod);
            const std::uint64_t s = count_matches_scalar(cand, w.data(), t.data(), nc, km);
            std::uint64_t brute = 0;
            for (std::size_t i = 0; i < cand.count; ++i) {
                bool ok = true;
                for (int c = 0; c < nc && ok; ++c) {
                    std::uint64_t acc = 0;
                    for (int l = 0; l < m; ++l) acc += std::uint64_t(w[c * m + l]) * cand.coord[l * cand.stride + i];
                    ok = acc % mod == t[c];
                }
                brute += ok;
            }
            CAPTURE(mod);
            CAPTURE(m);
            CHECK(s == brute);
            if (avx2_available()) CHECK(count_matches_avx2(cand, w.data(), t.data(), nc, km) == s);
        }
    }
}

TEST_CASE("density counts do not depend on the selected kernel") {
    using namespace swb::detail;
    QuadLattice M = make_hyperbolic(3, 4, 1), L = make_diagonal(3, {1, 3});
    set_kernel_override(1);
    const Integer scalar = enumerate_count(M, L, 2, false, Convention::A, std::uint64_t(1) << 34, 1);
    set_kernel_override(avx2_available() ? 2 : 1);
    const Integer vec = enumerate_count(M, L, 2, false, Convention::A, std::uint64_t(1) << 34, 1);
    set_kernel_override(0);
    CHECK(scalar == vec);
    CHECK(enumerate_count(M, L, 2, false, Convention::A, std::uint64_t(1) << 34, 3) == scalar);
}

TEST_CASE("budget exceeded is reported") {
    DensityConfig cfg = with_engine(Engine::Enumerate);
    cfg.budget = 1000;
    CHECK_THROWS_AS(count_reps(make_hyperbolic(5, 4, 1), make_diagonal(5, {1, 2}), 3, false, cfg), BudgetExceeded);
}

TEST_CASE("density values") {
    CHECK(local_density(make_hyperbolic(3, 2, 1), make_diagonal(3, {1})).value == Rational(2) / 3);
    CHECK(primitive_density(make_hyperbolic(3, 3, 1), make_diagonal(3, {3})).value == Rational(8) / 9);
    for (long p : {3L, 5L, 7L}) CHECK(primitive_density(make_hyperbolic(p, 4, 1), make_diagonal(p, {1})).value == 1 - rpow(p, -2));
    // frozen from the enumeration engine
    CHECK(local_density(make_hyperbolic(3, 4, 1), make_diagonal(3, {1})).value == Rational(8) / 9);
    CHECK(local_density(make_hyperbolic(3, 4, 1), make_diagonal(3, {1, 3})).value == Rational(64) / 81);
    CHECK(local_density(make_hyperbolic(3, 4, -1), make_diagonal(3, {1, 3})).value == Rational(80) / 81);
    CHECK(local_density(make_hyperbolic(3, 4, 1), make_diagonal(3, {9})).value == Rational(104) / 81);
    CHECK(local_density(make_hyperbolic(2, 4, 1), make_diagonal(2, {1})).value == Rational(3) / 4);
}

TEST_CASE("engines agree on stabilized densities") {
    struct Case {
        std::string M, L;
        long p;
    };
    // small enough for the enumeration engine to serve as the reference
    const std::vector<Case> cases = {
        {"hyp:2:+", "diag:1,3", 3}, {"hyp:2:+", "diag:1,9", 3}, {"diag:1,2", "diag:1,2", 3},
        {"hyp:4:+", "diag:1", 5},   {"hyp:2:+", "diag:2,6", 2}, {"diag:1,1,1", "diag:1", 3},
        {"hyp:4:-", "diag:3", 3},   {"diag:1,1,1", "diag:1,1", 3},
    };
    for (const Case& c : cases) {
        QuadLattice M = parse_lattice(c.M, c.p), L = parse_lattice(c.L, c.p);
        CAPTURE(c.M);
        CAPTURE(c.L);
        const Rational ref = local_density(M, L, with_engine(Engine::Enumerate)).value;
        CHECK(local_density(M, L).value == ref);
        if (detail::saturation_applies(M, L)) CHECK(local_density(M, L, with_engine(Engine::Saturation)).value == ref);
        if (L.rank() == 1) CHECK(local_density(M, L, with_engine(Engine::Histogram)).value == ref);
        const Rational pref = primitive_density(M, L, with_engine(Engine::Enumerate)).value;
        CHECK(primitive_density(M, L).value == pref);
    }
}

TEST_CASE("rank-1 primitive density matches the closed form") {
    for (long p : {3L, 5L})
        for (int k = 2; k <= 6; ++k)
            for (int eps : {1, -1})
                for (long nu = 0; nu <= 2; ++nu)
                    for (long u : {1L, nonresidue(p)}) {
                        const Rational N = Rational(u) * rpow(p, nu);
                        CAPTURE(p);
                        CAPTURE(k);
                        CAPTURE(eps);
                        CAPTURE(N.get_str());
                        DensityConfig cfg = with_engine(Engine::Histogram);
                        CHECK(primitive_density(make_hyperbolic(p, k, eps), make_diagonal(p, {N}), cfg).value ==
                              pden_rank1_closed(k, eps, N, p));
                    }
    for (long nu = 0; nu <= 2; ++nu)
        for (long u : {1L, 3L, 5L, 7L}) {
            const Rational N = Rational(u) * rpow(2, nu);
            CHECK(primitive_density(make_hyperbolic(2, 4, 1), make_diagonal(2, {N}), with_engine(Engine::Histogram)).value ==
                  pden_rank1_closed(4, 1, N, 2));
        }
    CHECK(pden_rank1_closed(3, 1, 3, 3) == Rational(8) / 9);
    CHECK(pden_rank1_closed(4, 1, 3, 3) == (1 - Rational(1) / 9) * (1 + Rational(1) / 3));
    CHECK(pden_rank1_closed(3, 1, 1, 3) == Rational(4) / 3);
    CHECK_THROWS_AS(pden_rank1_closed(3, 1, 1, 2), DomainError);
    CHECK_THROWS_AS(pden_rank1_closed(4, -1, 1, 2), DomainError);
}

TEST_CASE("normalizers and derived densities") {
    CHECK(normalizer(3, 1, 1) == Poly(std::vector<Rational>{1, Rational(-1) / 3}));
    DensityPolynomial d;
    d.poly = Poly(std::vector<Rational>{1, -1});
    CHECK(derived_density(d) == 1);
    d.poly = Poly(7);
    CHECK(derived_density(d) == 0);
    d.poly = normalizer(5, 1, 1);
    CHECK(derived_density(d) == Rational(1) / 5);
}

TEST_CASE("density polynomials reproduce extra samples") {
    DensityPolynomial e = interpolate_density_polynomial(make_diagonal(3, {}), DensityKind::Den, 1);
    CHECK(e.poly.degree() == 0);
    CHECK(e.poly.eval(Rational(1) / 3) == density_sample(make_diagonal(3, {}), DensityKind::Den, 1, 1));
    for (const char* spec : {"diag:1", "diag:3,1", "diag:1,9", "diag:3,3"}) {
        QuadLattice L = parse_lattice(spec, 3);
        for (DensityKind kind : {DensityKind::Den, DensityKind::DenFlat}) {
            DensityPolynomial P = interpolate_density_polynomial(L, kind, 1);
            const int k = P.samples + 1;
            CAPTURE(spec);
            CHECK(P.poly.eval(rpow(3, -k)) == density_sample(L, kind, 1, k));
        }
    }
    // self-dual rank 2 source: DenFlat is constant 1
    CHECK(interpolate_density_polynomial(make_diagonal(5, {1, 2}), DensityKind::DenFlat, 1).poly == Poly(1));
}

TEST_CASE("functional equations") {
    CHECK(check_functional_equation(make_diagonal(5, {1}), 1, DensityKind::Den).status == CaseStatus::Pass);
    CHECK(check_functional_equation(make_diagonal(3, {1, 3}), 1, DensityKind::DenFlat).status == CaseStatus::Pass);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 12; ++i) {
        const long p = i % 2 ? 5 : 3;
        std::vector<Rational> a;
        const int rank = 1 + static_cast<int>(rng() % 2);
        for (int j = 0; j < rank; ++j) a.push_back(Rational(1 + static_cast<long>(rng() % (p - 1))) * rpow(p, rng() % 3));
        QuadLattice L = make_diagonal(p, a);
        CAPTURE(L.to_string());
        for (int eps : {1, -1}) {
            CHECK(check_functional_equation(L, eps, DensityKind::Den).status == CaseStatus::Pass);
            CHECK(check_functional_equation(L, eps, DensityKind::DenFlat).status == CaseStatus::Pass);
        }
    }
    // p = 2 takes nu_2(c) with 4 N t = c^2 d: 16 = 2^2 * 4 for <2,2>, and -4 = 2^2 * (-1) for <-1,1>.
    CHECK(check_functional_equation(make_diagonal(2, {2, 2}), 1, DensityKind::DenFlat, 1).status == CaseStatus::Pass);
    CHECK(check_functional_equation(make_diagonal(2, {-1, 1}), 1, DensityKind::DenFlat, 1).status == CaseStatus::Pass);
    CHECK(interpolate_density_polynomial(make_diagonal(2, {-1, 1}), DensityKind::DenFlat, 1).poly ==
          Poly(std::vector<Rational>{1, -1, 2}));
    CHECK(interpolate_density_polynomial(make_diagonal(3, {1, 9}), DensityKind::DenFlat, 1).poly ==
          Poly(std::vector<Rational>{1, 1, 3}));
}

TEST_CASE("difference formula examples") {
    CHECK(check_difference_formula(4, 1, make_diagonal(3, {1}), 3).status == CaseStatus::Pass);
    CHECK(check_difference_formula(4, 1, make_diagonal(3, {1}), 2).status == CaseStatus::Pass);
    CHECK(check_difference_formula(4, 1, make_diagonal(2, {1}), 4).status == CaseStatus::Pass);
    CHECK(check_difference_formula(4, -1, make_diagonal(5, {1, 5}), 25).status == CaseStatus::Pass);
    CHECK(check_difference_formula(6, 1, make_diagonal(3, {2}), 27).status == CaseStatus::Pass);
}

TEST_CASE("stabilization in the target and in the source") {
    CHECK(check_stabilization_target(make_diagonal(3, {1}), make_diagonal(3, {1}), 1, 6).status == CaseStatus::Pass);
    CHECK(check_stabilization_source(4, 1, make_diagonal(3, {1}), 1, 8).status == CaseStatus::Pass);
    CHECK(check_stabilization_source(4, 1, make_diagonal(3, {}), 1, 8).status == CaseStatus::Pass);
}

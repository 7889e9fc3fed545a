#include "swb/lattice.hpp"

#include <doctest.h>

#include <random>

using namespace swb;

namespace {

QuadLattice random_lattice(std::mt19937_64& rng, long p, int rank) {
    for (;;) {
        Matrix g(rank, std::vector<Rational>(rank, 0));
        for (int i = 0; i < rank; ++i) {
            long v = static_cast<long>(rng() % 3);
            g[i][i] = Rational(static_cast<long>(rng() % 11) - 5) * static_cast<long>(ipow(p, v).get_si());
            for (int j = i + 1; j < rank; ++j) g[i][j] = g[j][i] = Rational(static_cast<long>(rng() % 7) - 3) * p;
        }
        QuadLattice L{p, g};
        if (L.det_b() != 0) return L;
    }
}

// Integral matrix whose determinant is a p-adic unit.
Matrix random_unimodular(std::mt19937_64& rng, long p, int rank) {
    for (;;) {
        Matrix c(rank, std::vector<Rational>(rank, 0));
        for (auto& row : c)
            for (auto& x : row) x = static_cast<long>(rng() % 9) - 4;
        Rational d = determinant(c);
        if (d != 0 && valuation(d, p).value == 0) return c;
    }
}

}  // namespace

TEST_CASE("constructors") {
    QuadLattice h = make_hyperbolic(5, 2, 1);
    CHECK(h.q(0) == 0);
    CHECK(h.q(1) == 0);
    CHECK(h.b(0, 1) == 1);
    CHECK(make_hyperbolic(3, 4, -1).rank() == 4);
    CHECK_THROWS_AS(make_hyperbolic(2, 3, 1), DomainError);
    CHECK_THROWS_AS(make_hyperbolic(2, 2, -1), DomainError);
    CHECK_THROWS_AS(make_delta(3, 0), DomainError);
    QuadLattice d = make_delta(7, 5);
    CHECK(d.rank() == 3);
    CHECK(d.q_of({1, 0, 0}) == -5);
    CHECK(d.q_of({0, 1, 1}) == -1);
    CHECK(invariants(make_diagonal(3, {1})).val == 0);
}

TEST_CASE("direct sums") {
    QuadLattice L = make_diagonal(3, {1, 3});
    CHECK(direct_sum(L, make_diagonal(3, {})) == L);
    CHECK(direct_sum(make_diagonal(3, {1}), make_diagonal(3, {3})) == L);
    CHECK(direct_sum(make_hyperbolic(5, 2, 1), make_delta(5, 10)).rank() == 5);
    CHECK_THROWS_AS(direct_sum(make_diagonal(3, {1}), make_diagonal(5, {1})), DomainError);
}

TEST_CASE("delta lattice invariants") {
    for (long p : {3L, 5L, 7L, 11L})
        for (long N = -30; N <= 30; ++N) {
            if (N == 0) continue;
            CAPTURE(p);
            CAPTURE(N);
            LatticeInvariants inv = invariants(make_delta(p, N));
            REQUIRE(inv.chi.has_value());
            CHECK(*inv.chi == quad_residue_symbol(-N, p));
            CHECK(inv.hasse == hilbert_symbol(N, -1, p));
            // dual quotient has order |2N|_p^{-1}
            CHECK(valuation(make_delta(p, N).det_b(), p).value == valuation(Integer(2 * N), p));
        }
    // At p = 2 the pairwise product over the q-values -N, -1, 1 picks up (-1,-1)_2 = -1.
    for (long N : {1L, 2L, 3L, 4L, 12L, -7L}) CHECK(invariants(make_delta(2, N)).hasse == -hilbert_symbol(N, -1, 2));
    CHECK_FALSE(invariants(make_delta(2, 3)).chi.has_value());
}

TEST_CASE("val of the moment matrix") {
    for (long p : {3L, 5L, 7L}) CHECK(invariants(make_diagonal(p, {1, p, p * p})).val == 3);
    CHECK(invariants(make_diagonal(2, {1})).val == 1);
    CHECK_THROWS_AS(invariants(make_diagonal(3, {0, 1})), DomainError);
}

TEST_CASE("hasse product rule on random pairs") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 50; ++i) {
        const long p = std::vector<long>{2, 3, 5, 7}[i % 4];
        QuadLattice L = random_lattice(rng, p, 1 + static_cast<int>(rng() % 2));
        QuadLattice M = random_lattice(rng, p, 1 + static_cast<int>(rng() % 2));
        CAPTURE(L.to_string());
        CAPTURE(M.to_string());
        const int expect = invariants(L).hasse * invariants(M).hasse * hilbert_symbol(L.det_b(), M.det_b(), p);
        CHECK(invariants(direct_sum(L, M)).hasse == expect);
    }
}

TEST_CASE("invariants survive unimodular base change") {
    std::mt19937_64 rng(202);
    for (int i = 0; i < 20; ++i) {
        const long p = std::vector<long>{2, 3, 5}[i % 3];
        const int rank = 1 + static_cast<int>(rng() % 3);
        QuadLattice L = random_lattice(rng, p, rank);
        QuadLattice L2 = change_basis(L, random_unimodular(rng, p, rank));
        LatticeInvariants a = invariants(L), b = invariants(L2);
        CAPTURE(L.to_string());
        CHECK(a.rank == b.rank);
        CHECK(a.chi == b.chi);
        CHECK(a.hasse == b.hasse);
        CHECK(a.val == b.val);
    }
}

TEST_CASE("jordan form reassembles to an equivalent lattice") {
    std::mt19937_64 rng(303);
    for (int i = 0; i < 40; ++i) {
        const long p = std::vector<long>{3, 5, 7}[i % 3];
        QuadLattice L = random_lattice(rng, p, 1 + static_cast<int>(rng() % 3));
        std::vector<Rational> diag;
        for (const JordanEntry& e : jordan_form(L)) diag.push_back(e.unit * rpow(p, e.exponent));
        LatticeInvariants a = invariants(L), b = invariants(make_diagonal(p, diag));
        CAPTURE(L.to_string());
        CHECK(a.rank == b.rank);
        CHECK(a.chi == b.chi);
        CHECK(a.hasse == b.hasse);
        CHECK(a.val == b.val);
    }
    CHECK_THROWS_AS(jordan_form(make_diagonal(2, {1})), DomainError);
}

TEST_CASE("gross-keating pairs") {
    CHECK(gross_keating(make_diagonal(3, {9 * 2, 1})) == GrossKeatingPair{0, 2});
    CHECK(gross_keating(make_diagonal(5, {1, 1})) == GrossKeatingPair{0, 0});
    // bilinear Gram [[2,1],[1,2]]: q-values 1 and bilinear value 1
    CHECK(gross_keating(QuadLattice{3, {{1, 1}, {1, 1}}}) == GrossKeatingPair{0, 1});
    CHECK_THROWS_AS(gross_keating(make_diagonal(3, {1})), DomainError);
}

TEST_CASE("twisted hyperbolic lattices") {
    CHECK(twist_h(3, 4, 1, 5, 0) == direct_sum(make_diagonal(3, {-5}), make_hyperbolic(3, 2, 1)));
    CHECK(twist_h(3, 2, 1, 5, 0) == make_diagonal(3, {-5}));
    CHECK(twist_h(5, 4, 1, 25, 1) == direct_sum(make_diagonal(5, {-1}), make_hyperbolic(5, 2, 1)));
    CHECK_THROWS_AS(twist_h(3, 4, 1, 3, 1), DomainError);
}

TEST_CASE("lattice spec grammar") {
    CHECK(parse_lattice("diag:1,3", 3) == make_diagonal(3, {1, 3}));
    CHECK(parse_lattice("diag:1/2,-4", 3) == make_diagonal(3, {Rational(1) / 2, -4}));
    CHECK(parse_lattice("hyp:4:-", 5) == make_hyperbolic(5, 4, -1));
    CHECK(parse_lattice("delta:6", 3) == make_delta(3, 6));
    CHECK(parse_lattice("sum:hyp:2:++diag:7", 3) == direct_sum(make_hyperbolic(3, 2, 1), make_diagonal(3, {7})));
    CHECK_THROWS_AS(parse_lattice("diag:1, 3", 3), DomainError);
    CHECK_THROWS_AS(parse_lattice("hyp:4:x", 3), DomainError);
    CHECK_THROWS_AS(parse_lattice("circle:1", 3), DomainError);
}

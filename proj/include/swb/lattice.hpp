#pragma once

#include "swb/padic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace swb {

using Matrix = std::vector<std::vector<Rational>>;

// Gram record over Z_p: entry (i,i) is q(e_i), entry (i,j) is the bilinear value (e_i,e_j).
struct QuadLattice {
    long p = 2;
    Matrix gram;

    int rank() const { return static_cast<int>(gram.size()); }
    const Rational& q(int i) const { return gram[i][i]; }
    Rational b(int i, int j) const { return i == j ? Rational(2 * gram[i][i]) : gram[i][j]; }
    Matrix moment() const;
    Rational det_b() const;
    // det of the half-integral matrix with q(e_i) on the diagonal and (e_i,e_j)/2 off it
    Rational det_T() const;
    bool integral() const;

    Rational q_of(const std::vector<Rational>& v) const;
    Rational b_of(const std::vector<Rational>& v, const std::vector<Rational>& w) const;

    bool operator==(const QuadLattice& o) const { return p == o.p && gram == o.gram; }
    std::string to_string() const;
};

struct LatticeInvariants {
    int rank = 0;
    std::optional<int> chi;  // unavailable at p = 2
    int hasse = 1;
    long val = 0;
};

struct JordanEntry {
    Rational unit;
    long exponent = 0;
};

struct GrossKeatingPair {
    long a = 0;
    long b = 0;
    bool operator==(const GrossKeatingPair&) const = default;
};

// Orthogonal block for the p-adic splitting: rank 1 gives q = a x^2,
// rank 2 gives q = a x^2 + c x y + b y^2.
struct JordanBlock {
    int size = 1;
    Rational a, b, c;
    long scale = 0;  // valuation of the bilinear block determinant's scale
};

long nonresidue(long p);

QuadLattice make_diagonal(long p, const std::vector<Rational>& a);
QuadLattice make_hyperbolic(long p, int k, int eps);
QuadLattice make_delta(long p, const Rational& N);
QuadLattice make_block(long p, const JordanBlock& blk);
QuadLattice direct_sum(const QuadLattice& L, const QuadLattice& M);
QuadLattice direct_sum(const std::vector<QuadLattice>& parts, long p);

// Columns of C give the new basis in terms of the old one.
QuadLattice change_basis(const QuadLattice& L, const Matrix& C);

QuadLattice parse_lattice(const std::string& spec, long p);

LatticeInvariants invariants(const QuadLattice& L);
// q-values of an orthogonal Q_p-basis
std::vector<Rational> diagonalize(const QuadLattice& L);
std::vector<JordanEntry> jordan_form(const QuadLattice& L);
GrossKeatingPair gross_keating(const QuadLattice& L);
std::vector<JordanBlock> jordan_blocks(const QuadLattice& L);

bool is_unimodular(const QuadLattice& L);
// Even unimodular at p = 2 and split (a sum of hyperbolic planes).
bool is_split_even_unimodular(const QuadLattice& L);

QuadLattice twist_h(long p, int k, int eps, const Rational& N, long i);

Rational determinant(Matrix m);

}  // namespace swb

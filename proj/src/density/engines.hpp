#pragma once

#include "swb/density.hpp"

#include <cstdint>
#include <vector>

namespace swb::detail {

// Residues of a lattice's Gram data modulo a power of p.
struct ResidueGram {
    int m = 0;
    std::uint64_t mod = 1;
    std::vector<std::uint64_t> q;  // q(e_i) mod `mod`
    std::vector<std::uint64_t> b;  // (e_i,e_j) mod `mod`, row-major m x m, diagonal 2 q(e_i)

    std::uint64_t bil(int i, int j) const { return b[i * m + j]; }
};

ResidueGram residue_gram(const QuadLattice& L, std::uint64_t mod);
std::uint64_t ipow_u64(std::uint64_t p, int e);

// Modulus for the dot-product kernels.
struct KernelModulus {
    std::uint32_t mod = 0;
    bool pow2 = false;
    std::uint32_t mask = 0;   // pow2: mod - 1
    std::uint32_t inv = 0;    // odd: mod^{-1} mod 2^32
    std::uint32_t limit = 0;  // odd: (2^32 - 1) / mod
};

KernelModulus make_modulus(std::uint32_t mod);

// Candidate vectors stored coordinate-major, padded with zeros to a multiple of 8.
struct CandidateSoA {
    int m = 0;
    std::size_t count = 0;
    std::size_t stride = 0;
    std::vector<std::uint32_t> coord;  // coord[l * stride + i]

    const std::uint32_t* column(int l) const { return coord.data() + static_cast<std::size_t>(l) * stride; }
};

// Counts candidates y (index < count) with sum_l w[c*m+l] y_l = t[c] modulo the modulus for all c < nc.
// Requires every w, y < mod, t < mod and m * mod^2 + mod < 2^32.
std::uint64_t count_matches_scalar(const CandidateSoA& cand, const std::uint32_t* w, const std::uint32_t* t, int nc,
                                   const KernelModulus& km);
std::uint64_t count_matches_avx2(const CandidateSoA& cand, const std::uint32_t* w, const std::uint32_t* t, int nc,
                                 const KernelModulus& km);
bool avx2_available();
// Runtime-selected kernel.
std::uint64_t count_matches(const CandidateSoA& cand, const std::uint32_t* w, const std::uint32_t* t, int nc,
                            const KernelModulus& km);
// Kernel selection override for tests: 0 auto, 1 scalar, 2 avx2.
void set_kernel_override(int mode);
int kernel_override();

// Literal enumeration over (M / p^d M)^n.
Integer enumerate_count(const QuadLattice& M, const QuadLattice& L, int d, bool primitive, Convention conv,
                        std::uint64_t budget, int jobs);
long double enumerate_work(int m, int n, std::uint64_t P);

// Rank-1 source via per-block q-value histograms.
Integer histogram_count(const QuadLattice& M, const Rational& a, int d, bool primitive, std::uint64_t budget);
long double histogram_work(const QuadLattice& M, int d);

// Unimodular target, rank <= 3 source: exact value without a precision sweep.
Rational saturation_density(const QuadLattice& M, const QuadLattice& L, bool primitive);
bool saturation_applies(const QuadLattice& M, const QuadLattice& L);
// Number of injective isometric maps from (F_p^n, T mod p) into the reduction of M.
Integer injective_count_mod_p(const QuadLattice& M, const QuadLattice& L);

// p = 2, rank-2 source: Gram-data histograms convolved over (Z/2^d)^3.
Integer gram_count(const QuadLattice& M, const QuadLattice& L, int d, std::uint64_t budget);
long double gram_work(const QuadLattice& M, int d);

}  // namespace swb::detail

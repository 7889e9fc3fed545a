#pragma once

#include "swb/lattice.hpp"
#include "swb/poly.hpp"
#include "swb/report.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace swb {

// A: q(x_i) = q(l_i) and (x_i,x_j) = (l_i,l_j) mod p^d.
// B: every bilinear value (x_i,x_j) = (l_i,l_j) mod 2p^d, computed on canonical lifts.
// The two agree for odd p and for rank-1 sources.
enum class Convention { A, B };

enum class Engine { Auto, Enumerate, Histogram, Saturation, Peel, Gram };

std::string to_string(Convention c);
std::string to_string(Engine e);

struct DensityConfig {
    std::uint64_t budget = std::uint64_t(1) << 32;  // max elementary evaluations per count
    int d_max = 0;                                   // 0 selects val(L) + 4
    Convention convention = Convention::A;
    Engine engine = Engine::Auto;
    int jobs = 1;
};

class BudgetExceeded : public std::runtime_error {
  public:
    BudgetExceeded(const std::string& what, long double required_work)
        : std::runtime_error(what), required(required_work) {}
    long double required;
};

class StabilizationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct DensityValue {
    Rational value;
    int stabilized_at = 0;  // 1 for engines that are exact without a precision sweep
    Convention convention = Convention::A;
    Engine engine = Engine::Auto;
};

// m n - n (n + 1) / 2
long rep_dimension(int m, int n);

// Exact number of representations modulo p^d.
Integer count_reps(const QuadLattice& M, const QuadLattice& L, int d, bool primitive,
                   const DensityConfig& cfg = {});

DensityValue local_density(const QuadLattice& M, const QuadLattice& L, const DensityConfig& cfg = {});
DensityValue primitive_density(const QuadLattice& M, const QuadLattice& L, const DensityConfig& cfg = {});

// Pden(H_k^eps, <N>) in closed form.
Rational pden_rank1_closed(int k, int eps, const Rational& N, long p);

// Density polynomials -------------------------------------------------------

enum class DensityKind { Den, DenFlat, DenDelta };

std::string to_string(DensityKind k);

struct DensityPolynomial {
    Poly poly;
    DensityKind kind = DensityKind::Den;
    int eps = 1;
    std::string lattice;
    Rational level = 0;  // N for DenDelta
    int samples = 0;
};

// chi(L); at p = 2 only for even rank, via the Kronecker symbol of the discriminant.
int lattice_chi(const QuadLattice& L);

// Nor^eps(X, n) for residue field size p.
Poly normalizer(long p, int eps, int n);

// The value at X = p^{-k} that the polynomial of the given kind interpolates.
Rational density_sample(const QuadLattice& L, DensityKind kind, int eps, int k, const Rational& N = 0,
                        const DensityConfig& cfg = {});

class InterpolationError : public std::runtime_error {
  public:
    InterpolationError(const std::string& what, int k_bad) : std::runtime_error(what), k(k_bad) {}
    int k;
};

DensityPolynomial interpolate_density_polynomial(const QuadLattice& L, DensityKind kind, int eps,
                                                 const Rational& N = 0, const DensityConfig& cfg = {});

// -d/dX at X = 1
Rational derived_density(const DensityPolynomial& poly);

// Identity checks -------------------------------------------------------------

CaseResult check_difference_formula(int k, int eps, const QuadLattice& M, const Rational& N,
                                    const DensityConfig& cfg = {});

// Den^eps (kind Den) or Den^flat-eps (kind DenFlat) functional equation.
// flat_exponent overrides 2[val/2] in the DenFlat form (used at p = 2).
CaseResult check_functional_equation(const QuadLattice& L, int eps, DensityKind kind, int flat_exponent = -1,
                                     const DensityConfig& cfg = {});

// Sign w^eps(L) predicted from the invariants of L.
int functional_equation_sign(const QuadLattice& L, int eps);

// Den(<a p^m> + M, L) = Den(M, L) for m and m + 1 with m the first stable exponent.
CaseResult check_stabilization_target(const QuadLattice& M, const QuadLattice& L, const Rational& a,
                                      int m_max, const DensityConfig& cfg = {});

// lim_m Den(H_k^eps, M + <a p^m>) = Den(H_{k-2}^eps, M) Pden(H_k^eps, <p>) / (1 - p^{2-k+r}).
CaseResult check_stabilization_source(int k, int eps, const QuadLattice& M, const Rational& a, int m_max,
                                      const DensityConfig& cfg = {});

}  // namespace swb

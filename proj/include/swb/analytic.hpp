#pragma once

#include "swb/density.hpp"
#include "swb/poly.hpp"
#include "swb/report.hpp"
#include "swb/symbolic.hpp"

#include <string>

namespace swb {

// 4 N t = c^2 d, with -d the fundamental discriminant of Q(sqrt(-tN)) and d = -1 when -tN is a square.
struct DiscSplit {
    Integer t;
    Integer N;
    Integer d;
    Rational c;
};

DiscSplit fundamental_disc_split(const Integer& t, const Integer& N);

// chi_t(p) in {-1, 0, 1}; trivial character in the square case.
int chi_t(const DiscSplit& s, long p);

// Den^flat+(X, <t, N>) as an interpolated polynomial.
Poly flat_density_poly(const Integer& t, const Integer& N, long p, const DensityConfig& cfg = {});

// g_p as a rational function G of X = p^{-k}: g_p(k) = G(p^{-k}). Zero when nu_p(N) <= 1.
RationalFunction g_p_function(const Integer& N, const Integer& t, long p, const DensityConfig& cfg = {});

// G(X) = p X^{-2} G(p / X), i.e. g_p(k) = p^{2k+1} g_p(-k-1).
bool g_p_functional_equation_holds(const RationalFunction& G, long p);

struct BetaFunction {
    RationalFunction beta;          // in X = p^{-s}
    Rational derivative_formal;     // beta'(0) / log p by differentiation
    Rational derivative_closed;     // beta'(0) / log p from 2/(1+p) + 2 p^{-1} g(0) / (1 - p^{-1} g(0))
};

BetaFunction beta_p_function(const Integer& N, const Integer& t, long p, const DensityConfig& cfg = {});

// A_p in X = p^{-s}, closed form.
RationalFunction a_p_closed(long n, long p);
// A_p in X = p^{-s}, rebuilt from the a, b -> infinity limit of Den^+_{Delta(N)} and Nor^+(X, 1).
RationalFunction a_p_limit_route(long n, long p);

// Density expression of a finite-place Whittaker value with |2|_p, |N|_p^{1/2}, (-1,N)_p and the Weil index stripped.
struct LocalWhittakerPart {
    Rational value;
    std::string prefactor;  // symbolic tag of the stripped constant
};

// genus 2: T = diag(0, t) at s = k. genus 1: t at s = k + 1/2.
LocalWhittakerPart whittaker_finite(const Integer& t, const Integer& N, long p, int k, int genus,
                                    const DensityConfig& cfg = {});

// The same expressions as rational functions of Y = p^{-k}.
RationalFunction whittaker_part_function(const Integer& t, const Integer& N, long p, int genus,
                                         const DensityConfig& cfg = {});

CaseResult check_singular_relation(const Integer& N, const Integer& t, long p, int k, const DensityConfig& cfg = {});

CaseResult check_level_lowering_sum(const Integer& N, const Integer& t, long p, const DensityConfig& cfg = {});

// Which local factor enters the product over p | N.
enum class ApNormalization { Plain, Tilde };

struct EisensteinConstantTerm {
    SymbolicNumber value;
    Rational central_value;  // the s = 0 value; zero for an incoherent collection
};

// Raises DomainError if the central value does not vanish.
EisensteinConstantTerm eis0_derivative(const Integer& N, ApNormalization norm = ApNormalization::Plain);

// Same quantity without the vanishing guard, for diagnosing normalizations.
EisensteinConstantTerm eis0_assemble(const Integer& N, ApNormalization norm);

// -n p^{n+1} + 2 p^n + n p^{n-1} - 2 over p^{n-1}(p^2 - 1).
Rational eis0_log_coefficient(long n, long p);

// log det y + 2 - 4 LambdaRatio - sum_p c_p log p.
SymbolicNumber eis0_closed_form(const Integer& N);

}  // namespace swb

#include "engines.hpp"

#include <optional>

namespace swb {

using namespace detail;

std::string to_string(Convention c) { return c == Convention::A ? "A" : "B"; }

std::string to_string(Engine e) {
    switch (e) {
        case Engine::Auto: return "auto";
        case Engine::Enumerate: return "enumerate";
        case Engine::Histogram: return "histogram";
        case Engine::Saturation: return "saturation";
        case Engine::Peel: return "peel";
        case Engine::Gram: return "gram";
    }
    return "?";
}

long rep_dimension(int m, int n) { return static_cast<long>(m) * n - static_cast<long>(n) * (n + 1) / 2; }

namespace {

void validate(const QuadLattice& M, const QuadLattice& L) {
    if (M.p != L.p) throw DomainError("density: mismatched primes");
    if (!M.integral() || !L.integral()) throw DomainError("density: lattices must be integral");
    if (L.rank() > 0 && L.det_b() == 0) throw DomainError("density: degenerate source lattice");
}

bool source_has_unit(const QuadLattice& L) {
    for (const auto& e : jordan_form(L))
        if (e.exponent == 0) return true;
    return false;
}

Engine choose(const QuadLattice& M, const QuadLattice& L, bool primitive, const DensityConfig& cfg) {
    if (cfg.engine != Engine::Auto) return cfg.engine;
    const int n = L.rank();
    const bool conv_b = cfg.convention == Convention::B && M.p == 2 && n >= 2;
    if (conv_b) return Engine::Enumerate;
    if (saturation_applies(M, L)) return Engine::Saturation;
    if (n == 1) return Engine::Histogram;
    if (!primitive && M.p != 2 && source_has_unit(L)) return Engine::Peel;
    if (!primitive && M.p == 2 && n == 2) return Engine::Gram;
    return Engine::Enumerate;
}

Integer count_with(Engine e, const QuadLattice& M, const QuadLattice& L, int d, bool primitive,
                   const DensityConfig& cfg) {
    switch (e) {
        case Engine::Histogram:
            if (L.rank() != 1) throw DomainError("histogram engine needs a rank-1 source");
            return histogram_count(M, L.q(0), d, primitive, cfg.budget);
        case Engine::Gram:
            if (primitive) throw DomainError("gram engine counts all representations only");
            return gram_count(M, L, d, cfg.budget);
        case Engine::Enumerate:
            return enumerate_count(M, L, d, primitive, cfg.convention, cfg.budget, cfg.jobs);
        default: throw DomainError("engine " + to_string(e) + " does not count at fixed precision");
    }
}

int default_start(const QuadLattice& L) {
    if (L.rank() == 0) return 1;
    return static_cast<int>(valuation(L.det_b(), L.p).value) + 1;
}

DensityValue sweep(Engine e, const QuadLattice& M, const QuadLattice& L, bool primitive, const DensityConfig& cfg) {
    const int n = L.rank(), m = M.rank();
    const long dim = rep_dimension(m, n);
    const int start = default_start(L);
    const int d_max = cfg.d_max > 0 ? cfg.d_max : start + 3;
    Rational prev;
    bool have = false;
    for (int d = std::min(start, std::max(1, d_max - 1)); d <= d_max; ++d) {
        Rational v = Rational(count_with(e, M, L, d, primitive, cfg)) * rpow(M.p, -d * dim);
        if (have && v == prev) return {v, d - 1, cfg.convention, e};
        prev = v;
        have = true;
    }
    throw StabilizationError("density did not stabilize by d = " + std::to_string(d_max) + " (" + M.to_string() +
                             " <- " + L.to_string() + ")");
}

DensityValue density_impl(const QuadLattice& M, const QuadLattice& L, bool primitive, const DensityConfig& cfg);

// Orthogonal complement in T of a vector x with q(x) = u, a unit at odd p; unique up to isometry
// by Witt cancellation. Empty when no such x exists.
std::optional<QuadLattice> unit_complement(const QuadLattice& T, const Rational& u) {
    const long p = T.p;
    std::vector<Rational> unit_part_t, rest_t;
    Rational det_u = 1;
    for (const auto& e : jordan_form(T)) {
        if (e.exponent == 0) {
            unit_part_t.push_back(e.unit);
            det_u *= e.unit;
        } else {
            rest_t.push_back(e.unit * rpow(p, e.exponent));
        }
    }
    if (unit_part_t.empty()) return std::nullopt;
    std::vector<Rational> perp;
    if (unit_part_t.size() >= 2) {
        for (std::size_t i = 0; i + 2 < unit_part_t.size(); ++i) perp.push_back(1);
        perp.push_back(det_u / u);
    } else if (quad_residue_symbol(det_u / u, p) != 1) {
        return std::nullopt;
    }
    perp.insert(perp.end(), rest_t.begin(), rest_t.end());
    return make_diagonal(p, perp);
}

// Splits a unit u off the source: T / p^d = Z x + x^perp for every x with q(x) = u, and a second
// vector is independent of x mod p exactly when it is nonzero mod p, so the count factors at each d.
std::optional<Integer> peel_count(const QuadLattice& T, const QuadLattice& L, int d, bool primitive,
                                  const DensityConfig& cfg) {
    const long p = T.p;
    if (p == 2 || L.rank() < 2) return std::nullopt;
    auto src = jordan_form(L);
    std::size_t pick = src.size();
    for (std::size_t i = 0; i < src.size(); ++i)
        if (src[i].exponent == 0) {
            pick = i;
            break;
        }
    if (pick == src.size()) return std::nullopt;
    const Rational u = src[pick].unit;
    std::vector<Rational> rest_src;
    for (std::size_t i = 0; i < src.size(); ++i)
        if (i != pick) rest_src.push_back(src[i].unit * rpow(p, src[i].exponent));
    const Integer first = histogram_count(T, u, d, primitive, cfg.budget);
    if (first == 0) return Integer(0);
    const std::optional<QuadLattice> perp = unit_complement(T, u);
    if (!perp) return Integer(0);
    DensityConfig sub = cfg;
    sub.engine = Engine::Auto;
    return first * count_reps(*perp, make_diagonal(p, rest_src), d, primitive, sub);
}


// Den(T, <u> + L') = Den(T, <u>) Den(x^perp, L') for a unit u at odd p.
DensityValue peel(const QuadLattice& T, const QuadLattice& L, const DensityConfig& cfg) {
    const long p = T.p;
    auto src = jordan_form(L);
    std::size_t pick = src.size();
    for (std::size_t i = 0; i < src.size(); ++i)
        if (src[i].exponent == 0) {
            pick = i;
            break;
        }
    if (pick == src.size()) throw DomainError("peel engine needs a unit in the source");
    const Rational u = src[pick].unit;
    std::vector<Rational> rest_src;
    for (std::size_t i = 0; i < src.size(); ++i)
        if (i != pick) rest_src.push_back(src[i].unit * rpow(p, src[i].exponent));

    DensityConfig sub = cfg;
    sub.engine = Engine::Auto;
    DensityValue first = density_impl(T, make_diagonal(p, {u}), false, sub);
    if (first.value == 0) return {0, first.stabilized_at, cfg.convention, Engine::Peel};

    const std::optional<QuadLattice> perp = unit_complement(T, u);
    if (!perp) return {0, first.stabilized_at, cfg.convention, Engine::Peel};
    DensityValue second = density_impl(*perp, make_diagonal(p, rest_src), false, sub);
    return {first.value * second.value, std::max(first.stabilized_at, second.stabilized_at), cfg.convention,
            Engine::Peel};
}

DensityValue density_impl(const QuadLattice& M, const QuadLattice& L, bool primitive, const DensityConfig& cfg) {
    validate(M, L);
    if (L.rank() == 0) return {1, 1, cfg.convention, Engine::Auto};
    if (primitive && L.rank() > M.rank()) return {0, 1, cfg.convention, Engine::Auto};
    Engine e = choose(M, L, primitive, cfg);
    switch (e) {
        case Engine::Saturation: return {saturation_density(M, L, primitive), 1, cfg.convention, e};
        case Engine::Peel:
            if (primitive) throw DomainError("peel engine computes Den only");
            return peel(M, L, cfg);
        default: return sweep(e, M, L, primitive, cfg);
    }
}

}  // namespace

Integer count_reps(const QuadLattice& M, const QuadLattice& L, int d, bool primitive, const DensityConfig& cfg) {
    validate(M, L);
    if (L.rank() == 0) return 1;
    Engine e = cfg.engine;
    if (e == Engine::Auto || e == Engine::Saturation || e == Engine::Peel) {
        const bool conv_b = cfg.convention == Convention::B && M.p == 2 && L.rank() >= 2;
        if (e == Engine::Auto || e == Engine::Peel)
            if (auto c = peel_count(M, L, d, primitive, cfg)) return *c;
        if (L.rank() == 1)
            e = Engine::Histogram;
        else if (!conv_b && !primitive && M.p == 2 && L.rank() == 2)
            e = Engine::Gram;
        else
            e = Engine::Enumerate;
    }
    return count_with(e, M, L, d, primitive, cfg);
}

DensityValue local_density(const QuadLattice& M, const QuadLattice& L, const DensityConfig& cfg) {
    return density_impl(M, L, false, cfg);
}

DensityValue primitive_density(const QuadLattice& M, const QuadLattice& L, const DensityConfig& cfg) {
    return density_impl(M, L, true, cfg);
}

Rational pden_rank1_closed(int k, int eps, const Rational& N, long p) {
    if (eps != 1 && eps != -1) throw DomainError("sign must be +1 or -1");
    if (k < 1) throw DomainError("rank must be positive");
    if (p == 2 && (k % 2 || eps != 1)) throw DomainError("closed form at p = 2 needs even k and sign +");
    if (N == 0) throw DomainError("N must be nonzero");
    const bool divides = valuation(N, p).value > 0;
    if (k % 2) {
        if (divides) return 1 - rpow(p, 1 - k);
        int chi = quad_residue_symbol(N, p);
        return 1 + eps * chi * rpow(p, (1 - k) / 2);
    }
    if (divides) return (1 - eps * rpow(p, -k / 2)) * (1 + eps * rpow(p, 1 - k / 2));
    return 1 - eps * rpow(p, -k / 2);
}

}  // namespace swb

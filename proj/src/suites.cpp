#include "swb/suites.hpp"

#include "swb/analytic.hpp"
#include "swb/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <random>
#include <thread>

namespace swb {

std::vector<long> IntRange::values() const {
    std::vector<long> out;
    for (long v = lo; v <= hi; ++v) out.push_back(v);
    return out;
}

std::vector<long> parse_int_list(const std::string& text) {
    auto parse_one = [&](const std::string& s) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(s, &used);
        } catch (const std::exception&) {
            throw ConfigError("not an integer: '" + s + "'");
        }
        if (used != s.size()) throw ConfigError("not an integer: '" + s + "'");
        return v;
    };
    std::vector<long> out;
    if (text.empty()) return out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        IntRange r{parse_one(text.substr(0, dots)), parse_one(text.substr(dots + 2))};
        return r.values();
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(parse_one(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"density-calibration", "difference-formula", "functional-equation",
                                                   "singular-relation",   "level-lowering",     "geometry-ledger",
                                                   "siegel-weil-t0"};
    return names;
}

void validate(const SuiteConfig& cfg) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), cfg.suite) == names.end())
        throw ConfigError("unknown suite '" + cfg.suite + "'");
    if (cfg.d_max != 0 && cfg.d_max < 2) throw ConfigError("d-max must be at least 2");
    if (cfg.budget < 1000000) throw ConfigError("budget must be at least 1e6");
    if (cfg.jobs < 1) throw ConfigError("jobs must be at least 1");
    for (long p : cfg.primes)
        if (!is_prime(p)) throw ConfigError("not a prime: " + std::to_string(p));
    if (cfg.N)
        for (long n : *cfg.N)
            if (n < 1) throw ConfigError("levels must be positive");
    if (cfg.k)
        for (long k : *cfg.k)
            if (k < 1) throw ConfigError("k must be positive");
}

namespace {

using Task = std::function<CaseResult()>;
using Inputs = std::vector<std::pair<std::string, std::string>>;

CaseResult failed(const std::string& name, Inputs inputs, const std::string& why) {
    CaseResult c;
    c.name = name;
    c.inputs = std::move(inputs);
    c.status = CaseStatus::Fail;
    c.lhs = "error";
    c.rhs = "";
    c.detail = why;
    return c;
}

// Runs f and turns errors into cases so one bad input never aborts a suite.
Task guarded(std::string name, Inputs inputs, std::function<CaseResult()> f) {
    return [name = std::move(name), inputs = std::move(inputs), f = std::move(f)]() {
        try {
            return f();
        } catch (const BudgetExceeded& e) {
            CaseResult c;
            c.name = name;
            c.inputs = inputs;
            c.status = CaseStatus::SkippedBudget;
            c.detail = e.what();
            return c;
        } catch (const std::exception& e) {
            return failed(name, inputs, e.what());
        }
    };
}

std::vector<CaseResult> run_tasks(const std::vector<Task>& tasks, int jobs) {
    std::vector<CaseResult> out(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = tasks[i]();
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

std::string str(long v) { return std::to_string(v); }
std::string str(const Rational& v) { return v.get_str(); }

std::vector<long> primes_or(const SuiteConfig& cfg, std::vector<long> dflt) {
    return cfg.primes.empty() ? dflt : cfg.primes;
}

std::vector<long> nonzero(std::vector<long> v) {
    v.erase(std::remove(v.begin(), v.end(), 0L), v.end());
    return v;
}

// Unit representatives: 1 and a nonresidue for odd p, the odd classes mod 8 at p = 2.
std::vector<long> units(long p) {
    if (p == 2) return {1, 3, 5, 7};
    return {1, nonresidue(p)};
}

std::vector<Task> density_calibration(const SuiteConfig& cfg, DensityConfig dc) {
    // The oracle must be an actual count, not a closed-form shortcut.
    dc.engine = Engine::Histogram;
    std::vector<Task> tasks;
    const std::vector<long> ks = cfg.k ? *cfg.k : IntRange{2, 6}.values();
    for (long p : primes_or(cfg, {2, 3, 5}))
        for (long k : ks)
            for (int eps : {1, -1}) {
                if (p == 2 && (eps < 0 || k % 2)) continue;
                for (long nu = 0; nu <= 2; ++nu)
                    for (long u : units(p)) {
                        const Rational N = Rational(u) * rpow(p, nu);
                        Inputs in = {{"p", str(p)}, {"k", str(k)}, {"eps", eps > 0 ? "+" : "-"}, {"N", str(N)}};
                        tasks.push_back(guarded("pden-rank1", in, [=] {
                            const Rational brute =
                                primitive_density(make_hyperbolic(p, static_cast<int>(k), eps), make_diagonal(p, {N}), dc)
                                    .value;
                            const Rational closed = pden_rank1_closed(static_cast<int>(k), eps, N, p);
                            return make_case("pden-rank1", in, brute.get_str(), closed.get_str());
                        }));
                    }
            }
    return tasks;
}

std::vector<Task> difference_formula(const SuiteConfig& cfg, const DensityConfig& dc) {
    std::vector<Task> tasks;
    const std::vector<long> ks = cfg.k ? *cfg.k : std::vector<long>{4, 6};
    for (long p : primes_or(cfg, {2, 3, 5})) {
        const long v = units(p)[1];
        std::vector<std::vector<Rational>> sources = {{1}, {v}};
        for (long e = 0; e <= 2; ++e) sources.push_back({1, Rational(v) * rpow(p, e)});
        for (long k : ks)
            for (int eps : {1, -1}) {
                if (p == 2 && eps < 0) continue;
                for (const auto& src : sources)
                    for (long nu = 0; nu <= 3; ++nu) {
                        const QuadLattice M = make_diagonal(p, src);
                        const Rational N = rpow(p, nu);
                        Inputs in = {{"p", str(p)}, {"k", str(k)}, {"eps", eps > 0 ? "+" : "-"},
                                     {"M", M.to_string()}, {"N", str(N)}};
                        tasks.push_back(guarded("difference-formula", in, [=] {
                            return check_difference_formula(static_cast<int>(k), eps, M, N, dc);
                        }));
                    }
            }
    }
    return tasks;
}

std::vector<Task> functional_equation(const SuiteConfig& cfg, const DensityConfig& dc) {
    std::vector<Task> tasks;
    std::vector<long> odd;
    for (long p : primes_or(cfg, {2, 3, 5}))
        if (p != 2) odd.push_back(p);
    const bool with_two = cfg.primes.empty() || std::count(cfg.primes.begin(), cfg.primes.end(), 2L);
    std::mt19937_64 rng(20240611);
    auto pick = [&](long n) { return static_cast<long>(rng() % static_cast<std::uint64_t>(n)); };
    if (!odd.empty())
        for (int i = 0; i < 30; ++i) {
            const long p = odd[pick(static_cast<long>(odd.size()))];
            const int rank = 1 + static_cast<int>(pick(3));
            const int eps = pick(2) ? 1 : -1;
            std::vector<Rational> diag;
            for (int j = 0; j < rank; ++j)
                diag.push_back(Rational(units(p)[pick(2)]) * rpow(p, pick(rank == 3 ? 2 : 3)));
            const QuadLattice L = make_diagonal(p, diag);
            for (DensityKind kind : {DensityKind::Den, DensityKind::DenFlat}) {
                Inputs in = {{"p", str(p)}, {"L", L.to_string()}, {"eps", eps > 0 ? "+" : "-"}, {"kind", to_string(kind)}};
                tasks.push_back(guarded("functional-equation", in,
                                        [=] { return check_functional_equation(L, eps, kind, -1, dc); }));
            }
        }
    if (with_two)
        for (int i = 0; i < 10; ++i) {
            const long N = 1 + pick(12);
            long t = pick(21) - 10;
            if (t == 0) t = 1 + i;
            Inputs in = {{"p", "2"}, {"N", str(N)}, {"t", str(t)}};
            tasks.push_back(guarded("functional-equation-2", in, [=] {
                const DiscSplit s = fundamental_disc_split(t, N);
                const QuadLattice L = make_diagonal(2, {Rational(N), Rational(t)});
                CaseResult c = check_functional_equation(L, 1, DensityKind::DenFlat,
                                                         static_cast<int>(valuation(s.c, 2).value), dc);
                c.name = "functional-equation-2";
                c.inputs.insert(c.inputs.begin(), in.begin() + 1, in.end());
                return c;
            }));
        }
    const std::vector<long> ts = cfg.t ? nonzero(*cfg.t) : nonzero(IntRange{-6, 6}.values());
    for (long p : primes_or(cfg, {2, 3}))
        for (long nu = 2; nu <= 4; ++nu)
            for (long t : ts) {
                const Integer N = ipow(p, nu);
                Inputs in = {{"p", str(p)}, {"N", N.get_str()}, {"t", str(t)}};
                tasks.push_back(guarded("g-functional-equation", in, [=] {
                    const RationalFunction G = g_p_function(N, t, p, dc);
                    CaseResult c = make_case("g-functional-equation", in, G.to_string(),
                                             (RationalFunction(Rational(p)) * G.reciprocal(p) /
                                              RationalFunction(Poly::monomial(1, 2)))
                                                 .to_string());
                    if (!g_p_functional_equation_holds(G, p)) c.status = CaseStatus::Fail;
                    return c;
                }));
            }
    return tasks;
}

std::vector<Integer> level_grid(const SuiteConfig& cfg, long p, long nu_lo, long nu_hi) {
    std::vector<Integer> out;
    if (cfg.N) {
        for (long n : *cfg.N) {
            const long v = valuation(Integer(n), p);
            if (v >= nu_lo && v <= nu_hi) out.emplace_back(n);
        }
        return out;
    }
    for (long m : {1L, 7L})
        for (long nu = nu_lo; nu <= nu_hi; ++nu) out.push_back(ipow(p, nu) * m);
    return out;
}

std::vector<Task> singular_relation(const SuiteConfig& cfg, const DensityConfig& dc) {
    std::vector<Task> tasks;
    const std::vector<long> ts = cfg.t ? nonzero(*cfg.t) : nonzero(IntRange{-10, 10}.values());
    const std::vector<long> ks = cfg.k ? *cfg.k : IntRange{1, 3}.values();
    for (long p : primes_or(cfg, {2, 3, 5}))
        for (const Integer& N : level_grid(cfg, p, 0, cfg.N ? 1000 : 3))
            for (long t : ts)
                for (long k : ks) {
                    Inputs in = {{"p", str(p)}, {"N", N.get_str()}, {"t", str(t)}, {"k", str(k)}};
                    tasks.push_back(guarded("singular-relation", in, [=] {
                        return check_singular_relation(N, t, p, static_cast<int>(k), dc);
                    }));
                }
    return tasks;
}

std::vector<Task> level_lowering(const SuiteConfig& cfg, const DensityConfig& dc) {
    std::vector<Task> tasks;
    const std::vector<long> ts = cfg.t ? nonzero(*cfg.t) : nonzero(IntRange{-6, 6}.values());
    for (long p : primes_or(cfg, {2, 3, 5}))
        for (const Integer& N : level_grid(cfg, p, 2, cfg.N ? 1000 : 4))
            for (long t : ts) {
                Inputs in = {{"p", str(p)}, {"N", N.get_str()}, {"t", str(t)}};
                tasks.push_back(guarded("level-lowering", in, [=] { return check_level_lowering_sum(N, t, p, dc); }));
            }
    return tasks;
}

CaseResult symbolic_case(const std::string& name, Inputs in, const SymbolicNumber& a, const SymbolicNumber& b) {
    return make_case(name, std::move(in), a.to_string(), b.to_string());
}

std::vector<Task> geometry_ledger(const SuiteConfig& cfg) {
    std::vector<Task> tasks;
    for (long p : primes_or(cfg, {2, 3, 5}))
        for (long n = 1; n <= 4; ++n) {
            Inputs cin = {{"p", str(p)}, {"n", str(n)}};
            tasks.push_back(guarded("cusp-degrees", cin, [=] {
                Integer s1 = 0, s2 = 0;
                for (const auto& c : cusp_components(p, n)) {
                    s1 += c.deg1;
                    s2 += c.deg2;
                }
                const Integer psi = dedekind_psi(ipow(p, n));
                return make_case("cusp-degrees", cin, s1.get_str() + "," + s2.get_str(),
                                 psi.get_str() + "," + psi.get_str());
            }));
            for (long m : {1L, 2L, 5L}) {
                if (m % p == 0) continue;
                const Integer N = ipow(p, n) * m;
                Inputs in = {{"p", str(p)}, {"N", N.get_str()}};
                tasks.push_back(guarded("fiber-degrees", in, [=] {
                    Integer s = 0;
                    for (const auto& f : special_fiber(N, p)) s += f.multiplicity * f.degree_p1;
                    return make_case("fiber-degrees", in, s.get_str(), dedekind_psi(N).get_str());
                }));
                tasks.push_back(guarded("div-p-trivial", in, [=] { return check_div_p_trivial(N, p); }));
                tasks.push_back(guarded("xhat-self-intersection", in, [=] {
                    const DivisorLedger X = xhat(N, p);
                    return symbolic_case("xhat-self-intersection", in, intersection_pairing(X, X),
                                         xhat_self_intersection_closed(N, p));
                }));
                tasks.push_back(guarded("fp-self-pairing", in, [=] {
                    const DivisorLedger F = f_p(N, p);
                    return symbolic_case("fp-self-pairing", in, intersection_pairing(F, F), fp_self_pairing_closed(N, p));
                }));
                tasks.push_back(guarded("atkin-lehner", in, [=] {
                    const DivisorLedger X = xhat(N, p);
                    const DivisorLedger F = f_p(N, p), F0 = f_p_zero(N, p);
                    CaseResult c = make_case("atkin-lehner", in, atkin_lehner_pullback(X).to_string(),
                                             (X * Rational(-1)).to_string());
                    const SymbolicNumber a = intersection_pairing(atkin_lehner_pullback(F), atkin_lehner_pullback(F0));
                    const SymbolicNumber b = intersection_pairing(F, F0);
                    if (!(a == b)) {
                        c.status = CaseStatus::Fail;
                        c.detail = "pairing not W_N-invariant: " + a.to_string() + " vs " + b.to_string();
                    }
                    return c;
                }));
            }
        }
    const std::vector<long> levels = cfg.N ? *cfg.N : IntRange{1, 60}.values();
    for (long n : levels) {
        const Integer N = n;
        Inputs in = {{"N", N.get_str()}};
        tasks.push_back(guarded("hodge-difference", in, [=] { return check_hodge_difference(N); }));
        tasks.push_back(guarded("a_N-sums", in, [=] {
            Integer s0 = 0, s1 = 0;
            Rational sinv = 0;
            for (const Integer& t : divisors(N)) {
                const Integer a = a_N(N, t);
                s0 += a;
                s1 += t * a;
                sinv += Rational(a) / Rational(t);
            }
            const Integer phi = euler_phi(N);
            return make_case("a_N-sums", in, s0.get_str() + "," + sinv.get_str() + "," + s1.get_str(),
                             phi.get_str() + ",0," + Integer(dedekind_psi(N) * phi).get_str());
        }));
        tasks.push_back(guarded("delta-self-pairing", in, [=] {
            const DeltaSelfPairing d = delta_self_pairing(N);
            SymbolicNumber closed = omega_self_pairing(N) * Rational(144 * euler_phi(N) * euler_phi(N));
            for (auto [p, e] : prime_factorization(N)) closed -= fp_self_pairing_closed(N, p);
            return symbolic_case("delta-self-pairing", in, d.total, closed);
        }));
    }
    return tasks;
}

std::vector<Task> siegel_weil_t0(const SuiteConfig& cfg) {
    std::vector<Task> tasks;
    for (long p : primes_or(cfg, {2, 3, 5}))
        for (long n = 0; n <= 3; ++n) {
            Inputs in = {{"p", str(p)}, {"n", str(n)}};
            tasks.push_back(guarded("a_p-two-routes", in, [=] {
                return make_case("a_p-two-routes", in, a_p_closed(n, p).to_string(), a_p_limit_route(n, p).to_string());
            }));
        }
    const std::vector<long> levels = cfg.N ? *cfg.N : IntRange{1, 60}.values();
    for (long n : levels) {
        const Integer N = n;
        Inputs in = {{"N", N.get_str()}};
        tasks.push_back(guarded("incoherence", in, [=] {
            return make_case("incoherence", in, eis0_assemble(N, ApNormalization::Plain).central_value.get_str(), "0");
        }));
        tasks.push_back(guarded("siegel-weil-t0", in, [=] { return check_siegel_weil_t0(N); }));
    }
    return tasks;
}

}  // namespace

VerificationReport run_suite(const SuiteConfig& cfg) {
    validate(cfg);
    DensityConfig dc;
    dc.budget = cfg.budget;
    dc.d_max = cfg.d_max;
    dc.convention = cfg.convention;
    dc.jobs = 1;
    std::vector<Task> tasks;
    // An explicitly empty range selects no cases.
    const bool empty_grid = (cfg.N && cfg.N->empty()) || (cfg.t && cfg.t->empty()) || (cfg.k && cfg.k->empty());
    if (empty_grid) tasks = {};
    else if (cfg.suite == "density-calibration") tasks = density_calibration(cfg, dc);
    else if (cfg.suite == "difference-formula") tasks = difference_formula(cfg, dc);
    else if (cfg.suite == "functional-equation") tasks = functional_equation(cfg, dc);
    else if (cfg.suite == "singular-relation") tasks = singular_relation(cfg, dc);
    else if (cfg.suite == "level-lowering") tasks = level_lowering(cfg, dc);
    else if (cfg.suite == "geometry-ledger") tasks = geometry_ledger(cfg);
    else tasks = siegel_weil_t0(cfg);
    VerificationReport report;
    report.suite = cfg.suite;
    report.cases = run_tasks(tasks, cfg.jobs);
    return report;
}

}  // namespace swb

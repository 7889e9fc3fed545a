#include "swb/density.hpp"
#include "swb/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

swb::Convention parse_convention(const std::string& s) {
    if (s == "A") return swb::Convention::A;
    if (s == "B") return swb::Convention::B;
    throw swb::ConfigError("convention must be A or B");
}

swb::ReportFormat parse_format(const std::string& s) {
    if (s == "text") return swb::ReportFormat::Text;
    if (s == "json") return swb::ReportFormat::Json;
    throw swb::ConfigError("format must be text or json");
}

struct DensityArgs {
    long p = 0;
    int d = 0;
    std::string target, source, convention = "A", format = "text";
    double budget = 4294967296.0;
    bool primitive = false;
};

int run_density(const DensityArgs& a) {
    if (!swb::is_prime(a.p)) throw swb::ConfigError("--p must be a prime");
    if (a.budget < 1e6) throw swb::ConfigError("budget must be at least 1e6");
    swb::DensityConfig cfg;
    cfg.convention = parse_convention(a.convention);
    cfg.budget = static_cast<std::uint64_t>(a.budget);
    const swb::ReportFormat format = parse_format(a.format);
    const swb::QuadLattice M = swb::parse_lattice(a.target, a.p);
    const swb::QuadLattice L = swb::parse_lattice(a.source, a.p);

    nlohmann::ordered_json j;
    j["schema"] = "swb/1";
    j["command"] = "density";
    j["p"] = a.p;
    j["target"] = M.to_string();
    j["source"] = L.to_string();
    j["convention"] = swb::to_string(cfg.convention);
    j["primitive"] = a.primitive;
    std::string text;
    try {
        if (a.d > 0) {
            const swb::Integer count = swb::count_reps(M, L, a.d, a.primitive, cfg);
            const long dim = swb::rep_dimension(M.rank(), L.rank());
            const swb::Rational value = swb::Rational(count) * swb::rpow(a.p, -static_cast<long>(a.d) * dim);
            j["d"] = a.d;
            j["count"] = count.get_str();
            j["normalized"] = value.get_str();
            text = "count mod p^" + std::to_string(a.d) + ": " + count.get_str() + "\nnormalized: " + value.get_str() +
                   "\n";
        } else {
            const swb::DensityValue v =
                a.primitive ? swb::primitive_density(M, L, cfg) : swb::local_density(M, L, cfg);
            j["value"] = v.value.get_str();
            j["engine"] = swb::to_string(v.engine);
            j["stabilized_at"] = v.stabilized_at;
            text = std::string(a.primitive ? "Pden" : "Den") + " = " + v.value.get_str() + "\nengine: " +
                   swb::to_string(v.engine) + "\n";
        }
    } catch (const swb::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    }
    std::cout << (format == swb::ReportFormat::Json ? j.dump() + "\n" : text);
    return kExitOk;
}

struct VerifyArgs {
    std::string suite, primes, N, t, k, convention = "A", format = "text";
    int d_max = 0;
    bool d_max_set = false;
    double budget = 4294967296.0;
    int jobs = 1;
    bool strict_budget = false;
};

int run_verify(const VerifyArgs& a) {
    swb::SuiteConfig cfg;
    cfg.suite = a.suite;
    if (!a.primes.empty()) cfg.primes = swb::parse_int_list(a.primes);
    if (!a.N.empty()) cfg.N = swb::parse_int_list(a.N);
    if (!a.t.empty()) cfg.t = swb::parse_int_list(a.t);
    if (!a.k.empty()) cfg.k = swb::parse_int_list(a.k);
    if (a.d_max_set && a.d_max < 2) throw swb::ConfigError("d-max must be at least 2");
    cfg.d_max = a.d_max;
    if (a.budget < 1e6) throw swb::ConfigError("budget must be at least 1e6");
    cfg.budget = static_cast<std::uint64_t>(a.budget);
    cfg.jobs = a.jobs;
    cfg.format = parse_format(a.format);
    cfg.convention = parse_convention(a.convention);
    swb::validate(cfg);

    const auto start = std::chrono::steady_clock::now();
    const swb::VerificationReport report = swb::run_suite(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << swb::emit_report(report, cfg.format);
    std::cerr << "wall time: " << secs << " s\n";
    if (report.count(swb::CaseStatus::Fail)) return kExitFail;
    if (a.strict_budget && report.count(swb::CaseStatus::SkippedBudget)) return kExitBudget;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact local densities, Whittaker data and intersection ledgers for X_0(N)"};
    app.require_subcommand(1);

    DensityArgs da;
    auto* density = app.add_subcommand("density", "Compute one local density");
    density->add_option("--p", da.p, "Prime")->required();
    density->add_option("--d", da.d, "Report the raw count modulo p^d instead of the stabilized density");
    density->add_option("--target", da.target, "Target lattice M, e.g. hyp:4:+")->required();
    density->add_option("--source", da.source, "Source lattice L, e.g. diag:1,3")->required();
    density->add_option("--convention", da.convention, "Counting convention at p = 2 (A or B)");
    density->add_option("--budget", da.budget, "Work budget per count");
    density->add_option("--format", da.format, "text or json");
    density->add_flag("--primitive", da.primitive, "Primitive density");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("suite", va.suite, "Suite name")->required();
    verify->add_option("--p", va.primes, "Primes, e.g. 2,3,5");
    verify->add_option("--N", va.N, "Levels, e.g. 1..60");
    verify->add_option("--t", va.t, "t values, e.g. -10..10");
    verify->add_option("--k", va.k, "k values, e.g. 1..3");
    auto* dmax = verify->add_option("--d-max", va.d_max, "Largest precision exponent for brute-force sweeps");
    verify->add_option("--budget", va.budget, "Work budget per count");
    verify->add_option("--jobs", va.jobs, "Worker threads");
    verify->add_option("--format", va.format, "text or json");
    verify->add_option("--convention", va.convention, "Counting convention at p = 2 (A or B)");
    verify->add_flag("--strict-budget", va.strict_budget, "Exit 3 when a case exceeds the budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        if (density->parsed()) return run_density(da);
        va.d_max_set = dmax->count() > 0;
        return run_verify(va);
    } catch (const swb::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    } catch (const swb::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

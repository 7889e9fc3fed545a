#pragma once

#include "swb/density.hpp"
#include "swb/report.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace swb {

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Inclusive integer range; empty when lo > hi.
struct IntRange {
    long lo = 1;
    long hi = 0;

    bool empty() const { return lo > hi; }
    std::vector<long> values() const;
};

// "a..b", "a,b,c" or a single integer.
std::vector<long> parse_int_list(const std::string& text);

struct SuiteConfig {
    std::string suite;
    std::vector<long> primes;            // empty selects the suite default
    std::optional<std::vector<long>> N;  // unset selects the suite default grid
    std::optional<std::vector<long>> t;
    std::optional<std::vector<long>> k;
    int d_max = 0;                       // 0 keeps the engine default
    std::uint64_t budget = std::uint64_t(1) << 32;
    int jobs = 1;
    ReportFormat format = ReportFormat::Text;
    Convention convention = Convention::A;
};

const std::vector<std::string>& suite_names();

// Throws ConfigError on an unknown suite or an out-of-range field.
void validate(const SuiteConfig& cfg);

// Cases appear in a fixed order that does not depend on jobs.
VerificationReport run_suite(const SuiteConfig& cfg);

}  // namespace swb

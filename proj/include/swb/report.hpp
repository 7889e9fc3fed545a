#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace swb {

enum class CaseStatus { Pass, Fail, SkippedBudget };

std::string to_string(CaseStatus s);

struct CaseResult {
    std::string name;
    std::vector<std::pair<std::string, std::string>> inputs;
    CaseStatus status = CaseStatus::Pass;
    std::string lhs;
    std::string rhs;
    std::string detail;
};

// Builds a pass/fail case from two rendered sides.
CaseResult make_case(std::string name, std::vector<std::pair<std::string, std::string>> inputs, std::string lhs,
                     std::string rhs);

struct VerificationReport {
    std::string suite;
    std::vector<CaseResult> cases;

    std::size_t count(CaseStatus s) const;
    bool ok() const { return count(CaseStatus::Fail) == 0; }
};

enum class ReportFormat { Text, Json };

// Output depends only on the report contents, never on timing or scheduling.
std::string emit_report(const VerificationReport& report, ReportFormat format);

}  // namespace swb

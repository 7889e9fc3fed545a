#include "swb/report.hpp"

#include <json.hpp>

#include <sstream>

namespace swb {

std::string to_string(CaseStatus s) {
    switch (s) {
        case CaseStatus::Pass: return "pass";
        case CaseStatus::Fail: return "fail";
        case CaseStatus::SkippedBudget: return "skipped-budget";
    }
    return "?";
}

CaseResult make_case(std::string name, std::vector<std::pair<std::string, std::string>> inputs, std::string lhs,
                     std::string rhs) {
    CaseResult c;
    c.name = std::move(name);
    c.inputs = std::move(inputs);
    c.status = lhs == rhs ? CaseStatus::Pass : CaseStatus::Fail;
    c.lhs = std::move(lhs);
    c.rhs = std::move(rhs);
    return c;
}

std::size_t VerificationReport::count(CaseStatus s) const {
    std::size_t n = 0;
    for (const auto& c : cases)
        if (c.status == s) ++n;
    return n;
}

namespace {

std::string render_inputs(const CaseResult& c) {
    std::string out;
    for (const auto& [k, v] : c.inputs) {
        if (!out.empty()) out += ' ';
        out += k + "=" + v;
    }
    return out;
}

}  // namespace

std::string emit_report(const VerificationReport& report, ReportFormat format) {
    const auto pass = report.count(CaseStatus::Pass), fail = report.count(CaseStatus::Fail),
               skipped = report.count(CaseStatus::SkippedBudget);
    if (format == ReportFormat::Json) {
        nlohmann::ordered_json j;
        j["schema"] = "swb/1";
        j["suite"] = report.suite;
        auto cases = nlohmann::ordered_json::array();
        for (const auto& c : report.cases) {
            nlohmann::ordered_json jc;
            jc["name"] = c.name;
            nlohmann::ordered_json in = nlohmann::ordered_json::object();
            for (const auto& [k, v] : c.inputs) in[k] = v;
            jc["inputs"] = in;
            jc["status"] = to_string(c.status);
            jc["lhs"] = c.lhs;
            jc["rhs"] = c.rhs;
            if (!c.detail.empty()) jc["detail"] = c.detail;
            cases.push_back(jc);
        }
        j["cases"] = cases;
        j["summary"] = {{"pass", pass}, {"fail", fail}, {"skipped-budget", skipped}};
        return j.dump() + "\n";
    }
    std::ostringstream os;
    os << "suite " << report.suite << "\n";
    for (const auto& c : report.cases) {
        os << "[" << to_string(c.status) << "] " << c.name;
        const std::string in = render_inputs(c);
        if (!in.empty()) os << " (" << in << ")";
        os << "\n";
        if (c.status == CaseStatus::SkippedBudget) {
            os << "  " << c.detail << "\n";
            continue;
        }
        os << "  lhs: " << c.lhs << "\n  rhs: " << c.rhs << "\n";
        if (!c.detail.empty()) os << "  " << c.detail << "\n";
    }
    os << "summary: " << pass << " pass, " << fail << " fail, " << skipped << " skipped-budget\n";
    return os.str();
}

}  // namespace swb

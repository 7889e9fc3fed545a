#include "swb/symbolic.hpp"

#include <regex>
#include <sstream>

namespace swb {

Symbol Symbol::log_prime(long p) {
    if (!is_prime(p)) throw UnknownSymbolError("log(" + std::to_string(p) + ") is not a prime logarithm");
    return {SymbolKind::LogPrime, p};
}

std::string Symbol::name() const {
    switch (kind) {
        case SymbolKind::One: return "1";
        case SymbolKind::LogDetY: return "log_det_y";
        case SymbolKind::LambdaRatio: return "LambdaRatio";
        case SymbolKind::LogPrime: return "log(" + std::to_string(p) + ")";
        case SymbolKind::EulerGamma: return "EulerGamma";
        case SymbolKind::Log4Pi: return "log(4pi)";
    }
    return "?";
}

SymbolicNumber::SymbolicNumber(const Rational& c) { add_term(c, Symbol::one()); }

SymbolicNumber::SymbolicNumber(const Rational& c, Symbol s) { add_term(c, s); }

void SymbolicNumber::add_term(const Rational& c, Symbol s) {
    if (c == 0) return;
    auto it = coeffs_.find(s);
    if (it == coeffs_.end()) {
        coeffs_.emplace(s, c);
        return;
    }
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
}

SymbolicNumber& SymbolicNumber::operator+=(const SymbolicNumber& o) {
    for (const auto& [s, c] : o.coeffs_) add_term(c, s);
    return *this;
}

SymbolicNumber& SymbolicNumber::operator-=(const SymbolicNumber& o) {
    for (const auto& [s, c] : o.coeffs_) add_term(-c, s);
    return *this;
}

SymbolicNumber& SymbolicNumber::operator*=(const Rational& c) {
    if (c == 0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [s, v] : coeffs_) v *= c;
    return *this;
}

Rational SymbolicNumber::coefficient(Symbol s) const {
    auto it = coeffs_.find(s);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

std::string SymbolicNumber::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [s, c] : coeffs_) {
        Rational mag = abs(c);
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (s.kind == SymbolKind::One) {
            out << mag.get_str();
        } else if (mag == 1) {
            out << s.name();
        } else {
            out << mag.get_str() << "*" << s.name();
        }
    }
    return out.str();
}

std::pair<Rational, Symbol> parse_symbol(const std::string& name) {
    if (name == "1" || name == "One") return {1, Symbol::one()};
    if (name == "log_det_y" || name == "LogDetY") return {1, Symbol::log_det_y()};
    if (name == "LambdaRatio" || name == "Lambda'(-1)/Lambda(-1)") return {1, Symbol::lambda_ratio()};
    // Lambda(s) = Lambda(1-s) gives Lambda'(2)/Lambda(2) = -Lambda'(-1)/Lambda(-1).
    if (name == "Lambda'(2)/Lambda(2)") return {-1, Symbol::lambda_ratio()};
    if (name == "EulerGamma") return {1, {SymbolKind::EulerGamma, 0}};
    if (name == "log(4pi)" || name == "Log4Pi") return {1, {SymbolKind::Log4Pi, 0}};
    static const std::regex logp(R"(log\((\d+)\))");
    std::smatch m;
    if (std::regex_match(name, m, logp)) return {1, Symbol::log_prime(std::stol(m[1].str()))};
    throw UnknownSymbolError("unknown symbol: " + name);
}

SymbolicNumber symbolic_reduce(const std::vector<std::pair<Rational, std::string>>& terms) {
    SymbolicNumber out;
    for (const auto& [c, name] : terms) {
        auto [sign, sym] = parse_symbol(name);
        out += SymbolicNumber(c * sign, sym);
    }
    return out;
}

}  // namespace swb

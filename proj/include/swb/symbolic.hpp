#pragma once

#include "swb/padic.hpp"

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace swb {

// Declaration order fixes the rendering order.
enum class SymbolKind { LogDetY, One, LambdaRatio, LogPrime, EulerGamma, Log4Pi };

struct Symbol {
    SymbolKind kind = SymbolKind::One;
    long p = 0;  // only for LogPrime

    static Symbol one() { return {SymbolKind::One, 0}; }
    static Symbol log_prime(long p);
    static Symbol log_det_y() { return {SymbolKind::LogDetY, 0}; }
    static Symbol lambda_ratio() { return {SymbolKind::LambdaRatio, 0}; }

    auto operator<=>(const Symbol&) const = default;
    std::string name() const;
};

class UnknownSymbolError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Exact rational combination over the fixed symbol basis; zero coefficients never stored.
class SymbolicNumber {
  public:
    SymbolicNumber() = default;
    explicit SymbolicNumber(const Rational& c);
    SymbolicNumber(const Rational& c, Symbol s);

    SymbolicNumber& operator+=(const SymbolicNumber& o);
    SymbolicNumber& operator-=(const SymbolicNumber& o);
    SymbolicNumber& operator*=(const Rational& c);
    friend SymbolicNumber operator+(SymbolicNumber a, const SymbolicNumber& b) { return a += b; }
    friend SymbolicNumber operator-(SymbolicNumber a, const SymbolicNumber& b) { return a -= b; }
    friend SymbolicNumber operator*(SymbolicNumber a, const Rational& c) { return a *= c; }
    friend SymbolicNumber operator*(const Rational& c, SymbolicNumber a) { return a *= c; }
    SymbolicNumber operator-() const { return *this * Rational(-1); }

    bool operator==(const SymbolicNumber& o) const { return coeffs_ == o.coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    Rational coefficient(Symbol s) const;
    const std::map<Symbol, Rational>& coefficients() const { return coeffs_; }

    // e.g. "log_det_y + 2 - 4*LambdaRatio - 1/3*log(2)"
    std::string to_string() const;

  private:
    void add_term(const Rational& c, Symbol s);
    std::map<Symbol, Rational> coeffs_;
};

// Parses a symbol name. Accepted: "1", "log(p)", "log_det_y", "LambdaRatio",
// "Lambda'(-1)/Lambda(-1)", "Lambda'(2)/Lambda(2)" (alias, enters with sign -1),
// "EulerGamma", "log(4pi)".
std::pair<Rational, Symbol> parse_symbol(const std::string& name);

SymbolicNumber symbolic_reduce(const std::vector<std::pair<Rational, std::string>>& terms);

}  // namespace swb

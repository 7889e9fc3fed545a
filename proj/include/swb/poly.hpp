#pragma once

#include "swb/padic.hpp"

#include <string>
#include <vector>

namespace swb {

// Dense univariate polynomial in X over Q; coefficient i multiplies X^i, no trailing zeros.
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);
    Poly(const Rational& c);  // NOLINT: constants convert implicitly
    Poly(long c) : Poly(Rational(c)) {}
    static Poly x() { return Poly(std::vector<Rational>{0, 1}); }
    static Poly monomial(const Rational& c, unsigned e);

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    Rational coeff(int i) const;
    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
    const std::vector<Rational>& coeffs() const { return c_; }

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
    Poly operator-() const;
    bool operator==(const Poly& o) const { return c_ == o.c_; }

    Rational eval(const Rational& x) const;
    Poly derivative() const;
    Poly pow(unsigned e) const;
    // f(c X)
    Poly scale_var(const Rational& c) const;
    // X^D f(a / X); requires D >= degree.
    Poly reciprocal(const Rational& a, int D) const;
    Poly monic() const;

    std::string to_string(const std::string& var = "X") const;

  private:
    void trim();
    std::vector<Rational> c_;
};

void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
Poly gcd(Poly a, Poly b);

// Exact Lagrange interpolation through (xs[i], ys[i]); xs distinct.
Poly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

class PoleError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// num/den with gcd(num, den) = 1 and den monic.
class RationalFunction {
  public:
    RationalFunction() : num_(0), den_(1) {}
    RationalFunction(const Poly& num);  // NOLINT
    RationalFunction(const Poly& num, const Poly& den);
    RationalFunction(const Rational& c) : RationalFunction(Poly(c)) {}  // NOLINT
    RationalFunction(long c) : RationalFunction(Poly(c)) {}             // NOLINT

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalFunction& operator+=(const RationalFunction& o);
    RationalFunction& operator-=(const RationalFunction& o);
    RationalFunction& operator*=(const RationalFunction& o);
    RationalFunction& operator/=(const RationalFunction& o);
    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
    friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
    RationalFunction operator-() const { return RationalFunction(-num_, den_); }
    bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }

    Rational eval(const Rational& x) const;  // throws PoleError
    RationalFunction derivative() const;
    // f(c X)
    RationalFunction scale_var(const Rational& c) const;
    // f(a / X)
    RationalFunction reciprocal(const Rational& a) const;
    RationalFunction pow(int e) const;

    std::string to_string(const std::string& var = "X") const;

  private:
    void normalize();
    Poly num_, den_;
};

}  // namespace swb

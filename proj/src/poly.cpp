#include "swb/poly.hpp"

#include <sstream>

namespace swb {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly::Poly(const Rational& c) {
    if (c != 0) c_.push_back(c);
}

Poly Poly::monomial(const Rational& c, unsigned e) {
    std::vector<Rational> v(e + 1, Rational(0));
    v[e] = c;
    return Poly(std::move(v));
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
    return c_[i];
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator*=(const Poly& o) {
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    c_ = std::move(r);
    trim();
    return *this;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

Rational Poly::eval(const Rational& x) const {
    Rational acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rational> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
    return Poly(std::move(r));
}

Poly Poly::pow(unsigned e) const {
    Poly r(1), b = *this;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

Poly Poly::scale_var(const Rational& c) const {
    Poly r = *this;
    Rational f = 1;
    for (auto& v : r.c_) {
        v *= f;
        f *= c;
    }
    r.trim();
    return r;
}

Poly Poly::reciprocal(const Rational& a, int D) const {
    if (D < degree()) throw std::invalid_argument("reciprocal: D below degree");
    std::vector<Rational> r(D + 1, Rational(0));
    Rational f = 1;
    for (size_t i = 0; i < c_.size(); ++i) {
        r[D - i] = c_[i] * f;
        f *= a;
    }
    return Poly(std::move(r));
}

Poly Poly::monic() const {
    if (c_.empty()) return *this;
    Poly r = *this;
    Rational l = c_.back();
    for (auto& v : r.c_) v /= l;
    return r;
}

std::string Poly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        Rational mag = abs(c_[i]);
        if (first)
            out << (c_[i] < 0 ? "-" : "");
        else
            out << (c_[i] < 0 ? " - " : " + ");
        first = false;
        if (i == 0 || mag != 1) out << mag.get_str();
        if (i > 0) {
            if (mag != 1) out << "*";
            out << var;
            if (i > 1) out << "^" << i;
        }
    }
    return out.str();
}

void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> rem = a.coeffs();
    int db = b.degree();
    int dq = a.degree() - db;
    if (dq < 0) {
        q = Poly();
        r = a;
        return;
    }
    std::vector<Rational> quo(dq + 1, Rational(0));
    Rational lb = b.leading();
    for (int i = dq; i >= 0; --i) {
        Rational c = rem[i + db] / lb;
        quo[i] = c;
        if (c == 0) continue;
        for (int j = 0; j <= db; ++j) rem[i + j] -= c * b.coeff(j);
    }
    q = Poly(std::move(quo));
    r = Poly(std::move(rem));
}

Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

Poly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("interpolate: size mismatch");
    // Newton divided differences.
    size_t n = xs.size();
    std::vector<Rational> dd = ys;
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j) break;
        }
    Poly result;
    for (size_t i = n; i-- > 0;) {
        result *= Poly(std::vector<Rational>{-xs[i], 1});
        result += Poly(dd[i]);
    }
    return result;
}

RationalFunction::RationalFunction(const Poly& num) : num_(num), den_(1) {}

RationalFunction::RationalFunction(const Poly& num, const Poly& den) : num_(num), den_(den) {
    if (den_.is_zero()) throw PoleError("rational function with zero denominator");
    normalize();
}

void RationalFunction::normalize() {
    if (num_.is_zero()) {
        den_ = Poly(1);
        return;
    }
    Poly g = gcd(num_, den_);
    if (g.degree() > 0) {
        Poly q, r;
        divmod(num_, g, q, r);
        num_ = q;
        divmod(den_, g, q, r);
        den_ = q;
    }
    Rational l = den_.leading();
    if (l != 1) {
        num_ *= Poly(Rational(1) / l);
        den_ *= Poly(Rational(1) / l);
    }
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
    normalize();
    return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ = den_ * o.den_;
    normalize();
    return *this;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    normalize();
    return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
    if (o.num_.is_zero()) throw PoleError("division by the zero rational function");
    Poly n = num_ * o.den_;
    Poly d = den_ * o.num_;
    num_ = n;
    den_ = d;
    normalize();
    return *this;
}

Rational RationalFunction::eval(const Rational& x) const {
    Rational d = den_.eval(x);
    if (d == 0) throw PoleError("pole at X = " + x.get_str());
    return num_.eval(x) / d;
}

RationalFunction RationalFunction::derivative() const {
    return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RationalFunction RationalFunction::scale_var(const Rational& c) const {
    return RationalFunction(num_.scale_var(c), den_.scale_var(c));
}

RationalFunction RationalFunction::reciprocal(const Rational& a) const {
    int D = std::max(num_.degree(), den_.degree());
    if (D < 0) D = 0;
    return RationalFunction(num_.reciprocal(a, D), den_.reciprocal(a, D));
}

RationalFunction RationalFunction::pow(int e) const {
    if (e >= 0) return RationalFunction(num_.pow(e), den_.pow(e));
    return RationalFunction(den_.pow(-e), num_.pow(-e));
}

std::string RationalFunction::to_string(const std::string& var) const {
    if (den_ == Poly(1)) return num_.to_string(var);
    return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

}  // namespace swb

#include "swb/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace swb {

std::map<long, long> prime_factorization(const Integer& n) {
    if (n < 1) throw DomainError("factorization needs a positive integer");
    std::map<long, long> out;
    Integer m = n;
    for (long q = 2; Integer(q) * q <= m; ++q) {
        while (m % q == 0) {
            ++out[q];
            m /= q;
        }
    }
    if (m > 1) {
        if (!m.fits_slong_p()) throw DomainError("prime factor out of range");
        ++out[m.get_si()];
    }
    return out;
}

Integer euler_phi(const Integer& n) {
    Integer out = n;
    for (auto [p, e] : prime_factorization(n)) out = out / p * (p - 1);
    return out;
}

Integer dedekind_psi(const Integer& n) {
    Integer out = n;
    for (auto [p, e] : prime_factorization(n)) out = out / p * (p + 1);
    return out;
}

int moebius(const Integer& n) {
    int out = 1;
    for (auto [p, e] : prime_factorization(n)) {
        if (e > 1) return 0;
        out = -out;
    }
    return out;
}

std::vector<Integer> divisors(const Integer& N) {
    std::vector<Integer> out{1};
    for (auto [p, e] : prime_factorization(N)) {
        const std::size_t base = out.size();
        Integer pk = 1;
        for (long i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ArithFunctions arith_functions(const Integer& N) {
    ArithFunctions out;
    out.phi = euler_phi(N);
    out.psi = dedekind_psi(N);
    for (const Integer& d : divisors(N)) out.mu.emplace_back(d, moebius(d));
    return out;
}

Integer a_N(const Integer& N, const Integer& t) {
    if (t < 1 || N % t != 0) throw DomainError("a_N(t) needs t | N");
    const Integer phiN = euler_phi(N);
    Integer out = 0;
    for (const Integer& r : divisors(t)) {
        const int m = moebius(t / r) * moebius(N / r);
        if (m == 0) continue;
        out += m * (phiN / euler_phi(N / r));
    }
    return out;
}

namespace {

long require_prime(long p) {
    if (!is_prime(p)) throw DomainError("p must be prime");
    return p;
}

// phi(p^m) for m >= 0.
Integer phi_pm(long p, long m) { return m == 0 ? Integer(1) : ipow(p, m - 1) * (p - 1); }

long nu(const Integer& N, long p) { return valuation(N, p); }

Integer prime_to_p_part(const Integer& N, long p) {
    Integer out = N;
    while (out % p == 0) out /= p;
    return out;
}

void require_admissible(long n, long a) {
    if (std::labs(a) > n || (n - a) % 2 != 0) throw DomainError("component index must satisfy |a| <= n, a = n mod 2");
}

}  // namespace

std::vector<CuspComponent> cusp_components(long p, long n) {
    require_prime(p);
    if (n < 0) throw DomainError("n must be non-negative");
    std::vector<CuspComponent> out;
    for (long a = -n; a <= n; a += 2) {
        CuspComponent c{p, n, a, 0, 0};
        if (a >= 0) {
            c.deg1 = phi_pm(p, (n - a) / 2);
            c.deg2 = ipow(p, a) * phi_pm(p, (n - a) / 2);
        } else {
            c.deg1 = ipow(p, -a) * phi_pm(p, (n + a) / 2);
            c.deg2 = phi_pm(p, (n + a) / 2);
        }
        out.push_back(c);
    }
    return out;
}

CuspClass classify_cusp(long p, long n, const Integer& a, long k) {
    require_prime(p);
    if (k < 0 || k > n) throw DomainError("cusp denominator exponent must satisfy 0 <= k <= n");
    if (std::min(k, n - k) > 0 && a % p == 0) throw DomainError("cusp numerator must be a unit");
    CuspClass out;
    out.component = 2 * k - n;
    out.ra1 = n >= 2 * k ? ipow(p, n - 2 * k) : Integer(1);
    out.ra2 = 2 * k >= n ? ipow(p, 2 * k - n) : Integer(1);
    return out;
}

std::vector<FiberComponent> special_fiber(const Integer& N, long p) {
    require_prime(p);
    const long n = nu(N, p);
    const Integer psiNp = dedekind_psi(prime_to_p_part(N, p));
    std::vector<FiberComponent> out;
    for (long a = -n; a <= n; a += 2) {
        FiberComponent f{p, N, a, phi_pm(p, (n - std::labs(a)) / 2), psiNp};
        if (a < 0) f.degree_p1 *= ipow(p, -a);
        out.push_back(f);
    }
    return out;
}

void DivisorLedger::add_vertical(long p, long a, const Rational& c) {
    const long n = nu(N, p);
    if (n == 0) throw DomainError("vertical components are tracked only at p | N");
    require_admissible(n, a);
    if (c == 0) return;
    auto [it, inserted] = vertical.try_emplace({p, a}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) vertical.erase(it);
    }
}

void DivisorLedger::add_cusp_inf(const Rational& c) { cusp_inf += c; }

void DivisorLedger::add_cusp_zero(const Rational& c) {
    if (N == 1)
        cusp_inf += c;
    else
        cusp_zero += c;
}

Rational DivisorLedger::coefficient(long p, long a) const {
    auto it = vertical.find({p, a});
    return it == vertical.end() ? Rational(0) : it->second;
}

DivisorLedger& DivisorLedger::operator+=(const DivisorLedger& o) {
    if (N != o.N) throw DomainError("ledgers on different levels");
    for (const auto& [key, c] : o.vertical) add_vertical(key.first, key.second, c);
    cusp_inf += o.cusp_inf;
    cusp_zero += o.cusp_zero;
    return *this;
}

DivisorLedger& DivisorLedger::operator-=(const DivisorLedger& o) { return *this += o * Rational(-1); }

DivisorLedger& DivisorLedger::operator*=(const Rational& c) {
    if (c == 0) {
        vertical.clear();
        cusp_inf = cusp_zero = 0;
        return *this;
    }
    for (auto& [key, v] : vertical) v *= c;
    cusp_inf *= c;
    cusp_zero *= c;
    return *this;
}

bool DivisorLedger::operator==(const DivisorLedger& o) const {
    return N == o.N && vertical == o.vertical && cusp_inf == o.cusp_inf && cusp_zero == o.cusp_zero;
}

std::string DivisorLedger::to_string() const {
    std::ostringstream os;
    bool first = true;
    auto term = [&](const Rational& c, const std::string& name) {
        if (c == 0) return;
        if (!first) os << " + ";
        os << c.get_str() << "*" << name;
        first = false;
    };
    term(cusp_inf, "P_inf");
    term(cusp_zero, "P_0");
    for (const auto& [key, c] : vertical)
        term(c, "X(" + std::to_string(key.first) + "," + std::to_string(key.second) + ")");
    return first ? "0" : os.str();
}

DivisorLedger vertical_component(const Integer& N, long p, long a) {
    DivisorLedger L(N);
    L.add_vertical(p, a, 1);
    return L;
}

DivisorLedger div_p(const Integer& N, long p) {
    DivisorLedger L(N);
    const long n = nu(N, p);
    for (long a = -n; a <= n; a += 2) L.add_vertical(p, a, Rational(phi_pm(p, (n - std::labs(a)) / 2)));
    return L;
}

Rational component_pairing_coefficient(const Integer& N, long p, long a, long b) {
    const long n = nu(N, p);
    if (n == 0) throw DomainError("vertical components are tracked only at p | N");
    require_admissible(n, a);
    require_admissible(n, b);
    const Rational base = Rational(dedekind_psi(prime_to_p_part(N, p)));
    if (a != b) {
        const Rational mass = base * (p - 1) / 24;
        if (a * b >= 0) return mass * Rational(ipow(p, std::min(std::labs(a), std::labs(b))));
        return mass;
    }
    if (std::labs(a) != n) return -base * Rational(ipow(p, std::labs(a))) / 12;
    return -base * (p - 1) * Rational(ipow(p, n - 1)) / 24;
}

SymbolicNumber intersection_pairing(const DivisorLedger& A, const DivisorLedger& B) {
    if (A.N != B.N) throw DomainError("ledgers on different levels");
    const Integer& N = A.N;
    if ((A.cusp_inf != 0 || A.cusp_zero != 0) && (B.cusp_inf != 0 || B.cusp_zero != 0))
        throw DomainError("cusp-cusp pairing is out of domain");
    // A cusp at infinity reduces into X^n_p, the cusp at zero into X^{-n}_p.
    auto cusp_vertical = [&](const DivisorLedger& cusps, const DivisorLedger& vert) {
        for (const auto& [key, c] : vert.vertical) {
            const long n = nu(N, key.first);
            if ((cusps.cusp_inf != 0 && key.second == n) || (cusps.cusp_zero != 0 && key.second == -n))
                throw DomainError("pairing of a cusp with X^{+-n}_" + std::to_string(key.first) + " is out of domain");
        }
    };
    cusp_vertical(A, B);
    cusp_vertical(B, A);
    std::map<long, Rational> per_prime;
    for (const auto& [ka, ca] : A.vertical)
        for (const auto& [kb, cb] : B.vertical) {
            if (ka.first != kb.first) continue;
            per_prime[ka.first] += ca * cb * component_pairing_coefficient(N, ka.first, ka.second, kb.second);
        }
    SymbolicNumber out;
    for (const auto& [p, c] : per_prime) out += SymbolicNumber(c, Symbol::log_prime(p));
    return out;
}

DivisorLedger xhat(const Integer& N, long p) {
    DivisorLedger L(N);
    const long n = nu(N, p);
    if (n == 0) return L;
    L.add_vertical(p, n, Rational(n) / 2);
    L.add_vertical(p, -n, Rational(-n) / 2);
    for (long a = -n + 2; a < n; a += 2)
        L.add_vertical(p, a, Rational(a) / 2 * Rational(phi_pm(p, (n - std::labs(a)) / 2)));
    return L;
}

SymbolicNumber xhat_self_intersection_closed(const Integer& N, long p) {
    const long n = nu(N, p);
    if (n < 1) throw DomainError("xhat self-intersection needs p | N");
    const Rational c = Rational(dedekind_psi(N)) / 24 * eis0_log_coefficient(n, p);
    return SymbolicNumber(c, Symbol::log_prime(p));
}

SymbolicNumber xhat_self_intersection(const Integer& N, long p) {
    const SymbolicNumber closed = xhat_self_intersection_closed(N, p);
    const DivisorLedger X = xhat(N, p);
    const SymbolicNumber ledger = intersection_pairing(X, X);
    if (!(ledger == closed))
        throw IdentityError("xhat self-intersection at N=" + N.get_str() + ", p=" + std::to_string(p) +
                            ": ledger " + ledger.to_string() + " vs closed form " + closed.to_string());
    return ledger;
}

DivisorLedger f_p(const Integer& N, long p) {
    DivisorLedger L(N);
    const long n = nu(N, p);
    if (n == 0) return L;
    const Rational scale = 12 * Rational(ipow(p, n - 1) * euler_phi(prime_to_p_part(N, p)));
    for (long a = -n; a < n; a += 2) {
        const Rational inner = Rational(1 - p) / 2 * (n - a) - 1;
        L.add_vertical(p, a, scale * inner * Rational(phi_pm(p, (n - std::labs(a)) / 2)));
    }
    return L;
}

DivisorLedger f_p_zero(const Integer& N, long p) {
    DivisorLedger L(N);
    const long n = nu(N, p);
    if (n == 0) return L;
    L.add_vertical(p, -n, Rational(-6 * n * euler_phi(N)));
    const Rational scale = 12 * Rational(ipow(p, n - 1) * euler_phi(prime_to_p_part(N, p)));
    const Rational inner = Rational(1 - p) / 2 * n - 1;
    for (long a = -n + 2; a <= n; a += 2)
        L.add_vertical(p, a, scale * inner * Rational(phi_pm(p, (n - std::labs(a)) / 2)));
    return L;
}

DeltaSections div_delta_section(const Integer& N) {
    DeltaSections out{DivisorLedger(N), DivisorLedger(N)};
    const Rational order = Rational(dedekind_psi(N) * euler_phi(N));
    out.delta.add_cusp_inf(order);
    out.delta_zero.add_cusp_zero(order);
    for (auto [p, e] : prime_factorization(N)) {
        out.delta += f_p(N, p);
        out.delta_zero += f_p_zero(N, p);
    }
    return out;
}

DivisorLedger atkin_lehner_pullback(const DivisorLedger& L) {
    DivisorLedger out(L.N);
    for (const auto& [key, c] : L.vertical) out.add_vertical(key.first, -key.second, c);
    out.add_cusp_inf(L.cusp_zero);
    out.add_cusp_zero(L.cusp_inf);
    return out;
}

CaseResult check_hodge_difference(const Integer& N) {
    const DeltaSections d = div_delta_section(N);
    DivisorLedger lhs = (d.delta_zero - atkin_lehner_pullback(d.delta)) * (1 / Rational(12 * euler_phi(N)));
    DivisorLedger rhs(N);
    for (auto [p, e] : prime_factorization(N)) rhs += xhat(N, p);
    CaseResult c = make_case("hodge-difference", {{"N", N.get_str()}}, lhs.to_string(), rhs.to_string());
    if (!(lhs == rhs)) {
        std::string diff;
        const DivisorLedger delta = lhs - rhs;
        for (const auto& [key, v] : delta.vertical)
            diff += "(p=" + std::to_string(key.first) + ",a=" + std::to_string(key.second) + "): " + v.get_str() + "; ";
        c.status = CaseStatus::Fail;
        c.detail = "coefficient mismatch " + diff;
    }
    return c;
}

CaseResult check_div_p_trivial(const Integer& N, long p) {
    const long n = nu(N, p);
    const DivisorLedger D = div_p(N, p);
    std::string lhs;
    bool all_zero = true;
    for (long a = -n; a <= n; a += 2) {
        const SymbolicNumber v = intersection_pairing(vertical_component(N, p, a), D);
        if (!v.is_zero()) all_zero = false;
        if (!lhs.empty()) lhs += ", ";
        lhs += std::to_string(a) + ": " + (v.is_zero() ? std::string("0") : v.to_string());
    }
    CaseResult c = make_case("div-p-trivial", {{"N", N.get_str()}, {"p", std::to_string(p)}}, lhs, lhs);
    if (!all_zero) {
        c.status = CaseStatus::Fail;
        c.rhs = "0 for every component";
    }
    return c;
}

SymbolicNumber fp_self_pairing_closed(const Integer& N, long p) {
    const long n = nu(N, p);
    if (n < 1) throw DomainError("f_p self-pairing needs p | N");
    const Integer phi = euler_phi(N);
    const Rational c = Rational(-6 * dedekind_psi(N) * phi * phi) * (n * p * p + 1 - n) / (p * p - 1);
    return SymbolicNumber(c, Symbol::log_prime(p));
}

DeltaSelfPairing delta_self_pairing(const Integer& N) {
    DeltaSelfPairing out;
    const Integer phi = euler_phi(N), psi = dedekind_psi(N);
    const Rational scale = Rational(6 * psi * phi * phi);
    out.total = SymbolicNumber(scale / 2) - SymbolicNumber(scale, Symbol::lambda_ratio());
    for (auto [p, e] : prime_factorization(N)) {
        const DivisorLedger F = f_p(N, p);
        const SymbolicNumber ledger = intersection_pairing(F, F);
        const SymbolicNumber closed = fp_self_pairing_closed(N, p);
        if (!(ledger == closed))
            throw IdentityError("f_p self-pairing at N=" + N.get_str() + ", p=" + std::to_string(p) + ": ledger " +
                                ledger.to_string() + " vs closed form " + closed.to_string());
        out.fp_pairings.emplace(p, ledger);
        out.total -= ledger;
    }
    return out;
}

SymbolicNumber omega_self_pairing(const Integer& N) {
    const Rational s = Rational(dedekind_psi(N)) / 24;
    return SymbolicNumber(s / 2) - SymbolicNumber(s, Symbol::lambda_ratio());
}

EisensteinConstantTerm geometric_t0_side(const Integer& N) {
    if (N < 1) throw DomainError("level must be positive");
    SymbolicNumber inner = omega_self_pairing(N) * Rational(4);
    for (auto [p, e] : prime_factorization(N)) inner -= xhat_self_intersection(N, p);
    EisensteinConstantTerm out;
    out.value = inner * (Rational(24) / Rational(dedekind_psi(N))) + SymbolicNumber(1, Symbol::log_det_y());
    out.central_value = 0;
    return out;
}

CaseResult check_siegel_weil_t0(const Integer& N) {
    std::vector<std::pair<std::string, std::string>> inputs = {{"N", N.get_str()}};
    std::string lhs, rhs;
    try {
        lhs = geometric_t0_side(N).value.to_string();
    } catch (const std::exception& e) {
        CaseResult c = make_case("siegel-weil-t0", inputs, "error", "");
        c.status = CaseStatus::Fail;
        c.detail = std::string("geometric side: ") + e.what();
        return c;
    }
    try {
        rhs = eis0_derivative(N).value.to_string();
    } catch (const std::exception& e) {
        CaseResult c = make_case("siegel-weil-t0", inputs, lhs, "error");
        c.status = CaseStatus::Fail;
        c.detail = std::string("analytic side: ") + e.what();
        return c;
    }
    return make_case("siegel-weil-t0", inputs, lhs, rhs);
}

}  // namespace swb

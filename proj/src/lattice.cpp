#include "swb/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace swb {

Matrix QuadLattice::moment() const {
    int m = rank();
    Matrix B(m, std::vector<Rational>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) B[i][j] = b(i, j);
    return B;
}

Rational determinant(Matrix m) {
    size_t n = m.size();
    Rational det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            Rational f = m[r][c] / m[c][c];
            for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

Rational QuadLattice::det_b() const { return determinant(moment()); }

Rational QuadLattice::det_T() const {
    Rational d = det_b();
    for (int i = 0; i < rank(); ++i) d /= 2;
    return d;
}

bool QuadLattice::integral() const {
    for (const auto& row : gram)
        for (const auto& v : row)
            if (!is_p_integral(v, p)) return false;
    return true;
}

Rational QuadLattice::q_of(const std::vector<Rational>& v) const {
    Rational s = 0;
    int m = rank();
    for (int i = 0; i < m; ++i) {
        if (v[i] == 0) continue;
        s += gram[i][i] * v[i] * v[i];
        for (int j = i + 1; j < m; ++j) s += gram[i][j] * v[i] * v[j];
    }
    return s;
}

Rational QuadLattice::b_of(const std::vector<Rational>& v, const std::vector<Rational>& w) const {
    Rational s = 0;
    int m = rank();
    for (int i = 0; i < m; ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < m; ++j) s += b(i, j) * v[i] * w[j];
    }
    return s;
}

std::string QuadLattice::to_string() const {
    std::ostringstream out;
    out << "p=" << p << " [";
    for (int i = 0; i < rank(); ++i) {
        out << (i ? "; " : "");
        for (int j = 0; j < rank(); ++j) out << (j ? "," : "") << gram[i][j].get_str();
    }
    out << "]";
    return out.str();
}

long nonresidue(long p) {
    for (long d = 2; d < p; ++d)
        if (quad_residue_symbol(Rational(d), p) == -1) return d;
    throw DomainError("no nonresidue");
}

static void require_prime(long p) {
    if (!is_prime(p)) throw DomainError("p must be prime, got " + std::to_string(p));
}

QuadLattice make_diagonal(long p, const std::vector<Rational>& a) {
    require_prime(p);
    QuadLattice L;
    L.p = p;
    size_t m = a.size();
    L.gram.assign(m, std::vector<Rational>(m, Rational(0)));
    for (size_t i = 0; i < m; ++i) L.gram[i][i] = a[i];
    return L;
}

static QuadLattice plane(long p) {
    QuadLattice H;
    H.p = p;
    H.gram = {{0, 1}, {1, 0}};
    return H;
}

QuadLattice make_hyperbolic(long p, int k, int eps) {
    require_prime(p);
    if (k < 0) throw DomainError("hyperbolic rank must be non-negative");
    if (eps != 1 && eps != -1) throw DomainError("hyperbolic sign must be +1 or -1");
    if (p == 2 && (k % 2 != 0 || eps != 1))
        throw DomainError("at p = 2 only even-rank hyperbolic lattices with sign + are supported");
    QuadLattice L;
    L.p = p;
    if (k == 0) {
        if (eps != 1) throw DomainError("H_0 has sign +");
        return L;
    }
    int planes = k / 2;
    if (k % 2 == 0 && eps == -1) --planes;
    for (int i = 0; i < planes; ++i) L = direct_sum(L, plane(p));
    if (k % 2 == 0 && eps == 1) return L;
    Rational delta(nonresidue(p));
    if (k % 2 == 1) {
        L = direct_sum(L, make_diagonal(p, {eps == 1 ? Rational(1) : delta}));
    } else if (eps == -1) {
        L = direct_sum(L, make_diagonal(p, {Rational(1), Rational(-delta)}));
    }
    return L;
}

QuadLattice make_delta(long p, const Rational& N) {
    require_prime(p);
    if (N == 0) throw DomainError("delta lattice needs nonzero N");
    // q(a,b,c) = -N a^2 - b c
    QuadLattice L;
    L.p = p;
    L.gram = {{-N, 0, 0}, {0, 0, -1}, {0, -1, 0}};
    return L;
}

QuadLattice make_block(long p, const JordanBlock& blk) {
    QuadLattice L;
    L.p = p;
    if (blk.size == 1)
        L.gram = {{blk.a}};
    else
        L.gram = {{blk.a, blk.c}, {blk.c, blk.b}};
    return L;
}

QuadLattice direct_sum(const QuadLattice& L, const QuadLattice& M) {
    if (L.p != M.p) throw DomainError("direct_sum: mismatched primes");
    QuadLattice S;
    S.p = L.p;
    int a = L.rank(), b = M.rank();
    S.gram.assign(a + b, std::vector<Rational>(a + b, Rational(0)));
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < a; ++j) S.gram[i][j] = L.gram[i][j];
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) S.gram[a + i][a + j] = M.gram[i][j];
    return S;
}

QuadLattice direct_sum(const std::vector<QuadLattice>& parts, long p) {
    QuadLattice S;
    S.p = p;
    for (const auto& x : parts) S = direct_sum(S, x);
    return S;
}

QuadLattice change_basis(const QuadLattice& L, const Matrix& C) {
    int m = L.rank();
    int n = C.empty() ? 0 : static_cast<int>(C[0].size());
    std::vector<std::vector<Rational>> cols(n, std::vector<Rational>(m));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) cols[j][i] = C[i][j];
    QuadLattice R;
    R.p = L.p;
    R.gram.assign(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i) {
        R.gram[i][i] = L.q_of(cols[i]);
        for (int j = i + 1; j < n; ++j) R.gram[i][j] = R.gram[j][i] = L.b_of(cols[i], cols[j]);
    }
    return R;
}

static std::vector<std::string> split_sum(const std::string& body) {
    static const char* prefixes[] = {"diag:", "hyp:", "delta:", "sum:"};
    std::vector<std::string> parts;
    size_t start = 0;
    for (size_t i = 0; i < body.size(); ++i) {
        if (body[i] != '+') continue;
        bool boundary = false;
        for (const char* pre : prefixes)
            if (body.compare(i + 1, std::char_traits<char>::length(pre), pre) == 0) boundary = true;
        if (boundary) {
            parts.push_back(body.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(body.substr(start));
    return parts;
}

static Rational parse_rational(const std::string& s) {
    if (s.empty()) throw DomainError("empty number in lattice spec");
    for (char ch : s)
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '/'))
            throw DomainError("bad number in lattice spec: " + s);
    Rational r;
    if (r.set_str(s, 10) != 0) throw DomainError("bad number in lattice spec: " + s);
    if (r.get_den() == 0) throw DomainError("zero denominator in lattice spec: " + s);
    r.canonicalize();
    return r;
}

QuadLattice parse_lattice(const std::string& spec, long p) {
    require_prime(p);
    auto starts = [&](const char* pre) { return spec.rfind(pre, 0) == 0; };
    if (starts("sum:")) {
        QuadLattice S;
        S.p = p;
        for (const auto& part : split_sum(spec.substr(4))) S = direct_sum(S, parse_lattice(part, p));
        return S;
    }
    if (starts("diag:")) {
        std::vector<Rational> a;
        std::string body = spec.substr(5);
        if (body.empty()) return make_diagonal(p, {});
        size_t pos = 0;
        while (pos <= body.size()) {
            size_t comma = body.find(',', pos);
            if (comma == std::string::npos) comma = body.size();
            a.push_back(parse_rational(body.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        return make_diagonal(p, a);
    }
    if (starts("hyp:")) {
        std::string body = spec.substr(4);
        size_t colon = body.find(':');
        if (colon == std::string::npos || colon + 2 != body.size())
            throw DomainError("hyperbolic spec must be hyp:k:+ or hyp:k:-");
        int k = std::stoi(body.substr(0, colon));
        char s = body[colon + 1];
        if (s != '+' && s != '-') throw DomainError("hyperbolic sign must be + or -");
        return make_hyperbolic(p, k, s == '+' ? 1 : -1);
    }
    if (starts("delta:")) return make_delta(p, parse_rational(spec.substr(6)));
    throw DomainError("unknown lattice spec: " + spec);
}

std::vector<Rational> diagonalize(const QuadLattice& L) {
    Matrix B = L.moment();
    int m = L.rank();
    std::vector<Rational> out;
    std::vector<bool> used(m, false);
    for (int step = 0; step < m; ++step) {
        int piv = -1;
        for (int i = 0; i < m && piv < 0; ++i)
            if (!used[i] && B[i][i] != 0) piv = i;
        if (piv < 0) {
            // All remaining diagonal entries vanish: replace e_i by e_i + e_j for a nonzero B_ij.
            int pi = -1, pj = -1;
            for (int i = 0; i < m && pi < 0; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (!used[i] && !used[j] && B[i][j] != 0) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi < 0) throw DomainError("degenerate Gram matrix");
            for (int k = 0; k < m; ++k) B[pi][k] += B[pj][k];
            for (int k = 0; k < m; ++k) B[k][pi] += B[k][pj];
            piv = pi;
        }
        used[piv] = true;
        out.push_back(B[piv][piv] / 2);
        for (int k = 0; k < m; ++k) {
            if (used[k] || B[k][piv] == 0) continue;
            Rational f = B[k][piv] / B[piv][piv];
            for (int c = 0; c < m; ++c) B[k][c] -= f * B[piv][c];
            for (int r = 0; r < m; ++r) B[r][k] -= f * B[r][piv];
        }
    }
    return out;
}

LatticeInvariants invariants(const QuadLattice& L) {
    LatticeInvariants inv;
    inv.rank = L.rank();
    Rational db = L.det_b();
    if (db == 0) throw DomainError("invariants: degenerate Gram matrix");
    inv.val = valuation(db, L.p).value;
    std::vector<Rational> a = diagonalize(L);
    int h = 1;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j) h *= hilbert_symbol(2 * a[i], 2 * a[j], L.p);
    inv.hasse = h;
    if (L.p != 2) {
        long m = L.rank();
        Rational d = L.det_T();
        if ((m * (m - 1) / 2) % 2 != 0) d = -d;
        inv.chi = quad_residue_symbol(d, L.p);
    }
    return inv;
}

static long vq(const Rational& x, long p) {
    Valuation v = valuation(x, p);
    return v.infinite ? std::numeric_limits<long>::max() : v.value;
}

std::vector<JordanBlock> jordan_blocks(const QuadLattice& L) {
    long p = L.p;
    int m = L.rank();
    Matrix B = L.moment();
    std::vector<bool> used(m, false);
    std::vector<JordanBlock> blocks;
    int remaining = m;
    while (remaining > 0) {
        long vd = std::numeric_limits<long>::max(), vo = vd;
        int di = -1, oi = -1, oj = -1;
        for (int i = 0; i < m; ++i) {
            if (used[i]) continue;
            long v = vq(B[i][i], p);
            if (v < vd) {
                vd = v;
                di = i;
            }
            for (int j = i + 1; j < m; ++j) {
                if (used[j]) continue;
                long w = vq(B[i][j], p);
                if (w < vo) {
                    vo = w;
                    oi = i;
                    oj = j;
                }
            }
        }
        if (vd == std::numeric_limits<long>::max() && vo == vd)
            throw DomainError("degenerate Gram matrix");
        if (vd <= vo || (p != 2 && oi >= 0)) {
            int piv = di;
            if (vd > vo) {
                // p odd: (e_i + e_j, e_i + e_j) has valuation vo.
                for (int k = 0; k < m; ++k) B[oi][k] += B[oj][k];
                for (int k = 0; k < m; ++k) B[k][oi] += B[k][oj];
                piv = oi;
            }
            used[piv] = true;
            --remaining;
            JordanBlock blk;
            blk.size = 1;
            blk.a = B[piv][piv] / 2;
            blk.scale = vq(B[piv][piv], p);
            blocks.push_back(blk);
            for (int k = 0; k < m; ++k) {
                if (used[k] || B[k][piv] == 0) continue;
                Rational f = B[k][piv] / B[piv][piv];
                for (int c = 0; c < m; ++c) B[k][c] -= f * B[piv][c];
                for (int r = 0; r < m; ++r) B[r][k] -= f * B[r][piv];
            }
        } else {
            int i = oi, j = oj;
            used[i] = used[j] = true;
            remaining -= 2;
            JordanBlock blk;
            blk.size = 2;
            blk.a = B[i][i] / 2;
            blk.b = B[j][j] / 2;
            blk.c = B[i][j];
            blk.scale = vo;
            blocks.push_back(blk);
            Rational det = B[i][i] * B[j][j] - B[i][j] * B[i][j];
            for (int k = 0; k < m; ++k) {
                if (used[k]) continue;
                Rational x = B[k][i], y = B[k][j];
                if (x == 0 && y == 0) continue;
                // coefficients (s,t) with (e_k - s e_i - t e_j) orthogonal to e_i, e_j
                Rational s = (x * B[j][j] - y * B[i][j]) / det;
                Rational t = (y * B[i][i] - x * B[i][j]) / det;
                for (int c = 0; c < m; ++c) B[k][c] -= s * B[i][c] + t * B[j][c];
                for (int r = 0; r < m; ++r) B[r][k] -= s * B[r][i] + t * B[r][j];
            }
        }
    }
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const JordanBlock& x, const JordanBlock& y) { return x.scale < y.scale; });
    return blocks;
}

std::vector<JordanEntry> jordan_form(const QuadLattice& L) {
    if (L.p == 2) throw DomainError("jordan_form: p = 2 is not supported");
    std::vector<JordanEntry> out;
    for (const auto& blk : jordan_blocks(L)) {
        Valuation v = valuation(blk.a, L.p);
        out.push_back({unit_part(blk.a, L.p), v.value});
    }
    return out;
}

GrossKeatingPair gross_keating(const QuadLattice& L) {
    if (L.rank() != 2) throw DomainError("gross_keating needs a rank-2 lattice");
    auto J = jordan_form(L);
    long a = J[0].exponent, b = J[1].exponent;
    if (a > b) std::swap(a, b);
    return {a, b};
}

bool is_unimodular(const QuadLattice& L) {
    if (L.rank() == 0) return true;
    if (!L.integral()) return false;
    return valuation(L.det_b(), L.p).value == 0;
}

bool is_split_even_unimodular(const QuadLattice& L) {
    if (L.p != 2) return false;
    if (!is_unimodular(L)) return false;
    int anisotropic = 0;
    for (const auto& blk : jordan_blocks(L)) {
        if (blk.size != 2) return false;
        Rational disc = blk.c * blk.c - 4 * blk.a * blk.b;
        Integer w = disc.get_num() * disc.get_den();
        Integer r = w % 8;
        if (r < 0) r += 8;
        if (r != 1) ++anisotropic;
    }
    return anisotropic % 2 == 0;
}

QuadLattice twist_h(long p, int k, int eps, const Rational& N, long i) {
    if (k < 2) throw DomainError("twist_h needs k >= 2");
    if (N == 0) throw DomainError("twist_h needs nonzero N");
    if (i < 0 || 2 * i > valuation(N, p).value) throw DomainError("twist_h: 2i exceeds the valuation of N");
    Rational c = -N * rpow(p, -2 * i);
    return direct_sum(make_diagonal(p, {c}), make_hyperbolic(p, k - 2, eps));
}

}  // namespace swb

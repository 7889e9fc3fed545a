#include "engines.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace swb::detail {

namespace {

using Vec = std::vector<long>;
using Mat = std::vector<Vec>;

long mod_inv(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    for (long t = 1; t < p; ++t)
        if (a * t % p == 1) return t;
    throw DomainError("mod_inv: not invertible");
}

long legendre(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    long r = 1, b = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

// Basis of {v : A v = 0} over F_p; A is rows x cols.
std::vector<Vec> nullspace(Mat A, int cols, long p) {
    int rows = static_cast<int>(A.size());
    std::vector<int> pivcol;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (A[i][c] % p) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(A[piv], A[r]);
        long inv = mod_inv(A[r][c], p);
        for (int k = 0; k < cols; ++k) A[r][k] = A[r][k] * inv % p;
        for (int i = 0; i < rows; ++i) {
            if (i == r || A[i][c] % p == 0) continue;
            long f = A[i][c];
            for (int k = 0; k < cols; ++k) A[i][k] = ((A[i][k] - f * A[r][k]) % p + p) % p;
        }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<Vec> basis;
    for (int c = 0; c < cols; ++c) {
        if (std::find(pivcol.begin(), pivcol.end(), c) != pivcol.end()) continue;
        Vec v(cols, 0);
        v[c] = 1;
        for (int i = 0; i < r; ++i) v[pivcol[i]] = (p - A[i][c] % p) % p;
        basis.push_back(v);
    }
    return basis;
}

int rank_of(Mat A, int cols, long p) {
    return cols - static_cast<int>(nullspace(std::move(A), cols, p).size());
}

// Reduced Gram data of an F_p-quadratic space.
struct SmallForm {
    int n = 0;
    Vec q;  // q-values
    Mat b;  // bilinear values, diagonal 2q

    long qv(const Vec& v, long p) const {
        long s = 0;
        for (int i = 0; i < n; ++i) {
            s += q[i] * (v[i] * v[i] % p) % p;
            for (int j = i + 1; j < n; ++j) s += b[i][j] * (v[i] * v[j] % p) % p;
        }
        return s % p;
    }
    long bv(const Vec& v, const Vec& w, long p) const {
        long s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += b[i][j] * (v[i] * w[j] % p) % p;
        return s % p;
    }
};

// Symmetric matrices xi in Sym_n(F_p), grouped by the classes that determine the Gauss sum.
struct XiTable {
    long p = 0;
    int n = 0;
    int s = 0;
    std::vector<std::uint8_t> coords;  // s entries per xi: diagonal first, then i<j pairs
    std::vector<std::uint8_t> cls;     // odd p: 2 * rank + (eta == -1); p = 2: rank
    int ncls = 0;
};

std::pair<int, int> sym_rank_eta(Mat A, long p) {
    int n = static_cast<int>(A.size());
    std::vector<bool> used(n, false);
    int r = 0;
    long prod = 1;
    for (int step = 0; step < n; ++step) {
        int piv = -1;
        for (int i = 0; i < n && piv < 0; ++i)
            if (!used[i] && A[i][i] % p) piv = i;
        if (piv < 0) {
            int pi = -1, pj = -1;
            for (int i = 0; i < n && pi < 0; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (!used[i] && !used[j] && A[i][j] % p) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi < 0) break;
            for (int k = 0; k < n; ++k) A[pi][k] = (A[pi][k] + A[pj][k]) % p;
            for (int k = 0; k < n; ++k) A[k][pi] = (A[k][pi] + A[k][pj]) % p;
            piv = pi;
        }
        used[piv] = true;
        ++r;
        long d = A[piv][piv] % p;
        prod = prod * d % p;
        long inv = mod_inv(d, p);
        for (int k = 0; k < n; ++k) {
            if (used[k] || A[k][piv] % p == 0) continue;
            long f = A[k][piv] * inv % p;
            for (int c = 0; c < n; ++c) A[k][c] = ((A[k][c] - f * A[piv][c]) % p + p) % p;
            for (int c = 0; c < n; ++c) A[c][k] = ((A[c][k] - f * A[c][piv]) % p + p) % p;
        }
    }
    return {r, r == 0 ? 1 : static_cast<int>(legendre(prod, p))};
}

std::shared_ptr<const XiTable> xi_table(long p, int n) {
    static std::mutex mu;
    static std::map<std::pair<long, int>, std::shared_ptr<const XiTable>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({p, n});
        if (it != cache.end()) return it->second;
    }
    auto t = std::make_shared<XiTable>();
    t->p = p;
    t->n = n;
    t->s = n * (n + 1) / 2;
    t->ncls = p == 2 ? n + 1 : 2 * n + 2;
    std::vector<std::uint8_t> xi(t->s, 0);
    while (true) {
        Mat A(n, Vec(n, 0));
        int idx = 0;
        for (int i = 0; i < n; ++i) A[i][i] = xi[idx++];
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) A[i][j] = A[j][i] = xi[idx++];
        int c;
        if (p == 2) {
            c = rank_of(A, n, 2);
        } else {
            auto [r, eta] = sym_rank_eta(A, p);
            c = 2 * r + (eta == -1 ? 1 : 0);
        }
        t->coords.insert(t->coords.end(), xi.begin(), xi.end());
        t->cls.push_back(static_cast<std::uint8_t>(c));
        int k = 0;
        while (k < t->s && ++xi[k] == p) xi[k++] = 0;
        if (k == t->s) break;
    }
    std::lock_guard<std::mutex> lock(mu);
    cache[{p, n}] = t;
    return t;
}

// Number of all (not necessarily injective) isometries from (F_p^n, form) into the reduction
// of a unimodular lattice of rank m; eta_det = (det_T(M)/p), unused at p = 2 where M is split.
Integer all_count(const SmallForm& form, long p, int m, int eta_det) {
    const int n = form.n;
    if (n == 0) return 1;
    auto table = xi_table(p, n);
    const int s = table->s;
    std::vector<long> tv(s);
    {
        int idx = 0;
        for (int i = 0; i < n; ++i) tv[idx++] = form.q[i] % p;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) tv[idx++] = form.b[i][j] % p;
    }
    const std::size_t count = table->cls.size();
    // hist[cls][b] = #{xi in cls : -<xi,T> = b mod p}
    std::vector<std::vector<long>> hist(table->ncls, std::vector<long>(p, 0));
    for (std::size_t x = 0; x < count; ++x) {
        const std::uint8_t* xi = table->coords.data() + x * s;
        long acc = 0;
        for (int k = 0; k < s; ++k) acc += xi[k] * tv[k];
        acc %= p;
        ++hist[table->cls[x]][(p - acc) % p];
    }
    Integer ps = ipow(p, s);
    if (p == 2) {
        Integer total = 0;
        for (int r = 0; r <= n; ++r) {
            Integer g = ipow(2, static_cast<unsigned long>((m / 2) * (2 * n - r)));
            total += g * (hist[r][0] - hist[r][1]);
        }
        if (total % ps != 0) throw std::logic_error("Gauss sum count not integral");
        return total / ps;
    }
    const long eta_m1 = legendre(-1, p);
    std::vector<Integer> coef(p, Integer(0));
    for (int c = 0; c < table->ncls; ++c) {
        int r = c / 2;
        int eta = (c % 2) ? -1 : 1;
        if (r > n) continue;
        long e = static_cast<long>(m) * r;
        Integer scalar = ipow(p, static_cast<unsigned long>(m * (n - r)));
        Integer base = Integer(eta_m1 * p);
        Integer pw = 1;
        for (long i = 0; i < e / 2; ++i) pw *= base;
        scalar *= pw;
        if (r % 2 && eta_det == -1) scalar = -scalar;
        if (m % 2 && eta == -1) scalar = -scalar;
        for (long b = 0; b < p; ++b) {
            long h = hist[c][b];
            if (!h) continue;
            if (e % 2 == 0) {
                coef[b] += scalar * h;
            } else {
                for (long a = 1; a < p; ++a) coef[(a + b) % p] += scalar * (h * legendre(a, p));
            }
        }
    }
    for (long i = 2; i < p; ++i)
        if (coef[i] != coef[1]) throw std::logic_error("Gauss sum count not rational");
    Integer total = coef[0] - coef[1];
    if (total % ps != 0) throw std::logic_error("Gauss sum count not integral");
    return total / ps;
}

SmallForm reduce_form(const QuadLattice& L) {
    const long p = L.p;
    SmallForm f;
    f.n = L.rank();
    f.q.resize(f.n);
    f.b.assign(f.n, Vec(f.n, 0));
    for (int i = 0; i < f.n; ++i) {
        f.q[i] = static_cast<long>(residue_mod(L.q(i), p, p));
        for (int j = 0; j < f.n; ++j) f.b[i][j] = static_cast<long>(residue_mod(L.b(i, j), p, p));
    }
    return f;
}

// Gram data of the span of `basis` inside `form`.
SmallForm restrict_form(const SmallForm& form, const std::vector<Vec>& basis, long p) {
    SmallForm g;
    g.n = static_cast<int>(basis.size());
    g.q.resize(g.n);
    g.b.assign(g.n, Vec(g.n, 0));
    for (int i = 0; i < g.n; ++i) {
        g.q[i] = form.qv(basis[i], p);
        for (int j = 0; j < g.n; ++j) g.b[i][j] = form.bv(basis[i], basis[j], p);
    }
    return g;
}

// All subspaces of F_p^k as lists of coordinate vectors (RREF enumeration).
void subspaces(int k, long p, std::vector<std::vector<Vec>>& out) {
    for (int mask = 0; mask < (1 << k); ++mask) {
        std::vector<int> piv;
        for (int c = 0; c < k; ++c)
            if (mask >> c & 1) piv.push_back(c);
        int j = static_cast<int>(piv.size());
        // free entries: row i, column c > piv[i], c not a pivot column
        std::vector<std::pair<int, int>> free;
        for (int i = 0; i < j; ++i)
            for (int c = piv[i] + 1; c < k; ++c)
                if (!(mask >> c & 1)) free.emplace_back(i, c);
        std::vector<long> val(free.size(), 0);
        while (true) {
            std::vector<Vec> rows(j, Vec(k, 0));
            for (int i = 0; i < j; ++i) rows[i][piv[i]] = 1;
            for (std::size_t f = 0; f < free.size(); ++f) rows[free[f].first][free[f].second] = val[f];
            out.push_back(rows);
            std::size_t f = 0;
            while (f < free.size() && ++val[f] == p) val[f++] = 0;
            if (f == free.size()) break;
        }
    }
}

Integer injective_count(const SmallForm& form, long p, int m, int eta_det) {
    const int n = form.n;
    // quadratic radical: bilinear radical intersected with q = 0 (q is linear there)
    std::vector<Vec> rad = nullspace(form.b, n, p);
    std::vector<Vec> K;
    if (p == 2) {
        Mat qrow(1, Vec(rad.size()));
        for (std::size_t i = 0; i < rad.size(); ++i) qrow[0][i] = form.qv(rad[i], p);
        for (const auto& c : nullspace(qrow, static_cast<int>(rad.size()), p)) {
            Vec v(n, 0);
            for (std::size_t i = 0; i < rad.size(); ++i)
                for (int t = 0; t < n; ++t) v[t] = (v[t] + c[i] * rad[i][t]) % p;
            K.push_back(v);
        }
    } else {
        K = rad;
    }
    const int k0 = static_cast<int>(K.size());
    std::vector<std::vector<Vec>> subs;
    subspaces(k0, p, subs);
    Integer total = 0;
    for (const auto& rows : subs) {
        const int j = static_cast<int>(rows.size());
        std::vector<Vec> span;
        for (const auto& r : rows) {
            Vec v(n, 0);
            for (int i = 0; i < k0; ++i)
                for (int t = 0; t < n; ++t) v[t] = (v[t] + r[i] * K[i][t]) % p;
            span.push_back(v);
        }
        // complement by standard vectors
        std::vector<Vec> comp;
        for (int e = 0; e < n && static_cast<int>(span.size() + comp.size()) < n; ++e) {
            Vec v(n, 0);
            v[e] = 1;
            Mat trial = span;
            trial.insert(trial.end(), comp.begin(), comp.end());
            trial.push_back(v);
            if (rank_of(trial, n, p) == static_cast<int>(trial.size())) comp.push_back(v);
        }
        Integer term = all_count(restrict_form(form, comp, p), p, m, eta_det);
        Integer w = ipow(p, static_cast<unsigned long>(j * (j - 1) / 2));
        if (j % 2)
            total -= w * term;
        else
            total += w * term;
    }
    return total;
}

int eta_det_target(const QuadLattice& M) {
    if (M.p == 2) return 1;
    return quad_residue_symbol(M.det_T(), M.p);
}

// Column operations Q (over Z_(p)) and exponents s with B Q = P^{-1} diag(p^{s_i} units).
void local_smith(const Matrix& B0, long p, Matrix& Q, std::vector<long>& s) {
    int n = static_cast<int>(B0.size());
    Matrix B = B0;
    Q.assign(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) Q[i][i] = 1;
    s.assign(n, 0);
    for (int k = 0; k < n; ++k) {
        int bi = -1, bj = -1;
        long best = 0;
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j) {
                if (B[i][j] == 0) continue;
                long v = valuation(B[i][j], p).value;
                if (bi < 0 || v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) throw DomainError("degenerate Gram matrix");
        std::swap(B[bi], B[k]);
        for (int r = 0; r < n; ++r) {
            std::swap(B[r][bj], B[r][k]);
            std::swap(Q[r][bj], Q[r][k]);
        }
        s[k] = best;
        for (int r = k + 1; r < n; ++r) {
            if (B[r][k] == 0) continue;
            Rational f = B[r][k] / B[k][k];
            for (int c = k; c < n; ++c) B[r][c] -= f * B[k][c];
        }
        for (int c = k + 1; c < n; ++c) {
            if (B[k][c] == 0) continue;
            Rational f = B[k][c] / B[k][k];
            for (int r = 0; r < n; ++r) B[r][c] -= f * B[r][k];
            for (int r = 0; r < n; ++r) Q[r][c] -= f * Q[r][k];
        }
    }
}

bool upper_inverse_integral(const Matrix& R, long p) {
    int n = static_cast<int>(R.size());
    // Solve R S = I by back substitution; S upper triangular.
    Matrix S(n, std::vector<Rational>(n, Rational(0)));
    for (int c = 0; c < n; ++c) {
        for (int i = c; i >= 0; --i) {
            Rational acc = (i == c) ? Rational(1) : Rational(0);
            for (int k = i + 1; k <= c; ++k) acc -= R[i][k] * S[k][c];
            S[i][c] = acc / R[i][i];
            if (!is_p_integral(S[i][c], p)) return false;
        }
    }
    return true;
}

}  // namespace

bool saturation_applies(const QuadLattice& M, const QuadLattice& L) {
    if (L.rank() > 3 || M.p != L.p || !L.integral()) return false;
    if (L.rank() > 0 && L.det_b() == 0) return false;
    if (M.p == 2) return M.rank() == 0 || is_split_even_unimodular(M);
    return is_unimodular(M);
}

Integer injective_count_mod_p(const QuadLattice& M, const QuadLattice& L) {
    if (!saturation_applies(M, L)) throw DomainError("injective count needs a unimodular target");
    return injective_count(reduce_form(L), L.p, M.rank(), eta_det_target(M));
}

Rational saturation_density(const QuadLattice& M, const QuadLattice& L, bool primitive) {
    if (!saturation_applies(M, L)) throw DomainError("saturation engine needs a unimodular target");
    const long p = L.p;
    const int n = L.rank(), m = M.rank();
    if (n == 0) return 1;
    const int eta = eta_det_target(M);
    const Rational norm = rpow(p, -rep_dimension(m, n));
    if (primitive) return Rational(injective_count(reduce_form(L), p, m, eta)) * norm;

    Matrix Q;
    std::vector<long> s;
    local_smith(L.moment(), p, Q, s);
    const long val = valuation(L.det_b(), p).value;
    const long fmax = val / 2;

    Rational total = 0;
    std::vector<long> f(n, 0);
    // enumerate exponent vectors with f_i <= s_i and sum <= fmax
    std::function<void(int, long)> rec_f = [&](int i, long used) {
        if (i == n) {
            // off-diagonal entries c_ij in p^{-min(s_j, f_i+..+f_j)} Z_p / p^{-f_j} Z_p
            std::vector<std::pair<int, int>> pos;
            std::vector<long> lo, cnt;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    long F = 0;
                    for (int t = a; t <= b; ++t) F += f[t];
                    long e = std::min<long>(s[b], F);
                    if (e <= f[b]) continue;
                    pos.emplace_back(a, b);
                    lo.push_back(e);
                    cnt.push_back(static_cast<long>(ipow_u64(p, static_cast<int>(e - f[b]))));
                }
            std::vector<long> idx(pos.size(), 0);
            while (true) {
                Matrix R(n, std::vector<Rational>(n, Rational(0)));
                for (int a = 0; a < n; ++a) R[a][a] = rpow(p, -f[a]);
                for (std::size_t t = 0; t < pos.size(); ++t)
                    R[pos[t].first][pos[t].second] = Rational(idx[t]) * rpow(p, -lo[t]);
                if (upper_inverse_integral(R, p)) {
                    // basis of L' in L-coordinates: columns Q R^T
                    Matrix C(n, std::vector<Rational>(n, Rational(0)));
                    for (int r = 0; r < n; ++r)
                        for (int c = 0; c < n; ++c)
                            for (int k = 0; k < n; ++k) C[r][c] += Q[r][k] * R[c][k];
                    QuadLattice Lp = change_basis(L, C);
                    if (Lp.integral()) {
                        long sumf = 0;
                        for (long x : f) sumf += x;
                        Rational weight = rpow(p, sumf * (n + 1 - m));
                        total += weight * Rational(injective_count(reduce_form(Lp), p, m, eta)) * norm;
                    }
                }
                std::size_t t = 0;
                while (t < idx.size() && ++idx[t] == cnt[t]) idx[t++] = 0;
                if (t == idx.size()) break;
            }
            return;
        }
        for (long v = 0; v <= s[i] && used + v <= fmax; ++v) {
            f[i] = v;
            rec_f(i + 1, used + v);
        }
        f[i] = 0;
    };
    rec_f(0, 0);
    return total;
}

}  // namespace swb::detail

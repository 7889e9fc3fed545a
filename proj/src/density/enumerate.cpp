#include "engines.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace swb::detail {

long double enumerate_work(int m, int n, std::uint64_t P) {
    return std::pow(static_cast<long double>(P), static_cast<long double>(m) * n);
}

namespace {

struct Setup {
    int m = 0, n = 0;
    long p = 0;
    std::uint64_t P = 0;     // q-values live mod P
    std::uint64_t bmod = 0;  // bilinear values live mod bmod (P, or 2P for convention B)
    ResidueGram gq;          // target Gram mod P
    ResidueGram gb;          // target Gram mod bmod
    std::vector<std::uint64_t> tq;  // source q-values mod P
    std::vector<std::uint64_t> tb;  // source bilinear values mod bmod, n x n
    std::vector<std::vector<std::uint32_t>> cand;  // per source index: flat list of vectors (m entries each)
    bool fast = false;  // kernel precondition
    bool primitive = false;
};

std::uint64_t q_value(const Setup& s, const std::uint32_t* y) {
    std::uint64_t acc = 0;
    const std::uint64_t P = s.P;
    for (int k = 0; k < s.m; ++k) {
        if (!y[k]) continue;
        acc = (acc + s.gq.q[k] * y[k] % P * y[k]) % P;
        for (int l = k + 1; l < s.m; ++l) acc = (acc + s.gq.bil(k, l) * y[k] % P * y[l]) % P;
    }
    return acc;
}

// (x, e_l) mod bmod for each l
void functional(const Setup& s, const std::uint32_t* x, std::uint64_t* out) {
    for (int l = 0; l < s.m; ++l) {
        std::uint64_t acc = 0;
        for (int k = 0; k < s.m; ++k) acc = (acc + s.gb.bil(k, l) * x[k]) % s.bmod;
        out[l] = acc;
    }
}

std::uint64_t dot(const Setup& s, const std::uint64_t* f, const std::uint32_t* y) {
    std::uint64_t acc = 0;
    for (int l = 0; l < s.m; ++l) acc = (acc + f[l] * y[l]) % s.bmod;
    return acc;
}

int rank_mod_p(std::vector<std::vector<long>> a, long p) {
    int rows = static_cast<int>(a.size());
    int cols = rows ? static_cast<int>(a[0].size()) : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] % p) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[r]);
        long inv = 1;
        for (long t = 1; t < p; ++t)
            if ((a[r][c] * t) % p == 1) inv = t;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] % p == 0) continue;
            long f = (a[i][c] * inv) % p;
            for (int k = c; k < cols; ++k) a[i][k] = ((a[i][k] - f * a[r][k]) % p + p) % p;
        }
        ++r;
    }
    return r;
}

bool full_rank(const Setup& s, const std::vector<const std::uint32_t*>& xs) {
    std::vector<std::vector<long>> a(s.n, std::vector<long>(s.m));
    for (int i = 0; i < s.n; ++i)
        for (int l = 0; l < s.m; ++l) a[i][l] = static_cast<long>(xs[i][l] % s.p);
    return rank_mod_p(a, s.p) == s.n;
}

// Counts completions of the prefix xs[0..depth) to a full representation.
std::uint64_t extend(const Setup& s, std::vector<const std::uint32_t*>& xs, std::vector<std::uint64_t>& funcs,
                     int depth, const CandidateSoA* last_soa) {
    const int m = s.m;
    if (depth == s.n - 1 && !s.primitive && s.fast && last_soa) {
        std::vector<std::uint32_t> w(static_cast<std::size_t>(depth) * m), t(depth);
        for (int c = 0; c < depth; ++c) {
            for (int l = 0; l < m; ++l) w[c * m + l] = static_cast<std::uint32_t>(funcs[c * m + l]);
            t[c] = static_cast<std::uint32_t>(s.tb[c * s.n + depth]);
        }
        return count_matches(*last_soa, w.data(), t.data(), depth, make_modulus(static_cast<std::uint32_t>(s.bmod)));
    }
    const auto& list = s.cand[depth];
    std::size_t count = list.size() / m;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t* y = list.data() + i * m;
        bool ok = true;
        for (int c = 0; c < depth && ok; ++c) ok = dot(s, funcs.data() + c * m, y) == s.tb[c * s.n + depth];
        if (!ok) continue;
        xs[depth] = y;
        if (depth + 1 == s.n) {
            total += s.primitive ? full_rank(s, xs) : 1;
            continue;
        }
        functional(s, y, funcs.data() + depth * m);
        total += extend(s, xs, funcs, depth + 1, last_soa);
    }
    return total;
}

}  // namespace

Integer enumerate_count(const QuadLattice& M, const QuadLattice& L, int d, bool primitive, Convention conv,
                        std::uint64_t budget, int jobs) {
    if (M.p != L.p) throw DomainError("count_reps: mismatched primes");
    if (d < 1) throw DomainError("count_reps: precision must be >= 1");
    Setup s;
    s.m = M.rank();
    s.n = L.rank();
    s.p = M.p;
    s.primitive = primitive;
    if (s.n == 0) return 1;
    if (primitive && s.n > s.m) return 0;
    s.P = ipow_u64(s.p, d);
    if (s.P >= (std::uint64_t(1) << 31)) throw BudgetExceeded("modulus too large for enumeration", 0);
    long double work = enumerate_work(s.m, s.n, s.P);
    if (work > static_cast<long double>(budget))
        throw BudgetExceeded("enumeration needs about " + std::to_string(static_cast<double>(work)) +
                                 " evaluations, budget " + std::to_string(budget),
                             work);
    s.bmod = (conv == Convention::B && s.p == 2) ? 2 * s.P : s.P;
    s.gq = residue_gram(M, s.P);
    s.gb = residue_gram(M, s.bmod);
    if (!M.integral() || !L.integral()) throw DomainError("count_reps: lattices must be integral");
    s.tq.resize(s.n);
    s.tb.resize(static_cast<std::size_t>(s.n) * s.n);
    for (int i = 0; i < s.n; ++i) {
        s.tq[i] = residue_mod(L.q(i), s.p, s.P);
        for (int j = 0; j < s.n; ++j) s.tb[i * s.n + j] = residue_mod(L.b(i, j), s.p, s.bmod);
    }
    s.fast = static_cast<long double>(s.m) * s.bmod * s.bmod + s.bmod < 4294967296.0L;

    // Candidate lists by required q-value.
    s.cand.resize(s.n);
    std::vector<std::uint32_t> y(s.m, 0);
    while (true) {
        std::uint64_t qv = q_value(s, y.data());
        for (int i = 0; i < s.n; ++i)
            if (qv == s.tq[i]) s.cand[i].insert(s.cand[i].end(), y.begin(), y.end());
        int k = 0;
        while (k < s.m && ++y[k] == s.P) y[k++] = 0;
        if (k == s.m) break;
    }

    CandidateSoA soa;
    const CandidateSoA* soa_ptr = nullptr;
    if (s.n >= 2 && !primitive && s.fast) {
        const auto& last = s.cand[s.n - 1];
        soa.m = s.m;
        soa.count = last.size() / s.m;
        soa.stride = (soa.count + 7) & ~std::size_t(7);
        soa.coord.assign(static_cast<std::size_t>(s.m) * soa.stride, 0);
        for (std::size_t i = 0; i < soa.count; ++i)
            for (int l = 0; l < s.m; ++l) soa.coord[l * soa.stride + i] = last[i * s.m + l];
        soa_ptr = &soa;
    }

    if (s.n == 1) {
        const auto& list = s.cand[0];
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < list.size() / s.m; ++i) {
            if (!primitive) {
                ++total;
                continue;
            }
            bool nz = false;
            for (int l = 0; l < s.m; ++l) nz = nz || (list[i * s.m + l] % s.p) != 0;
            total += nz;
        }
        return Integer(std::to_string(total));
    }

    // Shard the outermost vector across workers.
    const auto& first = s.cand[0];
    const std::size_t n_first = first.size() / s.m;
    int workers = std::max(1, jobs);
    std::vector<std::uint64_t> partial(workers, 0);
    std::atomic<std::size_t> next{0};
    auto work_fn = [&](int wid) {
        std::vector<const std::uint32_t*> xs(s.n, nullptr);
        std::vector<std::uint64_t> funcs(static_cast<std::size_t>(s.n) * s.m, 0);
        std::uint64_t acc = 0;
        for (std::size_t i = next++; i < n_first; i = next++) {
            xs[0] = first.data() + i * s.m;
            functional(s, xs[0], funcs.data());
            acc += extend(s, xs, funcs, 1, soa_ptr);
        }
        partial[wid] = acc;
    };
    if (workers == 1) {
        work_fn(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work_fn, w);
        for (auto& th : pool) th.join();
    }
    Integer total = 0;
    for (auto v : partial) total += Integer(std::to_string(v));
    return total;
}

}  // namespace swb::detail

#include "engines.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace swb::detail {

namespace {

// Orbits of Z/p^d under multiplication by squares of units. Every block histogram is
// constant on these orbits, so convolutions only need the orbit structure constants.
struct ClassTable {
    long p = 0;
    int d = 0;
    std::uint64_t P = 0;
    int ncls = 0;
    std::vector<std::uint16_t> cls;   // class of each residue
    std::vector<std::uint64_t> rep;   // a representative per class
    std::vector<std::uint64_t> c;     // c[(i * ncls + j) * ncls + k] = #{x in C_i : rep_k - x in C_j}

    std::uint64_t at(int i, int j, int k) const { return c[(static_cast<std::size_t>(i) * ncls + j) * ncls + k]; }
};

int class_key(long p, int d, std::uint64_t z, std::uint64_t P) {
    if (z == 0) return 0;
    int v = 0;
    while (z % p == 0) {
        z /= p;
        ++v;
    }
    if (p == 2) {
        int width = d - v >= 3 ? 8 : (1 << (d - v));
        int u = static_cast<int>(z % width);
        return 1 + v * 8 + u;  // sparse key; compacted later
    }
    std::uint64_t u = z % p;
    std::uint64_t e = 1, base = u;
    std::uint64_t ex = (p - 1) / 2;
    while (ex) {
        if (ex & 1) e = e * base % p;
        base = base * base % p;
        ex >>= 1;
    }
    (void)P;
    return 1 + 2 * v + (e == 1 ? 0 : 1);
}

std::shared_ptr<const ClassTable> class_table(long p, int d) {
    static std::mutex mu;
    static std::map<std::pair<long, int>, std::shared_ptr<const ClassTable>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({p, d});
        if (it != cache.end()) return it->second;
    }
    auto t = std::make_shared<ClassTable>();
    t->p = p;
    t->d = d;
    t->P = ipow_u64(p, d);
    t->cls.resize(t->P);
    std::map<int, int> compact;
    for (std::uint64_t z = 0; z < t->P; ++z) {
        int key = class_key(p, d, z, t->P);
        auto it = compact.find(key);
        if (it == compact.end()) {
            it = compact.emplace(key, static_cast<int>(t->rep.size())).first;
            t->rep.push_back(z);
        }
        t->cls[z] = static_cast<std::uint16_t>(it->second);
    }
    t->ncls = static_cast<int>(t->rep.size());
    const int nc = t->ncls;
    t->c.assign(static_cast<std::size_t>(nc) * nc * nc, 0);
    for (int k = 0; k < nc; ++k) {
        std::uint64_t z = t->rep[k];
        for (std::uint64_t x = 0; x < t->P; ++x) {
            std::uint64_t y = (z + t->P - x) % t->P;
            ++t->c[(static_cast<std::size_t>(t->cls[x]) * nc + t->cls[y]) * nc + k];
        }
    }
    std::lock_guard<std::mutex> lock(mu);
    cache[{p, d}] = t;
    return t;
}

using ClassVec = std::vector<Integer>;

ClassVec compress(const ClassTable& t, const std::vector<std::uint64_t>& h) {
    ClassVec v(t.ncls);
    for (int k = 0; k < t.ncls; ++k) v[k] = Integer(std::to_string(h[t.rep[k]]));
    return v;
}

ClassVec convolve(const ClassTable& t, const ClassVec& a, const ClassVec& b) {
    ClassVec out(t.ncls, Integer(0));
    for (int i = 0; i < t.ncls; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < t.ncls; ++j) {
            if (b[j] == 0) continue;
            Integer ab = a[i] * b[j];
            for (int k = 0; k < t.ncls; ++k) {
                std::uint64_t c = t.at(i, j, k);
                if (c) out[k] += ab * Integer(std::to_string(c));
            }
        }
    }
    return out;
}

// Histogram of q over the block (or over p times the block when `zero` is set).
std::vector<std::uint64_t> block_histogram(const JordanBlock& blk, long p, std::uint64_t P, bool zero) {
    std::vector<std::uint64_t> h(P, 0);
    const std::uint64_t step = zero ? static_cast<std::uint64_t>(p) : 1;
    const std::uint64_t a = residue_mod(blk.a, p, P);
    if (blk.size == 1) {
        for (std::uint64_t x = 0; x < P; x += step) ++h[a * (x * x % P) % P];
        return h;
    }
    const std::uint64_t b = residue_mod(blk.b, p, P);
    const std::uint64_t c = residue_mod(blk.c, p, P);
    for (std::uint64_t x = 0; x < P; x += step) {
        std::uint64_t ax2 = a * (x * x % P) % P;
        std::uint64_t cx = c * x % P;
        for (std::uint64_t y = 0; y < P; y += step) ++h[(ax2 + (cx * y + b * (y * y % P)) % P) % P];
    }
    return h;
}

}  // namespace

long double histogram_work(const QuadLattice& M, int d) {
    long double P = static_cast<long double>(ipow_u64(M.p, d));
    long double w = P * (2 * d + 9);
    if (M.rank() == 0) return w;
    for (const auto& blk : jordan_blocks(M)) w += blk.size == 1 ? P : P * P;
    return w;
}

Integer histogram_count(const QuadLattice& M, const Rational& a, int d, bool primitive, std::uint64_t budget) {
    const long p = M.p;
    if (d < 1) throw DomainError("count_reps: precision must be >= 1");
    if (!is_p_integral(a, p) || !M.integral()) throw DomainError("count_reps: lattices must be integral");
    long double work = histogram_work(M, d);
    if (work > static_cast<long double>(budget))
        throw BudgetExceeded("histogram needs about " + std::to_string(static_cast<double>(work)) + " evaluations",
                             work);
    const std::uint64_t P = ipow_u64(p, d);
    const std::uint64_t target = residue_mod(a, p, P);
    if (M.rank() == 0) return (target == 0 && !primitive) ? 1 : 0;
    auto table = class_table(p, d);
    const ClassTable& t = *table;
    ClassVec all, zero;
    bool first = true;
    for (const auto& blk : jordan_blocks(M)) {
        ClassVec ha = compress(t, block_histogram(blk, p, P, false));
        ClassVec hz = primitive ? compress(t, block_histogram(blk, p, P, true)) : ClassVec();
        if (first) {
            all = std::move(ha);
            zero = std::move(hz);
            first = false;
        } else {
            all = convolve(t, all, ha);
            if (primitive) zero = convolve(t, zero, hz);
        }
    }
    int k = t.cls[target];
    return primitive ? Integer(all[k] - zero[k]) : all[k];
}

}  // namespace swb::detail

#include "engines.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace swb::detail {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::array<u64, 3> kPrimes = {998244353ULL, 167772161ULL, 469762049ULL};
constexpr u64 kRoot = 3;

u64 pow_mod(u64 b, u64 e, u64 m) {
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = static_cast<u64>(static_cast<u128>(r) * b % m);
        b = static_cast<u64>(static_cast<u128>(b) * b % m);
        e >>= 1;
    }
    return r;
}

void ntt(std::vector<u64>& a, u64 mod, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        u64 w = pow_mod(kRoot, (mod - 1) / len, mod);
        if (inverse) w = pow_mod(w, mod - 2, mod);
        for (std::size_t i = 0; i < n; i += len) {
            u64 wn = 1;
            for (std::size_t k = 0; k < len / 2; ++k) {
                u64 u = a[i + k];
                u64 v = a[i + k + len / 2] * wn % mod;
                a[i + k] = u + v < mod ? u + v : u + v - mod;
                a[i + k + len / 2] = u >= v ? u - v : u + mod - v;
                wn = wn * w % mod;
            }
        }
    }
    if (inverse) {
        u64 inv = pow_mod(n, mod - 2, mod);
        for (auto& x : a) x = x * inv % mod;
    }
}

// Cyclic transform of a P x P x P cube along every axis.
void ntt3(std::vector<u64>& cube, std::size_t P, u64 mod, bool inverse) {
    std::vector<u64> line(P);
    const std::size_t strides[3] = {P * P, P, 1};
    for (int axis = 0; axis < 3; ++axis) {
        const std::size_t st = strides[axis];
        for (std::size_t base = 0; base < P * P * P; ++base) {
            if ((base / st) % P != 0) continue;
            for (std::size_t k = 0; k < P; ++k) line[k] = cube[base + k * st];
            ntt(line, mod, inverse);
            for (std::size_t k = 0; k < P; ++k) cube[base + k * st] = line[k];
        }
    }
}

using Hist3 = std::vector<u64>;  // index (q1 * P + q2) * P + b12

std::shared_ptr<const Hist3> block_hist(const JordanBlock& blk, int d) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, u64, u64, u64>, std::shared_ptr<const Hist3>> cache;
    const u64 P = u64(1) << d;
    const u64 a = residue_mod(blk.a, 2, P);
    const u64 b = blk.size == 2 ? residue_mod(blk.b, 2, P) : 0;
    const u64 c = blk.size == 2 ? residue_mod(blk.c, 2, P) : 0;
    auto key = std::make_tuple(d, blk.size, a, b, c);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const u64 mask = P - 1;
    auto h = std::make_shared<Hist3>(P * P * P, 0);
    Hist3& H = *h;
    if (blk.size == 1) {
        for (u64 x = 0; x < P; ++x)
            for (u64 y = 0; y < P; ++y) {
                u64 q1 = a * x * x & mask, q2 = a * y * y & mask, bb = 2 * a * x * y & mask;
                ++H[(q1 * P + q2) * P + bb];
            }
    } else {
        std::vector<u64> qtab(P * P);
        for (u64 s = 0; s < P; ++s)
            for (u64 t = 0; t < P; ++t) qtab[s * P + t] = (a * s * s + c * s * t + b * t * t) & mask;
        for (u64 s1 = 0; s1 < P; ++s1)
            for (u64 t1 = 0; t1 < P; ++t1) {
                const u64 q1 = qtab[s1 * P + t1];
                const u64 al = (2 * a * s1 + c * t1) & mask;
                const u64 be = (c * s1 + 2 * b * t1) & mask;
                u64* row = H.data() + q1 * P * P;
                for (u64 s2 = 0; s2 < P; ++s2) {
                    const u64 base = al * s2;
                    const u64* qrow = qtab.data() + s2 * P;
                    for (u64 t2 = 0; t2 < P; ++t2) ++row[qrow[t2] * P + ((base + be * t2) & mask)];
                }
            }
    }
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = h;
    return h;
}

}  // namespace

long double gram_work(const QuadLattice& M, int d) {
    long double P = static_cast<long double>(u64(1) << d);
    long double w = 0;
    int blocks = 0;
    for (const auto& blk : jordan_blocks(M)) {
        w += blk.size == 1 ? P * P : P * P * P * P;
        ++blocks;
    }
    if (blocks > 1) w += 3.0L * (blocks + 1) * P * P * P * (3 * d);
    return w;
}

Integer gram_count(const QuadLattice& M, const QuadLattice& L, int d, std::uint64_t budget) {
    if (M.p != 2 || L.p != 2 || L.rank() != 2) throw DomainError("gram engine needs p = 2 and a rank-2 source");
    if (!M.integral() || !L.integral()) throw DomainError("count_reps: lattices must be integral");
    if (d < 1 || d > 10) throw DomainError("gram engine precision out of range");
    long double work = gram_work(M, d);
    if (work > static_cast<long double>(budget))
        throw BudgetExceeded("gram engine needs about " + std::to_string(static_cast<double>(work)) + " evaluations",
                             work);
    const u64 P = u64(1) << d;
    const u64 tq1 = residue_mod(L.q(0), 2, P), tq2 = residue_mod(L.q(1), 2, P), tb = residue_mod(L.b(0, 1), 2, P);
    const std::size_t T = (tq1 * P + tq2) * P + tb;
    if (M.rank() == 0) return (tq1 == 0 && tq2 == 0 && tb == 0) ? 1 : 0;
    auto blocks = jordan_blocks(M);
    if (blocks.size() == 1) return Integer(std::to_string((*block_hist(blocks[0], d))[T]));
    // total mass P^{2m} must fit below the CRT modulus
    if (2L * M.rank() * d > 86) throw BudgetExceeded("gram engine counts exceed the CRT range", work);
    std::array<u64, 3> residues{};
    for (int k = 0; k < 3; ++k) {
        const u64 mod = kPrimes[k];
        std::vector<u64> acc;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const Hist3& h = *block_hist(blocks[i], d);
            std::vector<u64> f(h.size());
            for (std::size_t j = 0; j < h.size(); ++j) f[j] = h[j] % mod;
            ntt3(f, P, mod, false);
            if (i == 0) {
                acc = std::move(f);
            } else {
                for (std::size_t j = 0; j < acc.size(); ++j) acc[j] = acc[j] * f[j] % mod;
            }
        }
        ntt3(acc, P, mod, true);
        residues[k] = acc[T];
    }
    // Garner reconstruction
    const u64 m0 = kPrimes[0], m1 = kPrimes[1], m2 = kPrimes[2];
    u64 x0 = residues[0];
    u64 x1 = (residues[1] + m1 - x0 % m1) % m1 * pow_mod(m0 % m1, m1 - 2, m1) % m1;
    u128 partial = static_cast<u128>(x0) + static_cast<u128>(x1) * m0;
    u64 pm2 = static_cast<u64>(partial % m2);
    u64 x2 = (residues[2] + m2 - pm2) % m2 * pow_mod(static_cast<u64>(static_cast<u128>(m0) * m1 % m2), m2 - 2, m2) % m2;
    u128 value = partial + static_cast<u128>(x2) * m0 * m1;
    Integer hi(static_cast<unsigned long>(value >> 64)), lo(static_cast<unsigned long>(value & ~u64(0)));
    Integer r = hi;
    r <<= 64;
    r += lo;
    return r;
}

}  // namespace swb::detail

#include "engines.hpp"

#include <immintrin.h>

namespace swb::detail {

bool avx2_available() {
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
}

std::uint64_t count_matches_avx2(const CandidateSoA& cand, const std::uint32_t* w, const std::uint32_t* t, int nc,
                                 const KernelModulus& km) {
    const int m = cand.m;
    const std::size_t full = cand.count & ~std::size_t(7);
    std::uint64_t hits = 0;
    const __m256i mask = _mm256_set1_epi32(static_cast<int>(km.mask));
    const __m256i inv = _mm256_set1_epi32(static_cast<int>(km.inv));
    const __m256i limit = _mm256_set1_epi32(static_cast<int>(km.limit));
    const __m256i zero = _mm256_setzero_si256();
    for (std::size_t i = 0; i < full; i += 8) {
        __m256i acc = _mm256_set1_epi32(-1);
        for (int c = 0; c < nc; ++c) {
            __m256i dot = zero;
            for (int l = 0; l < m; ++l) {
                __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(cand.column(l) + i));
                dot = _mm256_add_epi32(dot, _mm256_mullo_epi32(y, _mm256_set1_epi32(static_cast<int>(w[c * m + l]))));
            }
            __m256i ok;
            if (km.pow2) {
                __m256i diff = _mm256_and_si256(_mm256_sub_epi32(dot, _mm256_set1_epi32(static_cast<int>(t[c]))), mask);
                ok = _mm256_cmpeq_epi32(diff, zero);
            } else {
                __m256i v = _mm256_add_epi32(dot, _mm256_set1_epi32(static_cast<int>(km.mod - t[c])));
                __m256i prod = _mm256_mullo_epi32(v, inv);
                ok = _mm256_cmpeq_epi32(_mm256_min_epu32(prod, limit), prod);
            }
            acc = _mm256_and_si256(acc, ok);
        }
        hits += static_cast<std::uint64_t>(__builtin_popcount(_mm256_movemask_ps(_mm256_castsi256_ps(acc))));
    }
    if (full < cand.count) {
        CandidateSoA tail;
        tail.m = m;
        tail.count = cand.count - full;
        tail.stride = tail.count;
        tail.coord.resize(static_cast<std::size_t>(m) * tail.count);
        for (int l = 0; l < m; ++l)
            for (std::size_t i = 0; i < tail.count; ++i) tail.coord[l * tail.count + i] = cand.column(l)[full + i];
        hits += count_matches_scalar(tail, w, t, nc, km);
    }
    return hits;
}

}  // namespace swb::detail

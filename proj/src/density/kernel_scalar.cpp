#include "engines.hpp"

#include <atomic>

namespace swb::detail {

namespace {
std::atomic<int> g_override{0};
}

void set_kernel_override(int mode) { g_override.store(mode); }
int kernel_override() { return g_override.load(); }

std::uint64_t count_matches_scalar(const CandidateSoA& cand, const std::uint32_t* w, const std::uint32_t* t, int nc,
                                   const KernelModulus& km) {
    std::uint64_t hits = 0;
    const int m = cand.m;
    for (std::size_t i = 0; i < cand.count; ++i) {
        bool ok = true;
        for (int c = 0; c < nc && ok; ++c) {
            std::uint32_t dot = 0;
            for (int l = 0; l < m; ++l) dot += w[c * m + l] * cand.column(l)[i];
            if (km.pow2) {
                ok = ((dot - t[c]) & km.mask) == 0;
            } else {
                std::uint32_t v = dot + (km.mod - t[c]);
                ok = v * km.inv <= km.limit;
            }
        }
        hits += ok;
    }
    return hits;
}

std::uint64_t count_matches(const CandidateSoA& cand, const std::uint32_t* w, const std::uint32_t* t, int nc,
                            const KernelModulus& km) {
    int mode = kernel_override();
    if (mode == 1) return count_matches_scalar(cand, w, t, nc, km);
    if (mode == 2 || avx2_available()) return count_matches_avx2(cand, w, t, nc, km);
    return count_matches_scalar(cand, w, t, nc, km);
}

}  // namespace swb::detail

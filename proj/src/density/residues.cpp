#include "engines.hpp"

namespace swb::detail {

std::uint64_t ipow_u64(std::uint64_t p, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

ResidueGram residue_gram(const QuadLattice& L, std::uint64_t mod) {
    ResidueGram g;
    g.m = L.rank();
    g.mod = mod;
    g.q.resize(g.m);
    g.b.resize(static_cast<std::size_t>(g.m) * g.m);
    for (int i = 0; i < g.m; ++i) {
        g.q[i] = residue_mod(L.q(i), L.p, mod);
        for (int j = 0; j < g.m; ++j) g.b[i * g.m + j] = residue_mod(L.b(i, j), L.p, mod);
    }
    return g;
}

KernelModulus make_modulus(std::uint32_t mod) {
    KernelModulus km;
    km.mod = mod;
    km.pow2 = (mod & (mod - 1)) == 0;
    if (km.pow2) {
        km.mask = mod - 1;
        return km;
    }
    // Newton iteration for the inverse modulo 2^32; mod is odd.
    std::uint32_t inv = mod;
    for (int i = 0; i < 5; ++i) inv *= 2u - mod * inv;
    km.inv = inv;
    km.limit = 0xFFFFFFFFu / mod;
    return km;
}

}  // namespace swb::detail

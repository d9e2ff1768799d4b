#pragma once

#include "twistk/cocycle.hpp"
#include "twistk/group.hpp"

#include <utility>
#include <vector>

namespace twistk {

// Central extension G_alpha: elements (g, sigma^j) for j in Z/n, encoded as
// index j*|G| + g, multiplying by (g,s^j)(h,s^k) = (gh, s^(j+k+alpha(g,h))).
// Index 0 is the identity and the section g -> (g, s^0) is the identity on
// indices, which downstream code leans on.
struct CentralExtension {
    GroupPtr base;
    GroupPtr total;
    long n = 1;
    int central_gen = 0; // index of (1, sigma); 0 when n = 1

    int project(int idx) const { return idx % base->order(); }
    int section(int g) const { return g; }
    int kernel_power(int idx) const { return idx / base->order(); }
    int index_of(int g, long j) const {
        return static_cast<int>(mod_pos(j, n)) * base->order() + g;
    }
};

inline CentralExtension central_extension(const GroupPtr& g, const CocycleTable& alpha) {
    if (!same_group(g, alpha.group)) fail("GroupMismatch", "central_extension: wrong group");
    validate_cocycle(alpha);
    const int m = g->order();
    const long n = alpha.modulus;
    const int total = static_cast<int>(n) * m;
    std::vector<std::vector<int>> table(total, std::vector<int>(total));
    for (int idx1 = 0; idx1 < total; ++idx1) {
        int g1 = idx1 % m;
        long j1 = idx1 / m;
        for (int idx2 = 0; idx2 < total; ++idx2) {
            int g2 = idx2 % m;
            long j2 = idx2 / m;
            long j = mod_pos(j1 + j2 + alpha.entries[g1][g2], n);
            table[idx1][idx2] = static_cast<int>(j) * m + g->mul(g1, g2);
        }
    }
    CentralExtension out;
    out.base = g;
    out.total = std::make_shared<GroupTable>(std::move(table));
    out.n = n;
    out.central_gen = (n > 1) ? m : 0;
    return out;
}

// G_{alpha (+) beta}: elements (g, a, b), encoded (a*nb + b)*|G| + g, carrying
// both twists at once. p_sum lands in the extension by add_cocycles(alpha,beta).
struct DoubleExtension {
    GroupPtr base;
    GroupPtr total;
    long na = 1, nb = 1;
    CentralExtension ext_alpha, ext_beta, ext_sum;

    int project(int idx) const { return idx % base->order(); }
    int p_alpha(int idx) const {
        int m = base->order();
        long a = (idx / m) / nb;
        return static_cast<int>(a) * m + idx % m;
    }
    int p_beta(int idx) const {
        int m = base->order();
        long b = (idx / m) % nb;
        return static_cast<int>(b) * m + idx % m;
    }
    int p_sum(int idx) const {
        int m = base->order();
        long a = (idx / m) / nb, b = (idx / m) % nb;
        long L = ext_sum.n;
        long s = mod_pos((L / na) * a + (L / nb) * b, L);
        return static_cast<int>(s) * m + idx % m;
    }
};

inline DoubleExtension double_extension(const GroupPtr& g, const CocycleTable& alpha,
                                        const CocycleTable& beta) {
    if (!same_group(g, alpha.group) || !same_group(g, beta.group))
        fail("GroupMismatch", "double_extension: wrong group");
    validate_cocycle(alpha);
    validate_cocycle(beta);
    const int m = g->order();
    const long na = alpha.modulus, nb = beta.modulus;
    const int total = static_cast<int>(na * nb) * m;
    auto encode = [&](long a, long b, int x) {
        return static_cast<int>((mod_pos(a, na) * nb + mod_pos(b, nb))) * m + x;
    };
    std::vector<std::vector<int>> table(total, std::vector<int>(total));
    for (int i1 = 0; i1 < total; ++i1) {
        int g1 = i1 % m;
        long a1 = (i1 / m) / nb, b1 = (i1 / m) % nb;
        for (int i2 = 0; i2 < total; ++i2) {
            int g2 = i2 % m;
            long a2 = (i2 / m) / nb, b2 = (i2 / m) % nb;
            table[i1][i2] = encode(a1 + a2 + alpha.entries[g1][g2], b1 + b2 + beta.entries[g1][g2],
                                   g->mul(g1, g2));
        }
    }
    DoubleExtension out;
    out.base = g;
    out.total = std::make_shared<GroupTable>(std::move(table));
    out.na = na;
    out.nb = nb;
    out.ext_alpha = central_extension(g, alpha);
    out.ext_beta = central_extension(g, beta);
    out.ext_sum = central_extension(g, add_cocycles(alpha, beta));
    return out;
}

} // namespace twistk

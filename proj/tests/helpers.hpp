#pragma once

// Builders and fixture loaders shared by the test suites. Groups are built
// inline (independently of the JSON layer) so core tests do not depend on
// parsing; complex fixtures are loaded from the fixtures directory.

#include "twistk/twistk.hpp"

#include <string>
#include <vector>

namespace tk_test {

using namespace twistk;

inline GroupPtr make_cyclic(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return make_group(t);
}

// indices: 0 = e, 1 = a, 2 = b, 3 = ab; product is XOR of the bit patterns
inline GroupPtr make_v4() {
    std::vector<std::vector<int>> t(4, std::vector<int>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) t[a][b] = a ^ b;
    return make_group(t);
}

inline GroupPtr make_s3() { return make_group(3, {{1, 2, 0}, {1, 0, 2}}); }

// symmetries of the square on vertices 0..3: a 4-cycle and a reflection
inline GroupPtr make_d4() { return make_group(4, {{1, 2, 3, 0}, {3, 2, 1, 0}}); }

// quaternions ordered 1, -1, i, -i, j, -j, k, -k; index = 2*unit + sign bit
inline GroupPtr make_q8() {
    auto enc = [](int unit, int sign) { return 2 * unit + sign; };
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    // unit products u*v = (w, s): quaternion table on 1, i, j, k
    static const int W[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int S[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    // S[i][j]: sign of e_i * e_j (0 = +, 1 = -), with e_1 = i, e_2 = j, e_3 = k
    for (int u = 0; u < 4; ++u)
        for (int su = 0; su < 2; ++su)
            for (int v = 0; v < 4; ++v)
                for (int sv = 0; sv < 2; ++sv)
                    t[enc(u, su)][enc(v, sv)] = enc(W[u][v], (su + sv + S[u][v]) % 2);
    return make_group(t);
}

// V4 cocycle alpha(a^x b^y, a^x' b^y') = x'*y mod 2 (here bit 0 = a, bit 1 = b)
inline CocycleTable alpha_xy_v4(const GroupPtr& v4) {
    CocycleTable c = trivial_cocycle(v4, 2);
    for (int g = 0; g < 4; ++g)
        for (int h = 0; h < 4; ++h) c.entries[g][h] = ((g >> 1) & 1) * (h & 1);
    validate_cocycle(c);
    return c;
}

inline CocycleTable beta_c2(const GroupPtr& c2, long modulus, long value) {
    CocycleTable c = trivial_cocycle(c2, modulus);
    c.entries[1][1] = value;
    validate_cocycle(c);
    return c;
}

inline std::string fixture_path(const std::string& name) {
    return std::string(TWISTK_FIXTURES_DIR) + "/" + name;
}

} // namespace tk_test

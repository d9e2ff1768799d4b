#pragma once

#include "twistk/error.hpp"
#include "twistk/group.hpp"
#include "twistk/linalg.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace twistk {

// Unital 2-cocycle on G with values in Z/modulus, stored as exponent tables:
// the actual U(1) cocycle is (g,h) -> zeta_modulus^entries[g][h].
struct CocycleTable {
    GroupPtr group;
    long modulus = 1;
    std::vector<std::vector<long>> entries;
};

// 1-cochain u: G -> Z/modulus, also stored by exponents.
struct Cochain1 {
    long modulus = 1;
    std::vector<long> values;
};

inline CocycleTable trivial_cocycle(const GroupPtr& g, long modulus = 1) {
    return CocycleTable{g, modulus,
                        std::vector<std::vector<long>>(g->order(), std::vector<long>(g->order(), 0))};
}

inline void validate_cocycle(const CocycleTable& c) {
    const int m = c.group->order();
    if (c.modulus < 1) fail("Mismatch", "modulus must be >= 1");
    if (static_cast<int>(c.entries.size()) != m)
        fail("GroupMismatch", "entry table does not match group order");
    for (const auto& row : c.entries) {
        if (static_cast<int>(row.size()) != m)
            fail("GroupMismatch", "entry table is not square");
        for (long v : row)
            if (v < 0 || v >= c.modulus) fail("Mismatch", "entry out of range [0, modulus)");
    }
    for (int g = 0; g < m; ++g)
        if (c.entries[0][g] != 0 || c.entries[g][0] != 0)
            fail("NotUnital", "at element " + std::to_string(g));
    for (int g = 0; g < m; ++g)
        for (int h = 0; h < m; ++h)
            for (int k = 0; k < m; ++k) {
                long lhs = c.entries[g][h] + c.entries[c.group->mul(g, h)][k];
                long rhs = c.entries[h][k] + c.entries[g][c.group->mul(h, k)];
                if (mod_pos(lhs - rhs, c.modulus) != 0)
                    fail("CocycleIdentityFails", "(" + std::to_string(g) + "," +
                                                     std::to_string(h) + "," + std::to_string(k) +
                                                     ")");
            }
}

inline bool cocycles_equal(const CocycleTable& a, const CocycleTable& b) {
    return same_group(a.group, b.group) && a.modulus == b.modulus && a.entries == b.entries;
}

inline CocycleTable coboundary_of(const GroupPtr& g, const Cochain1& u) {
    const int m = g->order();
    if (static_cast<int>(u.values.size()) != m)
        fail("GroupMismatch", "cochain length does not match group order");
    CocycleTable out = trivial_cocycle(g, u.modulus);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            out.entries[a][b] = mod_pos(u.values[a] + u.values[b] - u.values[g->mul(a, b)], u.modulus);
    return out;
}

// Any 2-cocycle with trivial action has c(g,1) = c(1,h) = c(1,1); subtracting
// the coboundary of the constant cochain u = -c(1,1) makes it unital.
struct UnitalResult {
    CocycleTable cocycle;
    Cochain1 witness;
};

inline UnitalResult make_unital(const GroupPtr& g, long modulus,
                                const std::vector<std::vector<long>>& raw) {
    const int m = g->order();
    if (static_cast<int>(raw.size()) != m)
        fail("GroupMismatch", "entry table does not match group order");
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int k = 0; k < m; ++k) {
                long lhs = raw[a][b] + raw[g->mul(a, b)][k];
                long rhs = raw[b][k] + raw[a][g->mul(b, k)];
                if (mod_pos(lhs - rhs, modulus) != 0)
                    fail("CocycleIdentityFails", "(" + std::to_string(a) + "," +
                                                     std::to_string(b) + "," + std::to_string(k) +
                                                     ")");
            }
    long v = mod_pos(raw[0][0], modulus);
    Cochain1 u{modulus, std::vector<long>(m, mod_pos(-v, modulus))};
    CocycleTable out{g, modulus, raw};
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) out.entries[a][b] = mod_pos(raw[a][b] - v, modulus);
    validate_cocycle(out);
    return {std::move(out), std::move(u)};
}

namespace detail {

// Coboundary matrix of the normalized bar complex: rows are pairs of
// non-identity elements, columns the values u(g), g != 1.
inline IntMat normalized_d1(const GroupPtr& g) {
    const int m = g->order();
    IntMat d = zero_mat(static_cast<std::size_t>(m - 1) * (m - 1), m - 1);
    for (int a = 1; a < m; ++a)
        for (int b = 1; b < m; ++b) {
            std::size_t row = static_cast<std::size_t>(a - 1) * (m - 1) + (b - 1);
            d[row][a - 1] += 1;
            d[row][b - 1] += 1;
            int ab = g->mul(a, b);
            if (ab != 0) d[row][ab - 1] -= 1;
        }
    return d;
}

inline IntMat normalized_d2(const GroupPtr& g) {
    const int m = g->order();
    std::size_t mm = m - 1;
    IntMat d = zero_mat(mm * mm * mm, mm * mm);
    auto col = [mm](int a, int b) {
        return static_cast<std::size_t>(a - 1) * mm + (b - 1);
    };
    for (int a = 1; a < m; ++a)
        for (int b = 1; b < m; ++b)
            for (int c = 1; c < m; ++c) {
                std::size_t row = (static_cast<std::size_t>(a - 1) * mm + (b - 1)) * mm + (c - 1);
                d[row][col(b, c)] += 1;
                int ab = g->mul(a, b);
                if (ab != 0) d[row][col(ab, c)] -= 1;
                int bc = g->mul(b, c);
                if (bc != 0) d[row][col(a, bc)] += 1;
                d[row][col(a, b)] -= 1;
            }
    return d;
}

// Solve delta(u) = target (mod k) for a unital 1-cochain u; target must be a
// unital table of residues mod k.
inline std::optional<std::vector<long>> solve_cochain(const GroupPtr& g,
                                                      const std::vector<std::vector<long>>& target,
                                                      long k) {
    const int m = g->order();
    if (m == 1) return std::vector<long>{0};
    if (k == 1) return std::vector<long>(m, 0);
    IntMat d1 = normalized_d1(g);
    std::vector<Int> rhs;
    rhs.reserve(static_cast<std::size_t>(m - 1) * (m - 1));
    for (int a = 1; a < m; ++a)
        for (int b = 1; b < m; ++b) rhs.emplace_back(mod_pos(target[a][b], k));
    auto sol = solve_mod(d1, rhs, Int(k));
    if (!sol) return std::nullopt;
    std::vector<long> u(m, 0);
    for (int a = 1; a < m; ++a) u[a] = sol->at(a - 1).convert_to<long>();
    return u;
}

} // namespace detail

// Witness u with beta = alpha + delta(u) (mod the common modulus), or nullopt
// when the classes differ in H^2(G, Z/N).
inline std::optional<Cochain1> cohomologous_witness(const CocycleTable& alpha,
                                                    const CocycleTable& beta) {
    if (!same_group(alpha.group, beta.group))
        fail("GroupMismatch", "cohomologous_witness: different groups");
    if (alpha.modulus != beta.modulus)
        fail("Mismatch", "cohomologous_witness: different moduli");
    const int m = alpha.group->order();
    std::vector<std::vector<long>> diff(m, std::vector<long>(m, 0));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            diff[a][b] = mod_pos(beta.entries[a][b] - alpha.entries[a][b], alpha.modulus);
    auto u = detail::solve_cochain(alpha.group, diff, alpha.modulus);
    if (!u) return std::nullopt;
    return Cochain1{alpha.modulus, std::move(*u)};
}

// Embed a mod-N table into mod-M exponents (N | M), i.e. zeta_N = zeta_M^(M/N).
inline CocycleTable embed_cocycle(const CocycleTable& c, long target_modulus) {
    if (target_modulus % c.modulus != 0)
        fail("Mismatch", "embed_cocycle: modulus does not divide target");
    long f = target_modulus / c.modulus;
    CocycleTable out = c;
    out.modulus = target_modulus;
    for (auto& row : out.entries)
        for (auto& v : row) v *= f;
    return out;
}

// Order of the class of alpha in H^2(G, U(1)). Any U(1)-valued witness u for
// n*alpha has u^exp(G) valued in mu_N (u mod mu_N is a homomorphism), so
// solvability at the stable modulus N*exp(G) decides triviality in U(1).
inline long class_order(const CocycleTable& alpha) {
    const GroupPtr& g = alpha.group;
    const long N = alpha.modulus;
    const long M = N * g->exponent();
    const long f = M / N;
    const int m = g->order();
    for (long n : divisors(N)) {
        std::vector<std::vector<long>> target(m, std::vector<long>(m, 0));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) target[a][b] = mod_pos(-n * f * alpha.entries[a][b], M);
        if (detail::solve_cochain(g, target, M)) return n;
    }
    fail("Mismatch", "class_order: no divisor of the modulus kills the class");
}

struct NormalizedCocycle {
    CocycleTable cocycle; // modulus = order, values in Z/order
    Cochain1 witness;     // zeta_witness.modulus^witness transports alpha to it
    long order = 1;
};

// Cohomologous representative valued in the order-n subgroup, n = class_order.
// Solves (alpha + delta u) ≡ 0 mod (M/n) at the stable modulus M = N*exp(G)
// and divides out; the witness modulus is reduced by the common gcd.
inline NormalizedCocycle normalize_cocycle(const CocycleTable& alpha) {
    const GroupPtr& g = alpha.group;
    const int m = g->order();
    const long N = alpha.modulus;
    const long n = class_order(alpha);
    const long M = N * g->exponent();
    const long q = M / n;
    std::vector<std::vector<long>> target(m, std::vector<long>(m, 0));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) target[a][b] = mod_pos(-(M / N) * alpha.entries[a][b], q);
    auto u = detail::solve_cochain(g, target, q);
    if (!u) fail("NormalizationInfeasible", "no witness at the stable modulus (internal bug)");

    CocycleTable out{g, n, std::vector<std::vector<long>>(m, std::vector<long>(m, 0))};
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            long v = mod_pos((M / N) * alpha.entries[a][b] + (*u)[a] + (*u)[b] -
                                 (*u)[g->mul(a, b)],
                             M);
            if (v % q != 0) fail("NormalizationInfeasible", "witness residue check (internal bug)");
            out.entries[a][b] = v / q;
        }
    validate_cocycle(out);

    long gcd_all = M;
    for (long v : *u) gcd_all = std::gcd(gcd_all, v);
    Cochain1 witness{M / gcd_all, std::vector<long>(m, 0)};
    for (int a = 0; a < m; ++a) witness.values[a] = (*u)[a] / gcd_all;
    return {std::move(out), std::move(witness), n};
}

inline CocycleTable restrict_cocycle(const CocycleTable& c, const Subgroup& h) {
    if (!same_group(c.group, h.parent()))
        fail("GroupMismatch", "restrict_cocycle: subgroup of a different group");
    const int k = h.size();
    CocycleTable out{h.table(), c.modulus, std::vector<std::vector<long>>(k, std::vector<long>(k, 0))};
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out.entries[i][j] = c.entries[h.elements()[i]][h.elements()[j]];
    return out;
}

// Entrywise sum in Z/lcm of the two moduli.
inline CocycleTable add_cocycles(const CocycleTable& a, const CocycleTable& b) {
    if (!same_group(a.group, b.group)) fail("GroupMismatch", "add_cocycles: different groups");
    const long L = lcm_long(a.modulus, b.modulus);
    const int m = a.group->order();
    CocycleTable out{a.group, L, std::vector<std::vector<long>>(m, std::vector<long>(m, 0))};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out.entries[i][j] =
                mod_pos((L / a.modulus) * a.entries[i][j] + (L / b.modulus) * b.entries[i][j], L);
    return out;
}

// The Z/n x Z/m valued exterior sum, kept as value pairs; this is the shape
// double_extension consumes.
struct ExteriorSum {
    GroupPtr group;
    long modulus_a = 1;
    long modulus_b = 1;
    std::vector<std::vector<std::pair<long, long>>> entries;
};

inline ExteriorSum exterior_sum(const CocycleTable& a, const CocycleTable& b) {
    if (!same_group(a.group, b.group)) fail("GroupMismatch", "exterior_sum: different groups");
    const int m = a.group->order();
    ExteriorSum out{a.group, a.modulus, b.modulus,
                    std::vector<std::vector<std::pair<long, long>>>(
                        m, std::vector<std::pair<long, long>>(m))};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out.entries[i][j] = {a.entries[i][j], b.entries[i][j]};
    return out;
}

// ---------------------------------------------------------------------------
// H^2(G, Z/N) with generator cocycles.
// ---------------------------------------------------------------------------

struct H2Description {
    std::vector<long> invariant_factors; // > 1, ascending divisibility order
    std::vector<CocycleTable> generators;
    Int order = 1; // product of the invariant factors
};

inline H2Description h2_group(const GroupPtr& g, long modulus, int bound = 64) {
    if (g->order() > bound)
        fail("GroupTooLarge", "h2_group: order " + std::to_string(g->order()) +
                                  " exceeds bound " + std::to_string(bound));
    const int m = g->order();
    H2Description out;
    if (m == 1 || modulus == 1) return out;

    const std::size_t a = static_cast<std::size_t>(m - 1) * (m - 1);
    IntMat d2 = detail::normalized_d2(g);
    IntMat kernel = kernel_lattice_mod(d2, Int(modulus)); // a x a, full rank

    IntMat rel = hconcat(detail::normalized_d1(g), mat_scale(Int(modulus), identity_mat(a)));
    // coordinates of the relation lattice in the kernel basis; integral since
    // both coboundaries and N*Z^a lie inside the kernel lattice
    RatMat coords_q = rat_solve_many(to_rational(kernel), to_rational(rel));
    IntMat coords = zero_mat(a, n_cols(rel));
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < n_cols(rel); ++j) {
            if (!is_integer(coords_q[i][j]))
                fail("Mismatch", "h2_group: non-integral relation coordinates (internal bug)");
            coords[i][j] = numerator(coords_q[i][j]);
        }

    SmithOptions opts;
    opts.track_U_inv = true;
    SmithResult snf = smith_normal_form(coords, opts);

    std::vector<std::pair<long, CocycleTable>> gens;
    for (std::size_t i = 0; i < snf.diag.size(); ++i) {
        if (snf.diag[i] <= 1) continue;
        long factor = snf.diag[i].convert_to<long>();
        // kernel * (column i of U^{-1}) reshaped to a unital table
        CocycleTable tab = trivial_cocycle(g, modulus);
        for (int x = 1; x < m; ++x)
            for (int y = 1; y < m; ++y) {
                std::size_t row = static_cast<std::size_t>(x - 1) * (m - 1) + (y - 1);
                Int acc = 0;
                for (std::size_t t = 0; t < a; ++t) acc += kernel[row][t] * snf.U_inv[t][i];
                acc %= modulus;
                if (acc < 0) acc += modulus;
                tab.entries[x][y] = acc.convert_to<long>();
            }
        validate_cocycle(tab);
        gens.emplace_back(factor, std::move(tab));
    }
    std::sort(gens.begin(), gens.end(), [](const auto& p, const auto& q) {
        if (p.first != q.first) return p.first < q.first;
        return p.second.entries < q.second.entries;
    });
    for (auto& [factor, tab] : gens) {
        out.invariant_factors.push_back(factor);
        out.generators.push_back(std::move(tab));
        out.order *= factor;
    }
    return out;
}

} // namespace twistk

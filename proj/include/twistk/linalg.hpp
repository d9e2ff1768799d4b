#pragma once

#include "twistk/numeric.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace twistk {

using IntMat = std::vector<std::vector<Int>>;
using RatMat = std::vector<std::vector<Rational>>;

inline std::size_t n_rows(const IntMat& a) { return a.size(); }
inline std::size_t n_cols(const IntMat& a) { return a.empty() ? 0 : a[0].size(); }

inline IntMat zero_mat(std::size_t r, std::size_t c) {
    return IntMat(r, std::vector<Int>(c, 0));
}

inline IntMat identity_mat(std::size_t n) {
    IntMat a = zero_mat(n, n);
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1;
    return a;
}

inline IntMat mat_mul(const IntMat& a, const IntMat& b) {
    std::size_t r = n_rows(a), k = n_cols(a), c = n_cols(b);
    IntMat out = zero_mat(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < c; ++j)
                if (b[t][j] != 0) out[i][j] += a[i][t] * b[t][j];
        }
    return out;
}

inline IntMat mat_add(const IntMat& a, const IntMat& b) {
    IntMat out = a;
    for (std::size_t i = 0; i < n_rows(b); ++i)
        for (std::size_t j = 0; j < n_cols(b); ++j) out[i][j] += b[i][j];
    return out;
}

inline IntMat mat_scale(const Int& s, const IntMat& a) {
    IntMat out = a;
    for (auto& row : out)
        for (auto& x : row) x *= s;
    return out;
}

inline IntMat transpose(const IntMat& a) {
    IntMat out = zero_mat(n_cols(a), n_rows(a));
    for (std::size_t i = 0; i < n_rows(a); ++i)
        for (std::size_t j = 0; j < n_cols(a); ++j) out[j][i] = a[i][j];
    return out;
}

inline IntMat hconcat(const IntMat& a, const IntMat& b) {
    IntMat out = a;
    if (out.empty()) return b;
    for (std::size_t i = 0; i < n_rows(a); ++i)
        out[i].insert(out[i].end(), b[i].begin(), b[i].end());
    return out;
}

// ---------------------------------------------------------------------------
// Smith normal form. Produces S = U·A·V with U, V unimodular and S diagonal
// with a divisibility chain. U itself is never materialized: callers either
// need U·aug for a fixed right-hand side (pass `aug`), U⁻¹ columns (coker
// generators), or the column transforms V / V⁻¹.
// ---------------------------------------------------------------------------

struct SmithOptions {
    bool track_V = false;
    bool track_V_inv = false;
    bool track_U_inv = false;
};

struct SmithResult {
    std::vector<Int> diag;   // length min(rows, cols), zeros trailing
    std::size_t rank = 0;    // nonzero entries of diag
    IntMat V;                // cols x cols
    IntMat V_inv;
    IntMat U_inv;            // rows x rows
    IntMat aug;              // U·aug for the augment passed in
};

namespace detail {

inline void snf_row_swap(IntMat& a, IntMat& u_inv, IntMat& aug, bool tu,
                         std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    if (!aug.empty()) std::swap(aug[i], aug[j]);
    if (tu)
        for (auto& row : u_inv) std::swap(row[i], row[j]);
}

// row_i += q * row_j
inline void snf_row_add(IntMat& a, IntMat& u_inv, IntMat& aug, bool tu,
                        std::size_t i, std::size_t j, const Int& q) {
    for (std::size_t c = 0; c < a[i].size(); ++c)
        if (a[j][c] != 0) a[i][c] += q * a[j][c];
    if (!aug.empty())
        for (std::size_t c = 0; c < aug[i].size(); ++c)
            if (aug[j][c] != 0) aug[i][c] += q * aug[j][c];
    if (tu)
        for (auto& row : u_inv) row[j] -= q * row[i];
}

inline void snf_row_negate(IntMat& a, IntMat& u_inv, IntMat& aug, bool tu, std::size_t i) {
    for (auto& x : a[i]) x = -x;
    if (!aug.empty())
        for (auto& x : aug[i]) x = -x;
    if (tu)
        for (auto& row : u_inv) row[i] = -row[i];
}

inline void snf_col_swap(IntMat& a, IntMat& v, IntMat& v_inv, bool tv, bool tvi,
                         std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    if (tv)
        for (auto& row : v) std::swap(row[i], row[j]);
    if (tvi) std::swap(v_inv[i], v_inv[j]);
}

// col_i += q * col_j
inline void snf_col_add(IntMat& a, IntMat& v, IntMat& v_inv, bool tv, bool tvi,
                        std::size_t i, std::size_t j, const Int& q) {
    for (auto& row : a)
        if (row[j] != 0) row[i] += q * row[j];
    if (tv)
        for (auto& row : v)
            if (row[j] != 0) row[i] += q * row[j];
    if (tvi)
        for (std::size_t c = 0; c < v_inv[j].size(); ++c)
            if (v_inv[i][c] != 0) v_inv[j][c] -= q * v_inv[i][c];
}

inline void snf_col_negate(IntMat& a, IntMat& v, IntMat& v_inv, bool tv, bool tvi, std::size_t i) {
    for (auto& row : a) row[i] = -row[i];
    if (tv)
        for (auto& row : v) row[i] = -row[i];
    if (tvi)
        for (auto& x : v_inv[i]) x = -x;
}

} // namespace detail

inline SmithResult smith_normal_form(IntMat a, SmithOptions opts = {}, IntMat aug = {}) {
    using namespace detail;
    std::size_t rows = n_rows(a), cols = n_cols(a);
    SmithResult res;
    if (opts.track_V) res.V = identity_mat(cols);
    if (opts.track_V_inv) res.V_inv = identity_mat(cols);
    if (opts.track_U_inv) res.U_inv = identity_mat(rows);
    bool tu = opts.track_U_inv, tv = opts.track_V, tvi = opts.track_V_inv;

    std::size_t t = 0;
    std::size_t dim = std::min(rows, cols);
    while (t < dim) {
        // minimal nonzero entry of the trailing submatrix
        std::size_t pi = rows, pj = cols;
        Int best = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                if (a[i][j] == 0) continue;
                Int m = abs(a[i][j]);
                if (pi == rows || m < best) {
                    best = m;
                    pi = i;
                    pj = j;
                }
            }
        if (pi == rows) break; // trailing submatrix is zero

        if (pi != t) snf_row_swap(a, res.U_inv, aug, tu, t, pi);
        if (pj != t) snf_col_swap(a, res.V, res.V_inv, tv, tvi, t, pj);

        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
            if (a[i][t] == 0) continue;
            Int q = a[i][t] / a[t][t];
            if (q != 0) snf_row_add(a, res.U_inv, aug, tu, i, t, -q);
            if (a[i][t] != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
            if (a[t][j] == 0) continue;
            Int q = a[t][j] / a[t][t];
            if (q != 0) snf_col_add(a, res.V, res.V_inv, tv, tvi, j, t, -q);
            if (a[t][j] != 0) clean = false;
        }
        if (!clean) continue; // pivot shrank; redo this position

        // pivot must divide the rest of the submatrix for the invariant chain
        bool divides = true;
        for (std::size_t i = t + 1; i < rows && divides; ++i)
            for (std::size_t j = t + 1; j < cols; ++j)
                if (a[i][j] % a[t][t] != 0) {
                    snf_row_add(a, res.U_inv, aug, tu, t, i, 1);
                    divides = false;
                    break;
                }
        if (!divides) continue;

        if (a[t][t] < 0) snf_row_negate(a, res.U_inv, aug, tu, t);
        ++t;
    }

    res.diag.assign(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) res.diag[i] = a[i][i];
    res.rank = t;
    res.aug = std::move(aug);
    return res;
}

// Basis (as columns of a cols x cols matrix) of the full-rank lattice
// { x in Z^cols : A·x ≡ 0 (mod N) }.
inline IntMat kernel_lattice_mod(const IntMat& a, const Int& N) {
    std::size_t cols = n_cols(a);
    SmithOptions opts;
    opts.track_V = true;
    SmithResult s = smith_normal_form(a, opts);
    IntMat basis = s.V.empty() ? identity_mat(cols) : s.V;
    for (std::size_t i = 0; i < cols; ++i) {
        Int scale = 1;
        if (i < s.rank) scale = N / gcd(s.diag[i], N);
        if (scale != 1)
            for (std::size_t r = 0; r < cols; ++r) basis[r][i] *= scale;
    }
    return basis;
}

// One solution of A·x ≡ b (mod N) with entries canonicalized to [0, N),
// or nullopt when the system is inconsistent. A zero right-hand side yields
// the zero solution.
inline std::optional<std::vector<Int>> solve_mod(const IntMat& a, const std::vector<Int>& b,
                                                 const Int& N) {
    std::size_t rows = n_rows(a), cols = n_cols(a);
    IntMat aug(rows, std::vector<Int>(1));
    for (std::size_t i = 0; i < rows; ++i) aug[i][0] = b[i];
    SmithOptions opts;
    opts.track_V = true;
    SmithResult s = smith_normal_form(a, opts, aug);

    auto mod_N = [&N](Int x) {
        x %= N;
        if (x < 0) x += N;
        return x;
    };

    std::vector<Int> z(cols, 0);
    std::size_t dim = std::min(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        Int c = mod_N(s.aug[i][0]);
        if (i >= dim || s.diag[i] == 0) {
            if (c != 0) return std::nullopt;
            continue;
        }
        Int d = s.diag[i];
        Int g = gcd(d, N);
        if (c % g != 0) return std::nullopt;
        // (d/g)·z ≡ c/g (mod N/g), and d/g is invertible mod N/g
        Int m = N / g;
        if (m == 1) {
            z[i] = 0;
            continue;
        }
        Int dg = (d / g) % m, cg = (c / g) % m;
        // modular inverse by extended gcd
        Int t0 = 0, t1 = 1, r0 = m, r1 = dg;
        while (r1 != 0) {
            Int q = r0 / r1;
            t0 -= q * t1;
            std::swap(t0, t1);
            r0 -= q * r1;
            std::swap(r0, r1);
        }
        Int inv = t0 % m;
        if (inv < 0) inv += m;
        z[i] = (cg * inv) % m;
    }

    std::vector<Int> x(cols, 0);
    const IntMat& V = s.V;
    for (std::size_t r = 0; r < cols; ++r) {
        Int acc = 0;
        for (std::size_t i = 0; i < cols; ++i)
            if (z[i] != 0) acc += V[r][i] * z[i];
        x[r] = mod_N(acc);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Exact rational elimination.
// ---------------------------------------------------------------------------

inline RatMat to_rational(const IntMat& a) {
    RatMat out(n_rows(a), std::vector<Rational>(n_cols(a)));
    for (std::size_t i = 0; i < n_rows(a); ++i)
        for (std::size_t j = 0; j < n_cols(a); ++j) out[i][j] = Rational(a[i][j]);
    return out;
}

inline std::size_t rat_rows(const RatMat& a) { return a.size(); }
inline std::size_t rat_cols(const RatMat& a) { return a.empty() ? 0 : a[0].size(); }

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rat_rref(RatMat& a) {
    std::vector<std::size_t> pivots;
    std::size_t rows = rat_rows(a), cols = rat_cols(a);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (a[i][c] != 0) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        std::swap(a[r], a[sel]);
        Rational inv = a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rat_rank(RatMat a) { return rat_rref(a).size(); }

inline std::size_t int_rank(const IntMat& a) {
    RatMat r = to_rational(a);
    return rat_rank(std::move(r));
}

// Columns form a basis of { x : A·x = 0 }.
inline RatMat rat_kernel(RatMat a) {
    std::size_t cols = rat_cols(a);
    std::vector<std::size_t> pivots = rat_rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    RatMat basis(cols);
    for (auto& row : basis) row.assign(cols - pivots.size(), Rational(0));
    std::size_t k = 0;
    for (std::size_t free_c = 0; free_c < cols; ++free_c) {
        if (is_pivot[free_c]) continue;
        basis[free_c][k] = 1;
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            basis[pivots[pr]][k] = -a[pr][free_c];
        ++k;
    }
    return basis;
}

// One solution of A·x = b, or nullopt.
inline std::optional<std::vector<Rational>> rat_solve(RatMat a, std::vector<Rational> b) {
    std::size_t rows = rat_rows(a), cols = rat_cols(a);
    for (std::size_t i = 0; i < rows; ++i) a[i].push_back(b[i]);
    std::vector<std::size_t> pivots = rat_rref(a);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    std::vector<Rational> x(cols, Rational(0));
    for (std::size_t pr = 0; pr < pivots.size(); ++pr) x[pivots[pr]] = a[pr][cols];
    return x;
}

// Solve A·X = B for square nonsingular A, all columns at once.
inline RatMat rat_solve_many(RatMat a, const RatMat& b) {
    std::size_t n = rat_rows(a), k = rat_cols(b);
    for (std::size_t i = 0; i < n; ++i)
        a[i].insert(a[i].end(), b[i].begin(), b[i].end());
    rat_rref(a);
    RatMat x(n, std::vector<Rational>(k));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) x[i][j] = a[i][n + j];
    return x;
}

inline RatMat rat_mul(const RatMat& a, const RatMat& b) {
    std::size_t r = rat_rows(a), k = rat_cols(a), c = rat_cols(b);
    RatMat out(r, std::vector<Rational>(c, Rational(0)));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < c; ++j)
                if (b[t][j] != 0) out[i][j] += a[i][t] * b[t][j];
        }
    return out;
}

inline RatMat rat_hconcat(const RatMat& a, const RatMat& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    RatMat out = a;
    for (std::size_t i = 0; i < rat_rows(a); ++i)
        out[i].insert(out[i].end(), b[i].begin(), b[i].end());
    return out;
}

} // namespace twistk

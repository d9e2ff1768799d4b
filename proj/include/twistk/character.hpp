#pragma once

#include "twistk/cyclotomic.hpp"
#include "twistk/error.hpp"
#include "twistk/group.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace twistk {

namespace fp {

using i64 = std::int64_t;

inline i64 mul(i64 a, i64 b, i64 p) { return (a * b) % p; }

inline i64 pow(i64 a, i64 e, i64 p) {
    i64 r = 1;
    a %= p;
    while (e > 0) {
        if (e & 1) r = mul(r, a, p);
        a = mul(a, a, p);
        e >>= 1;
    }
    return r;
}

inline i64 inv(i64 a, i64 p) { return pow(mod_pos(a, p), p - 2, p); }

inline i64 primitive_root(i64 p) {
    std::vector<i64> prime_factors;
    i64 n = p - 1;
    for (i64 q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            prime_factors.push_back(q);
            while (n % q == 0) n /= q;
        }
    if (n > 1) prime_factors.push_back(n);
    for (i64 g = 2; g < p; ++g) {
        bool ok = true;
        for (i64 q : prime_factors)
            if (pow(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    fail("Mismatch", "primitive_root: none found (internal bug)");
}

using Mat = std::vector<std::vector<i64>>;

inline Mat mat_mul(const Mat& a, const Mat& b, i64 p) {
    std::size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
    Mat out(r, std::vector<i64>(c, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < c; ++j)
                out[i][j] = (out[i][j] + a[i][t] * b[t][j]) % p;
        }
    return out;
}

// Row echelon in place; returns pivot columns.
inline std::vector<std::size_t> rref(Mat& a, i64 p) {
    std::vector<std::size_t> pivots;
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (a[i][c] != 0) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        std::swap(a[r], a[sel]);
        i64 f = inv(a[r][c], p);
        for (std::size_t j = c; j < cols; ++j) a[r][j] = mul(a[r][j], f, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            i64 g = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                a[i][j] = mod_pos(a[i][j] - g * a[r][j] % p, p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline i64 det(Mat a, i64 p) {
    std::size_t n = a.size();
    i64 d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = c; i < n; ++i)
            if (a[i][c] != 0) {
                sel = i;
                break;
            }
        if (sel == n) return 0;
        if (sel != c) {
            std::swap(a[c], a[sel]);
            d = p - d;
        }
        d = mul(d, a[c][c], p);
        i64 f = inv(a[c][c], p);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0) continue;
            i64 g = mul(a[i][c], f, p);
            for (std::size_t j = c; j < n; ++j)
                a[i][j] = mod_pos(a[i][j] - g * a[c][j] % p, p);
        }
    }
    return d % p;
}

// Columns spanning { x : A x = 0 }.
inline Mat kernel(Mat a, i64 p) {
    std::size_t cols = a.empty() ? 0 : a[0].size();
    std::vector<std::size_t> pivots = rref(a, p);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    Mat basis(cols, std::vector<i64>(cols - pivots.size(), 0));
    std::size_t k = 0;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        basis[c][k] = 1;
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            basis[pivots[pr]][k] = mod_pos(-a[pr][c], p);
        ++k;
    }
    return basis;
}

// A with B*A = C, for B of full column rank and C inside its column span.
inline Mat solve_in_basis(const Mat& b, const Mat& c, i64 p) {
    std::size_t rows = b.size(), s = b.empty() ? 0 : b[0].size(),
                t = c.empty() ? 0 : c[0].size();
    Mat aug(rows, std::vector<i64>(s + t));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < s; ++j) aug[i][j] = b[i][j];
        for (std::size_t j = 0; j < t; ++j) aug[i][s + j] = c[i][j];
    }
    std::vector<std::size_t> pivots = rref(aug, p);
    if (pivots.size() != s || (s && pivots.back() != s - 1))
        fail("Mismatch", "solve_in_basis: inconsistent system (internal bug)");
    Mat a(s, std::vector<i64>(t));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < t; ++j) a[i][j] = aug[i][s + j];
    return a;
}

// Coefficients of det(x*I - A), via interpolation at x = 0..s.
inline std::vector<i64> char_poly(const Mat& a, i64 p) {
    std::size_t s = a.size();
    std::vector<i64> xs(s + 1), ys(s + 1);
    for (std::size_t t = 0; t <= s; ++t) {
        Mat m = a;
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j < s; ++j) m[i][j] = mod_pos(-m[i][j], p);
            m[i][i] = mod_pos(m[i][i] + static_cast<i64>(t), p);
        }
        xs[t] = static_cast<i64>(t);
        ys[t] = det(std::move(m), p);
    }
    // Lagrange interpolation, accumulating coefficient vectors
    std::vector<i64> coeffs(s + 1, 0);
    for (std::size_t i = 0; i <= s; ++i) {
        std::vector<i64> basis{1};
        i64 denom = 1;
        for (std::size_t j = 0; j <= s; ++j) {
            if (j == i) continue;
            std::vector<i64> next(basis.size() + 1, 0);
            for (std::size_t d = 0; d < basis.size(); ++d) {
                next[d + 1] = (next[d + 1] + basis[d]) % p;
                next[d] = mod_pos(next[d] - basis[d] * xs[j] % p, p);
            }
            basis = std::move(next);
            denom = mul(denom, mod_pos(xs[i] - xs[j], p), p);
        }
        i64 f = mul(ys[i], inv(denom, p), p);
        for (std::size_t d = 0; d < basis.size(); ++d)
            coeffs[d] = (coeffs[d] + mul(f, basis[d], p)) % p;
    }
    return coeffs;
}

inline i64 poly_eval(const std::vector<i64>& c, i64 x, i64 p) {
    i64 v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = (mul(v, x, p) + c[i]) % p;
    return v;
}

} // namespace fp

struct CharacterTable {
    GroupPtr group;
    std::vector<Int> degrees;
    std::vector<std::vector<CycNum>> class_values; // [irrep][class]

    std::size_t count() const { return degrees.size(); }
    const CycNum& value(std::size_t irrep, int element) const {
        return class_values[irrep][group->class_of(element)];
    }
};

// Exact irreducible character table. Common eigenvectors of the class-sum
// matrices are found over GF(p) for p ≡ 1 (mod exp G), p > 2|G|, and every
// value is lifted to cyclotomic integers through the multiplicity DFT on the
// cyclic group generated by each class representative.
inline CharacterTable character_table(const GroupPtr& g) {
    using fp::i64;
    const int m = g->order();
    const auto& classes = g->classes();
    const std::size_t r = classes.size();

    CharacterTable out;
    out.group = g;
    if (m == 1) {
        out.degrees = {Int(1)};
        out.class_values = {{CycNum(1)}};
        return out;
    }

    const long e = g->exponent();
    const i64 p = prime_in_progression(e, 2 * m);
    const i64 z = fp::pow(fp::primitive_root(p), (p - 1) / e, p);

    std::vector<int> rep(r), csize(r), inv_class(r);
    for (std::size_t l = 0; l < r; ++l) {
        rep[l] = classes[l].elements.front();
        csize[l] = static_cast<int>(classes[l].elements.size());
        inv_class[l] = g->class_of(g->inv(rep[l]));
    }

    // structure constants: n_j[k][l] = #{ x in C_j : x^{-1} g_l in C_k }
    std::vector<fp::Mat> n_mats(r, fp::Mat(r, std::vector<i64>(r, 0)));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t l = 0; l < r; ++l)
            for (int x : classes[j].elements)
                n_mats[j][g->class_of(g->mul(g->inv(x), rep[l]))][l] += 1;

    // split the common eigenspaces
    std::vector<fp::Mat> spaces;
    {
        fp::Mat full(r, std::vector<i64>(r, 0));
        for (std::size_t i = 0; i < r; ++i) full[i][i] = 1;
        spaces.push_back(std::move(full));
    }
    for (std::size_t j = 1; j < r; ++j) {
        bool all_lines = true;
        for (const auto& s : spaces)
            if (s[0].size() > 1) all_lines = false;
        if (all_lines) break;
        std::vector<fp::Mat> next;
        for (auto& basis : spaces) {
            std::size_t s = basis[0].size();
            if (s == 1) {
                next.push_back(std::move(basis));
                continue;
            }
            fp::Mat action = fp::solve_in_basis(basis, fp::mat_mul(n_mats[j], basis, p), p);
            std::vector<i64> cp = fp::char_poly(action, p);
            std::size_t found = 0;
            for (i64 lam = 0; lam < p && found < s; ++lam) {
                if (fp::poly_eval(cp, lam, p) != 0) continue;
                fp::Mat shifted = action;
                for (std::size_t i = 0; i < s; ++i)
                    shifted[i][i] = mod_pos(shifted[i][i] - lam, p);
                fp::Mat ker = fp::kernel(std::move(shifted), p);
                if (ker[0].empty()) continue;
                found += ker[0].size();
                next.push_back(fp::mat_mul(basis, ker, p));
            }
            if (found != s)
                fail("Mismatch", "character_table: eigenspaces do not fill (internal bug)");
        }
        spaces = std::move(next);
    }
    if (spaces.size() != r)
        fail("Mismatch", "character_table: wrong number of eigenvectors (internal bug)");

    const i64 m_mod = mod_pos(m, p);
    std::vector<std::vector<i64>> omegas;
    for (const auto& basis : spaces) {
        std::vector<i64> w(r);
        for (std::size_t l = 0; l < r; ++l) w[l] = basis[l][0];
        if (w[0] == 0) fail("Mismatch", "character_table: eigenvector vanishes at 1 (internal bug)");
        i64 f = fp::inv(w[0], p);
        for (auto& x : w) x = fp::mul(x, f, p);
        omegas.push_back(std::move(w));
    }

    struct Row {
        Int degree;
        std::vector<CycNum> values;
    };
    std::vector<Row> rows;
    for (const auto& w : omegas) {
        i64 sum = 0;
        for (std::size_t l = 0; l < r; ++l)
            sum = (sum + fp::mul(fp::mul(w[l], w[inv_class[l]], p), fp::inv(csize[l], p), p)) % p;
        i64 d2 = fp::mul(m_mod, fp::inv(sum, p), p);
        Int d = isqrt_exact(Int(d2)); // d^2 <= |G| < p, so the residue is exact
        i64 dm = d.convert_to<i64>() % p;

        std::vector<i64> theta(r);
        for (std::size_t l = 0; l < r; ++l)
            theta[l] = fp::mul(fp::mul(dm, w[l], p), fp::inv(csize[l], p), p);

        Row row;
        row.degree = d;
        row.values.resize(r);
        for (std::size_t l = 0; l < r; ++l) {
            int o = g->element_order(rep[l]);
            i64 zo = fp::pow(z, e / o, p);
            CycNum val;
            Int total = 0;
            for (int k = 0; k < o; ++k) {
                i64 acc = 0;
                int x = 0; // rep^t
                for (int t = 0; t < o; ++t) {
                    i64 w_t = fp::pow(zo, mod_pos(-static_cast<i64>(k) * t, o), p);
                    acc = (acc + fp::mul(theta[g->class_of(x)], w_t, p)) % p;
                    x = g->mul(x, rep[l]);
                }
                i64 mk = fp::mul(acc, fp::inv(o, p), p);
                if (Int(mk) > d)
                    fail("Mismatch", "character_table: multiplicity overflow (internal bug)");
                total += mk;
                if (mk != 0)
                    val += CycNum(Rational(mk)) * CycNum::root_of_unity(o, k);
            }
            if (total != d)
                fail("Mismatch", "character_table: multiplicities do not sum to degree");
            row.values[l] = std::move(val);
        }
        rows.push_back(std::move(row));
    }

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            if (a.values[i] != b.values[i]) return a.values[i] < b.values[i];
        }
        return false;
    });

    Int sum_sq = 0;
    for (const auto& row : rows) sum_sq += row.degree * row.degree;
    if (sum_sq != m) fail("Mismatch", "character_table: degree check failed (internal bug)");

    for (auto& row : rows) {
        out.degrees.push_back(row.degree);
        out.class_values.push_back(std::move(row.values));
    }
    return out;
}

} // namespace twistk

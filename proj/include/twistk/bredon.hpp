#pragma once

#include "twistk/twisted.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace twistk {

// One equivariant incidence: the attaching map of the carrying cell crosses
// the translate-by-g copy of `cell` with total degree `degree`.
struct IncidenceTerm {
    std::string cell;
    int translate = 0;
    Int degree;
};

struct RawCell {
    std::string id;
    int dim = 0;
    std::vector<int> isotropy; // element indices generating the list (full list expected)
    std::vector<IncidenceTerm> boundary;
};

struct GCWCell {
    std::string id;
    int dim = 0;
    Subgroup isotropy;
    std::vector<IncidenceTerm> boundary;
};

struct GCWComplex {
    GroupPtr group;
    int dimension = 0;
    std::vector<GCWCell> cells;                   // input order preserved
    std::vector<std::string> subcomplex;          // optional relative part, by id
    std::map<std::string, std::size_t> index_of;  // id -> position in cells
    std::vector<std::vector<std::size_t>> by_dim; // per dimension, positions in cells

    const GCWCell& cell(const std::string& id) const {
        auto it = index_of.find(id);
        if (it == index_of.end()) fail("NotAComplex", "unknown cell id " + id);
        return cells[it->second];
    }
};

namespace detail {

inline void check_subcomplex_closed(const GCWComplex& x, const std::set<std::string>& ids) {
    for (const auto& id : ids) {
        auto it = x.index_of.find(id);
        if (it == x.index_of.end())
            fail("NotASubcomplex", "subcomplex names unknown cell " + id);
        for (const auto& term : x.cells[it->second].boundary)
            if (!ids.count(term.cell))
                fail("NotASubcomplex", "boundary of " + id + " leaves the subcomplex at " +
                                           term.cell);
    }
}

} // namespace detail

// Validates and indexes a G-CW complex given as equivariant cell data. The
// constant-coefficient boundary must square to zero, each incidence term must
// satisfy the subconjugacy condition, and a declared subcomplex must be closed
// under the boundary.
inline GCWComplex make_complex(const GroupPtr& g, const std::vector<RawCell>& raw,
                               std::vector<std::string> subcomplex = {}) {
    GCWComplex x;
    x.group = g;
    x.subcomplex = std::move(subcomplex);

    for (const auto& rc : raw) {
        if (rc.dim < 0) fail("NotAComplex", "cell " + rc.id + " has negative dimension");
        if (x.index_of.count(rc.id)) fail("NotAComplex", "duplicate cell id " + rc.id);
        GCWCell cell{rc.id, rc.dim, Subgroup(g, rc.isotropy), rc.boundary};
        x.index_of[rc.id] = x.cells.size();
        x.dimension = std::max(x.dimension, rc.dim);
        x.cells.push_back(std::move(cell));
    }
    x.by_dim.assign(x.dimension + 1, {});
    for (std::size_t i = 0; i < x.cells.size(); ++i)
        x.by_dim[x.cells[i].dim].push_back(i);

    for (const auto& cell : x.cells) {
        if (cell.dim == 0 && !cell.boundary.empty())
            fail("NotAComplex", "0-cell " + cell.id + " has boundary terms");
        for (const auto& term : cell.boundary) {
            auto it = x.index_of.find(term.cell);
            if (it == x.index_of.end())
                fail("NotAComplex", "cell " + cell.id + " references unknown cell " + term.cell);
            const GCWCell& target = x.cells[it->second];
            if (target.dim != cell.dim - 1)
                fail("NotAComplex", "cell " + cell.id + " has a boundary term of dimension " +
                                        std::to_string(target.dim));
            check_element(g, term.translate, "incidence translate");
            int tinv = g->inv(term.translate);
            for (int h : cell.isotropy.elements())
                if (!target.isotropy.contains(g->conj(h, tinv)))
                    fail("NotAComplex", "subconjugacy fails from " + cell.id + " to " +
                                            term.cell + " via element " +
                                            std::to_string(term.translate));
        }
    }

    // constant-rank test system: folded degrees must square to zero
    for (int p = 2; p <= x.dimension; ++p)
        for (std::size_t e : x.by_dim[p]) {
            std::map<std::size_t, Int> second;
            for (const auto& t1 : x.cells[e].boundary) {
                std::size_t f = x.index_of.at(t1.cell);
                for (const auto& t2 : x.cells[f].boundary)
                    second[x.index_of.at(t2.cell)] += t1.degree * t2.degree;
            }
            for (const auto& [h, total] : second)
                if (total != 0)
                    fail("NonSquareZero", "constant system boundary does not square to zero "
                                          "between " +
                                              x.cells[e].id + " and " + x.cells[h].id);
        }

    if (!x.subcomplex.empty())
        detail::check_subcomplex_closed(
            x, std::set<std::string>(x.subcomplex.begin(), x.subcomplex.end()));
    return x;
}

inline GCWComplex make_point_complex(const GroupPtr& g, const Subgroup& h) {
    RawCell pt{"pt", 0, h.elements(), {}};
    return make_complex(g, {pt});
}

// Cells of y are relabeled with the given prefix; same group required.
inline GCWComplex disjoint_union(const GCWComplex& a, const GCWComplex& b,
                                 const std::string& prefix_a = "A.",
                                 const std::string& prefix_b = "B.") {
    if (!same_group(a.group, b.group)) fail("GroupMismatch", "disjoint_union: different groups");
    std::vector<RawCell> raw;
    std::vector<std::string> sub;
    auto push = [&raw](const GCWComplex& x, const std::string& prefix) {
        for (const auto& cell : x.cells) {
            RawCell rc{prefix + cell.id, cell.dim, cell.isotropy.elements(), cell.boundary};
            for (auto& term : rc.boundary) term.cell = prefix + term.cell;
            raw.push_back(std::move(rc));
        }
    };
    push(a, prefix_a);
    push(b, prefix_b);
    for (const auto& id : a.subcomplex) sub.push_back(prefix_a + id);
    for (const auto& id : b.subcomplex) sub.push_back(prefix_b + id);
    return make_complex(a.group, raw, std::move(sub));
}

// The functor R_alpha on the orbit category over a family of subgroups:
// ranks and morphism matrices M(H_e, H_f, g): R_alpha(H_f) -> R_alpha(H_e)
// for g^-1 H_e g <= H_f, realized as restrict-to-conjugate then conjugate.
class CoefficientSystem {
  public:
    CoefficientSystem(GroupPtr group, CocycleTable alpha, std::vector<Subgroup> family)
        : group_(std::move(group)), alpha_(std::move(alpha)), family_(std::move(family)) {
        validate_cocycle(alpha_);
        for (const auto& h : family_) {
            if (!same_group(h.parent(), group_))
                fail("GroupMismatch", "coefficient system family crosses groups");
            CocycleTable local = restrict_cocycle(alpha_, h);
            bases_.push_back(alpha_character_basis(local.group, local));
        }
        // Inner self-morphisms must be identities. Morphisms from centralizing
        // elements outside H are exempt: they carry the commutator pairing of
        // the twist, which no representative choice can remove.
        for (std::size_t i = 0; i < family_.size(); ++i) {
            const Subgroup& h = family_[i];
            for (int t : h.elements())
                if (matrix(h, h, t) != identity_mat(bases_[i]->rank()))
                    fail("Mismatch",
                         "coefficient system: inner morphism is not the identity (internal bug)");
        }
    }

    const GroupPtr& group() const { return group_; }
    const CocycleTable& cocycle() const { return alpha_; }
    const std::vector<Subgroup>& family() const { return family_; }

    std::size_t family_index(const Subgroup& h) const {
        for (std::size_t i = 0; i < family_.size(); ++i)
            if (family_[i].elements() == h.elements()) return i;
        fail("FamilyNotClosed", "subgroup " + detail::subgroup_name(h) +
                                    " is outside the coefficient family");
    }

    std::size_t rank(const Subgroup& h) const { return bases_[family_index(h)]->rank(); }
    BasisPtr basis(const Subgroup& h) const { return bases_[family_index(h)]; }

    IntMat matrix(const Subgroup& he, const Subgroup& hf, int t) const {
        std::size_t ie = family_index(he), jf = family_index(hf);
        auto key = std::make_tuple(ie, jf, t);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        int tinv = group_->inv(t);
        std::vector<int> moved;
        moved.reserve(he.size());
        for (int x : he.elements()) moved.push_back(group_->conj(x, tinv));
        std::sort(moved.begin(), moved.end());
        for (int x : moved)
            if (!hf.contains(x))
                fail("Mismatch", "morphism datum is not subconjugate: " +
                                     detail::subgroup_name(he) + " via " + std::to_string(t));

        const GroupPtr& hf_table = bases_[jf]->group;
        IntMat res = restriction_matrix(hf_table, bases_[jf]->cocycle,
                                        detail::localize(family_[jf], hf_table, moved));
        IntMat conj = conjugation_matrix(group_, alpha_, Subgroup(group_, moved), t);
        IntMat out = mat_mul(conj, res);

        std::lock_guard<std::mutex> lock(mutex_);
        auto [it, inserted] = memo_.emplace(key, std::move(out));
        return it->second;
    }

  private:
    GroupPtr group_;
    CocycleTable alpha_;
    std::vector<Subgroup> family_;
    std::vector<BasisPtr> bases_;
    mutable std::map<std::tuple<std::size_t, std::size_t, int>, IntMat> memo_;
    mutable std::mutex mutex_;
};

inline std::vector<Subgroup> isotropy_family(const GCWComplex& x) {
    std::vector<Subgroup> family;
    for (const auto& cell : x.cells) {
        bool seen = false;
        for (const auto& h : family)
            if (h.elements() == cell.isotropy.elements()) {
                seen = true;
                break;
            }
        if (!seen) family.push_back(cell.isotropy);
    }
    return family;
}

inline CoefficientSystem coefficient_system_from_cocycle(const GroupPtr& g,
                                                         const CocycleTable& alpha,
                                                         std::vector<Subgroup> family) {
    return CoefficientSystem(g, alpha, std::move(family));
}

// Assembled cochain complex: dims[p] = dim C^p and deltas[p]: C^p -> C^{p+1}.
// Block offsets record where each included cell's R_alpha(H_e) block starts.
struct BredonComplex {
    std::vector<std::size_t> dims;
    std::vector<IntMat> deltas;
    std::vector<std::vector<std::size_t>> cells;   // per degree, positions into X.cells
    std::vector<std::vector<std::size_t>> offsets; // per degree, block starts
};

namespace detail {

inline BredonComplex assemble_cochains(const GCWComplex& x, const CoefficientSystem& m,
                                       const std::set<std::string>& excluded) {
    for (const auto& cell : x.cells)
        if (std::find_if(m.family().begin(), m.family().end(), [&](const Subgroup& h) {
                return h.elements() == cell.isotropy.elements();
            }) == m.family().end())
            fail("IsotropyNotInFamily", "cell " + cell.id + " has isotropy " +
                                            detail::subgroup_name(cell.isotropy) +
                                            " outside the family");

    const int d = x.dimension;
    BredonComplex out;
    out.dims.assign(d + 1, 0);
    out.cells.assign(d + 1, {});
    out.offsets.assign(d + 1, {});
    std::map<std::size_t, std::size_t> block_of; // cell position -> offset

    for (int p = 0; p <= d; ++p)
        for (std::size_t i : x.by_dim[p]) {
            if (excluded.count(x.cells[i].id)) continue;
            out.cells[p].push_back(i);
            out.offsets[p].push_back(out.dims[p]);
            block_of[i] = out.dims[p];
            out.dims[p] += m.rank(x.cells[i].isotropy);
        }

    for (int p = 0; p + 1 <= d; ++p) {
        IntMat delta = zero_mat(out.dims[p + 1], out.dims[p]);
        for (std::size_t ei = 0; ei < out.cells[p + 1].size(); ++ei) {
            const GCWCell& e = x.cells[out.cells[p + 1][ei]];
            std::size_t row0 = out.offsets[p + 1][ei];
            for (const auto& term : e.boundary) {
                std::size_t f = x.index_of.at(term.cell);
                if (excluded.count(term.cell)) continue;
                IntMat block = m.matrix(e.isotropy, x.cells[f].isotropy, term.translate);
                std::size_t col0 = block_of.at(f);
                for (std::size_t r = 0; r < n_rows(block); ++r)
                    for (std::size_t c = 0; c < n_cols(block); ++c)
                        delta[row0 + r][col0 + c] += term.degree * block[r][c];
            }
        }
        out.deltas.push_back(std::move(delta));
    }

    for (std::size_t p = 0; p + 1 < out.deltas.size(); ++p) {
        IntMat square = mat_mul(out.deltas[p + 1], out.deltas[p]);
        if (square != zero_mat(n_rows(square), n_cols(square)))
            fail("NonSquareZero", "assembled coboundary does not square to zero at degree " +
                                      std::to_string(p));
    }
    return out;
}

} // namespace detail

// Relative cochains are realized as the kernel complex: blocks of cells named
// in `rel` are deleted, which is exact because a subcomplex is boundary-closed.
inline BredonComplex bredon_cochains(const GCWComplex& x, const CoefficientSystem& m,
                                     const std::vector<std::string>& rel = {}) {
    std::set<std::string> excluded(rel.begin(), rel.end());
    if (!excluded.empty()) detail::check_subcomplex_closed(x, excluded);
    return detail::assemble_cochains(x, m, excluded);
}

struct DegreeResult {
    Int free_rank;
    std::vector<Int> torsion; // invariant factors > 1
};

struct CohomologyResult {
    std::vector<DegreeResult> degrees; // index p = 0..dim
    std::vector<IntMat> deltas;        // the audited chain-level matrices
};

// Exact integral cohomology of the assembled complex via Smith normal form.
inline CohomologyResult integral_cohomology(const BredonComplex& bc) {
    const std::size_t top = bc.dims.size();
    for (std::size_t p = 0; p + 1 < bc.deltas.size(); ++p) {
        IntMat square = mat_mul(bc.deltas[p + 1], bc.deltas[p]);
        if (square != zero_mat(n_rows(square), n_cols(square)))
            fail("NotAComplex", "coboundary square is nonzero at degree " + std::to_string(p));
    }

    std::vector<std::size_t> rank(top, 0);
    std::vector<std::vector<Int>> torsion(top);
    for (std::size_t p = 0; p + 1 < top; ++p) {
        SmithResult snf = smith_normal_form(bc.deltas[p], SmithOptions{});
        rank[p] = snf.rank;
        for (std::size_t i = 0; i < snf.rank; ++i)
            if (snf.diag[i] > 1) torsion[p].push_back(snf.diag[i]);
    }

    CohomologyResult out;
    out.deltas = bc.deltas;
    Int euler_cells = 0, euler_coh = 0, sign = 1;
    for (std::size_t p = 0; p < top; ++p) {
        Int incoming = p == 0 ? Int(0) : Int(rank[p - 1]);
        Int free_rank = Int(bc.dims[p]) - Int(rank[p]) - incoming;
        if (free_rank < 0) fail("NotAComplex", "negative free rank (internal bug)");
        DegreeResult dr;
        dr.free_rank = free_rank;
        if (p > 0) dr.torsion = torsion[p - 1];
        euler_cells += sign * Int(bc.dims[p]);
        euler_coh += sign * free_rank;
        out.degrees.push_back(std::move(dr));
        sign = -sign;
    }
    if (euler_cells != euler_coh)
        fail("NotAComplex", "Euler characteristic mismatch (internal bug)");
    return out;
}

// Degree-0 cup pairing H^0(X; R_alpha) x H^0(X; R_beta) -> H^0(X; R_gamma)
// with gamma the normalized representative of alpha+beta; section values are
// multiplied cellwise after the global witness transport.
class H0Pairing {
  public:
    H0Pairing(const GCWComplex& x, const CocycleTable& alpha, const CocycleTable& beta)
        : x_(x),
          sum_(normalize_cocycle(add_cocycles(alpha, beta))),
          sys_alpha_(x.group, alpha, isotropy_family(x)),
          sys_beta_(x.group, beta, isotropy_family(x)),
          sys_sum_(x.group, sum_.cocycle, isotropy_family(x)),
          cx_alpha_(bredon_cochains(x, sys_alpha_)),
          cx_beta_(bredon_cochains(x, sys_beta_)),
          cx_sum_(bredon_cochains(x, sys_sum_)) {}

    const BredonComplex& complex_alpha() const { return cx_alpha_; }
    const BredonComplex& complex_beta() const { return cx_beta_; }
    const BredonComplex& complex_sum() const { return cx_sum_; }

    std::vector<Int> apply(const std::vector<Int>& u, const std::vector<Int>& v) const {
        check_cocycle(cx_alpha_, u, "left");
        check_cocycle(cx_beta_, v, "right");
        std::vector<Int> out(cx_sum_.dims[0], 0);
        for (std::size_t ci = 0; ci < cx_alpha_.cells[0].size(); ++ci) {
            const GCWCell& cell = x_.cells[cx_alpha_.cells[0][ci]];
            BasisPtr ba = sys_alpha_.basis(cell.isotropy);
            BasisPtr bb = sys_beta_.basis(cell.isotropy);
            BasisPtr bs = sys_sum_.basis(cell.isotropy);

            RAlphaElement ea{ba, slice(u, cx_alpha_.offsets[0][ci], ba->rank())};
            RAlphaElement eb{bb, slice(v, cx_beta_.offsets[0][ci], bb->rank())};
            std::vector<CycNum> xv = expand(ea);
            std::vector<CycNum> yv = expand(eb);

            SectionCharacter prod;
            prod.group = bs->group;
            prod.cocycle = bs->cocycle;
            const auto& elements = cell.isotropy.elements();
            for (std::size_t i = 0; i < elements.size(); ++i)
                prod.values.push_back(CycNum::root_of_unity(sum_.witness.modulus,
                                                            sum_.witness.values[elements[i]]) *
                                      xv[i] * yv[i]);
            RAlphaElement es = decompose(prod, bs);
            std::size_t off = cx_sum_.offsets[0][ci];
            for (std::size_t i = 0; i < es.coords.size(); ++i) out[off + i] = es.coords[i];
        }
        check_cocycle(cx_sum_, out, "product");
        return out;
    }

  private:
    static std::vector<Int> slice(const std::vector<Int>& v, std::size_t off, std::size_t len) {
        return std::vector<Int>(v.begin() + off, v.begin() + off + len);
    }

    static void check_cocycle(const BredonComplex& cx, const std::vector<Int>& u,
                              const char* what) {
        if (u.size() != cx.dims[0])
            fail("Mismatch", std::string("h0 pairing: ") + what + " section has wrong length");
        if (cx.deltas.empty()) return;
        for (std::size_t r = 0; r < n_rows(cx.deltas[0]); ++r) {
            Int sum = 0;
            for (std::size_t c = 0; c < u.size(); ++c) sum += cx.deltas[0][r][c] * u[c];
            if (sum != 0)
                fail("Mismatch", std::string("h0 pairing: ") + what + " section is not a cocycle");
        }
    }

    GCWComplex x_;
    NormalizedCocycle sum_;
    CoefficientSystem sys_alpha_, sys_beta_, sys_sum_;
    BredonComplex cx_alpha_, cx_beta_, cx_sum_;
};

inline H0Pairing h0_module_pairing(const GCWComplex& x, const CocycleTable& alpha,
                                   const CocycleTable& beta) {
    return H0Pairing(x, alpha, beta);
}

namespace detail {

// Rank of the map induced on cohomology by a cochain map phi at degree p.
// A missing or row-free source differential means the kernel is everything.
inline std::size_t induced_rank(const RatMat& phi, const std::optional<IntMat>& delta_src,
                                const std::optional<IntMat>& delta_dst_prev,
                                std::size_t src_dim) {
    RatMat kernel;
    if (delta_src && n_rows(*delta_src) > 0) {
        kernel = rat_kernel(to_rational(*delta_src));
    } else {
        kernel = RatMat(src_dim, std::vector<Rational>(src_dim, Rational(0)));
        for (std::size_t i = 0; i < src_dim; ++i) kernel[i][i] = Rational(1);
    }
    if (rat_cols(kernel) == 0) return 0;
    RatMat mapped = rat_mul(phi, kernel);
    if (!delta_dst_prev || n_rows(*delta_dst_prev) == 0) return rat_rank(mapped);
    RatMat image = to_rational(*delta_dst_prev);
    std::size_t base = rat_rank(image);
    return rat_rank(rat_hconcat(image, mapped)) - base;
}

} // namespace detail

// Rational rank-exactness of the long exact sequence of the pair (X, A),
// assembled from the relative, absolute and subcomplex cochain complexes and
// the evident inclusion/projection chain maps.
inline Report verify_pair_exactness(const GCWComplex& x, const CoefficientSystem& m,
                                    const std::vector<std::string>& rel) {
    Report report;
    BredonComplex cx = bredon_cochains(x, m);
    BredonComplex crel = bredon_cochains(x, m, rel);

    // the subcomplex as a complex of its own: delete everything outside it
    std::set<std::string> keep(rel.begin(), rel.end());
    std::set<std::string> drop;
    for (const auto& cell : x.cells)
        if (!keep.count(cell.id)) drop.insert(cell.id);
    BredonComplex ca = detail::assemble_cochains(x, m, drop);

    const int d = x.dimension;
    auto dim_at = [d](const BredonComplex& bc, int p) -> std::size_t {
        return (p < 0 || p > d) ? 0 : bc.dims[p];
    };
    auto delta_at = [d](const BredonComplex& bc, int p) -> std::optional<IntMat> {
        if (p < 0 || p >= d) return std::nullopt;
        return bc.deltas[p];
    };

    // block maps: relative -> absolute (inclusion), absolute -> subcomplex
    auto inclusion = [&](int p) {
        RatMat f(dim_at(cx, p), std::vector<Rational>(dim_at(crel, p), Rational(0)));
        for (std::size_t ci = 0; ci < crel.cells[p].size(); ++ci) {
            std::size_t pos = crel.cells[p][ci];
            auto it = std::find(cx.cells[p].begin(), cx.cells[p].end(), pos);
            std::size_t cj = it - cx.cells[p].begin();
            std::size_t r = m.rank(x.cells[pos].isotropy);
            for (std::size_t i = 0; i < r; ++i)
                f[cx.offsets[p][cj] + i][crel.offsets[p][ci] + i] = Rational(1);
        }
        return f;
    };
    auto projection = [&](int p) {
        RatMat f(dim_at(ca, p), std::vector<Rational>(dim_at(cx, p), Rational(0)));
        for (std::size_t ci = 0; ci < ca.cells[p].size(); ++ci) {
            std::size_t pos = ca.cells[p][ci];
            auto it = std::find(cx.cells[p].begin(), cx.cells[p].end(), pos);
            std::size_t cj = it - cx.cells[p].begin();
            std::size_t r = m.rank(x.cells[pos].isotropy);
            for (std::size_t i = 0; i < r; ++i)
                f[ca.offsets[p][ci] + i][cx.offsets[p][cj] + i] = Rational(1);
        }
        return f;
    };

    std::vector<std::size_t> h_rel(d + 2, 0), h_x(d + 2, 0), h_a(d + 2, 0);
    std::vector<std::size_t> rank_f(d + 2, 0), rank_g(d + 2, 0);
    auto free_rank = [&](const BredonComplex& bc, int p) -> std::size_t {
        std::size_t r_p = 0, r_prev = 0;
        if (auto m1 = delta_at(bc, p)) r_p = int_rank(*m1);
        if (auto m0 = delta_at(bc, p - 1)) r_prev = int_rank(*m0);
        return dim_at(bc, p) - r_p - r_prev;
    };
    for (int p = 0; p <= d; ++p) {
        h_rel[p] = free_rank(crel, p);
        h_x[p] = free_rank(cx, p);
        h_a[p] = free_rank(ca, p);
        rank_f[p] = detail::induced_rank(inclusion(p), delta_at(crel, p), delta_at(cx, p - 1),
                                         dim_at(crel, p));
        rank_g[p] = detail::induced_rank(projection(p), delta_at(cx, p), delta_at(ca, p - 1),
                                         dim_at(cx, p));
    }

    for (int p = 0; p <= d; ++p) {
        std::size_t prior_connect = p == 0 ? 0 : h_a[p - 1] - rank_g[p - 1];
        report.record(h_rel[p] - rank_f[p] == prior_connect,
                      "exactness fails at relative degree " + std::to_string(p));
        report.record(h_x[p] - rank_g[p] == rank_f[p],
                      "exactness fails at absolute degree " + std::to_string(p));
        std::size_t next_connect = p == d ? 0 : h_rel[p + 1] - rank_f[p + 1];
        report.record(h_a[p] - rank_g[p] == next_connect,
                      "exactness fails at subcomplex degree " + std::to_string(p));
    }
    return report;
}

} // namespace twistk

#pragma once

#include "twistk/character.hpp"
#include "twistk/cocycle.hpp"
#include "twistk/extension.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace twistk {

// Character of an alpha-twisted module, stored on the section: values[g] is
// the trace of rho(g-bar) on the twisted-algebra basis element g-bar. This is
// not a class function on G in general; the full array is kept.
struct SectionCharacter {
    GroupPtr group;
    CocycleTable cocycle;
    std::vector<CycNum> values;

    Int degree() const {
        Rational d = values.at(0).as_rational();
        if (!is_integer(d)) fail("NotIntegral", "character degree is not an integer");
        return numerator(d);
    }
};

// The ordered Z-basis of R_alpha(G): irreducible section characters, i.e. the
// zeta_n-isotypic irreducibles of the central extension G_alpha restricted to
// the section, sorted by (degree, values).
struct AlphaCharBasis {
    GroupPtr group;
    CocycleTable cocycle;
    std::vector<SectionCharacter> irreducibles;
    CentralExtension extension;
    std::vector<std::vector<CycNum>> conj_values; // conjugated rows, for inner products

    std::size_t rank() const { return irreducibles.size(); }
};

using BasisPtr = std::shared_ptr<const AlphaCharBasis>;

struct RAlphaElement {
    BasisPtr basis;
    std::vector<Int> coords;
};

namespace detail {

struct BasisKey {
    std::vector<std::vector<int>> table;
    long modulus;
    std::vector<std::vector<long>> entries;

    bool operator<(const BasisKey& o) const {
        return std::tie(table, modulus, entries) < std::tie(o.table, o.modulus, o.entries);
    }
};

inline std::map<BasisKey, BasisPtr>& basis_cache() {
    static std::map<BasisKey, BasisPtr> cache;
    return cache;
}

inline std::mutex& basis_mutex() {
    static std::mutex m;
    return m;
}

} // namespace detail

// R_alpha(G) via the extension: the irreducibles of G_alpha on which the
// central generator acts as zeta_n, restricted to the section.
inline BasisPtr alpha_character_basis(const GroupPtr& g, const CocycleTable& alpha) {
    detail::BasisKey key{g->table(), alpha.modulus, alpha.entries};
    {
        std::lock_guard<std::mutex> lock(detail::basis_mutex());
        auto it = detail::basis_cache().find(key);
        if (it != detail::basis_cache().end()) return it->second;
    }

    validate_cocycle(alpha);
    const int m = g->order();
    const long n = alpha.modulus;
    CentralExtension ext = central_extension(g, alpha);
    CharacterTable ct = character_table(ext.total);
    const CycNum zeta = CycNum::root_of_unity(n, 1);

    auto basis = std::make_shared<AlphaCharBasis>();
    basis->group = g;
    basis->cocycle = alpha;
    basis->extension = ext;

    Int sum_sq = 0;
    for (std::size_t i = 0; i < ct.count(); ++i) {
        if (ct.value(i, ext.central_gen) != zeta * ct.class_values[i][0]) continue;
        SectionCharacter chi;
        chi.group = g;
        chi.cocycle = alpha;
        chi.values.reserve(m);
        for (int x = 0; x < m; ++x) chi.values.push_back(ct.value(i, ext.section(x)));
        sum_sq += ct.degrees[i] * ct.degrees[i];
        basis->irreducibles.push_back(std::move(chi));
    }
    if (sum_sq != m)
        fail("Mismatch", "alpha_character_basis: summand degrees do not square-sum to |G|");

    std::sort(basis->irreducibles.begin(), basis->irreducibles.end(),
              [](const SectionCharacter& a, const SectionCharacter& b) {
                  return a.values < b.values;
              });
    std::stable_sort(basis->irreducibles.begin(), basis->irreducibles.end(),
                     [](const SectionCharacter& a, const SectionCharacter& b) {
                         return a.degree() < b.degree();
                     });

    for (const auto& chi : basis->irreducibles) {
        std::vector<CycNum> row;
        row.reserve(m);
        for (const auto& v : chi.values) row.push_back(conjugate(v));
        basis->conj_values.push_back(std::move(row));
    }

    std::lock_guard<std::mutex> lock(detail::basis_mutex());
    auto [it, inserted] = detail::basis_cache().emplace(std::move(key), std::move(basis));
    return it->second;
}

inline void check_same_twist(const SectionCharacter& a, const SectionCharacter& b,
                             const char* what) {
    if (!same_group(a.group, b.group) || a.cocycle.modulus != b.cocycle.modulus ||
        a.cocycle.entries != b.cocycle.entries)
        fail("TwistMismatch", std::string(what) + ": group or cocycle differs");
}

// (1/|G|) sum_g chi(g) * conj(psi(g)); equals the G_alpha inner product of the
// extended characters because the central zeta factors cancel.
inline CycNum section_inner_product(const SectionCharacter& chi, const SectionCharacter& psi) {
    check_same_twist(chi, psi, "section_inner_product");
    const int m = chi.group->order();
    CycNum sum;
    for (int x = 0; x < m; ++x) sum += chi.values[x] * conjugate(psi.values[x]);
    return sum.scaled(Rational(1, m));
}

// Integer coordinates of chi against the basis, with an exact reconstruction
// check; rejects characters of the wrong twist through non-integrality.
inline RAlphaElement decompose(const SectionCharacter& chi, const BasisPtr& basis) {
    if (!same_group(chi.group, basis->group) || chi.cocycle.modulus != basis->cocycle.modulus ||
        chi.cocycle.entries != basis->cocycle.entries)
        fail("TwistMismatch", "decompose: character twist differs from basis");
    const int m = chi.group->order();
    RAlphaElement out;
    out.basis = basis;
    for (std::size_t i = 0; i < basis->rank(); ++i) {
        CycNum sum;
        for (int x = 0; x < m; ++x) sum += chi.values[x] * basis->conj_values[i][x];
        Rational r = sum.scaled(Rational(1, m)).as_rational();
        if (!is_integer(r))
            fail("NotIntegral", "decompose: coordinate " + std::to_string(i) +
                                    " is not an integer");
        out.coords.push_back(numerator(r));
    }
    for (int x = 0; x < m; ++x) {
        CycNum rebuilt;
        for (std::size_t i = 0; i < basis->rank(); ++i) {
            if (out.coords[i] == 0) continue;
            rebuilt += CycNum(Rational(out.coords[i])) * basis->irreducibles[i].values[x];
        }
        if (rebuilt != chi.values[x])
            fail("NotIntegral", "decompose: reconstruction differs at element " +
                                    std::to_string(x));
    }
    return out;
}

inline std::vector<CycNum> expand(const RAlphaElement& v) {
    const int m = v.basis->group->order();
    std::vector<CycNum> vals(m);
    for (std::size_t i = 0; i < v.coords.size(); ++i) {
        if (v.coords[i] == 0) continue;
        CycNum c(Rational(v.coords[i]));
        for (int x = 0; x < m; ++x) vals[x] += c * v.basis->irreducibles[i].values[x];
    }
    return vals;
}

// Column j = coordinates of basis_G[j] restricted to H, in the basis of
// R_{alpha|H}(H).
inline IntMat restriction_matrix(const GroupPtr& g, const CocycleTable& alpha,
                                 const Subgroup& h) {
    if (!same_group(g, h.parent()))
        fail("GroupMismatch", "restriction_matrix: subgroup of a different group");
    BasisPtr bg = alpha_character_basis(g, alpha);
    CocycleTable alpha_h = restrict_cocycle(alpha, h);
    BasisPtr bh = alpha_character_basis(alpha_h.group, alpha_h);
    IntMat mat = zero_mat(bh->rank(), bg->rank());
    for (std::size_t j = 0; j < bg->rank(); ++j) {
        SectionCharacter res;
        res.group = bh->group;
        res.cocycle = bh->cocycle;
        for (int x : h.elements()) res.values.push_back(bg->irreducibles[j].values[x]);
        RAlphaElement col = decompose(res, bh);
        for (std::size_t i = 0; i < bh->rank(); ++i) mat[i][j] = col.coords[i];
    }
    return mat;
}

// Conjugate-module map R_alpha(H) -> R_alpha(gHg^-1): transported values
// (c_g chi)(x) = zeta^{a(g,g^-1) - a(xg,g^-1) - a(g,g^-1 x g)} chi(g^-1 x g).
inline IntMat conjugation_matrix(const GroupPtr& g, const CocycleTable& alpha,
                                 const Subgroup& h, int t) {
    if (!same_group(g, h.parent()))
        fail("GroupMismatch", "conjugation_matrix: subgroup of a different group");
    check_element(g, t, "conjugation_matrix");
    const long n = alpha.modulus;
    const int tinv = g->inv(t);
    Subgroup k = conjugate_subgroup(h, t);

    CocycleTable alpha_h = restrict_cocycle(alpha, h);
    CocycleTable alpha_k = restrict_cocycle(alpha, k);
    BasisPtr bh = alpha_character_basis(alpha_h.group, alpha_h);
    BasisPtr bk = alpha_character_basis(alpha_k.group, alpha_k);

    const long base = alpha.entries[t][tinv];
    IntMat mat = zero_mat(bk->rank(), bh->rank());
    for (std::size_t j = 0; j < bh->rank(); ++j) {
        SectionCharacter moved;
        moved.group = bk->group;
        moved.cocycle = bk->cocycle;
        for (int x : k.elements()) {
            int back = g->mul(g->mul(tinv, x), t); // g^-1 x g
            long e = mod_pos(base - alpha.entries[g->mul(x, t)][tinv] -
                                 alpha.entries[t][back],
                             n);
            moved.values.push_back(CycNum::root_of_unity(n, e) *
                                   bh->irreducibles[j].values[h.local_index(back)]);
        }
        RAlphaElement col = decompose(moved, bk);
        for (std::size_t i = 0; i < bk->rank(); ++i) mat[i][j] = col.coords[i];
    }
    return mat;
}

// Induction R_alpha(H) -> R_alpha(G) through the ordinary induced-character
// formula in the extension G_alpha, applied to the zeta-extended character.
inline IntMat induction_matrix(const GroupPtr& g, const CocycleTable& alpha,
                               const Subgroup& h) {
    if (!same_group(g, h.parent()))
        fail("GroupMismatch", "induction_matrix: subgroup of a different group");
    BasisPtr bg = alpha_character_basis(g, alpha);
    CocycleTable alpha_h = restrict_cocycle(alpha, h);
    BasisPtr bh = alpha_character_basis(alpha_h.group, alpha_h);

    const CentralExtension& ext = bg->extension;
    const GroupPtr& total = ext.total;
    const int m = g->order();
    const long n = alpha.modulus;
    const int order_h_alpha = static_cast<int>(n) * h.size();

    IntMat mat = zero_mat(bg->rank(), bh->rank());
    for (std::size_t j = 0; j < bh->rank(); ++j) {
        // hat-psi on G_alpha, supported on H_alpha
        std::vector<CycNum> hat(total->order());
        for (int idx = 0; idx < total->order(); ++idx) {
            int base = ext.project(idx);
            if (!h.contains(base)) continue;
            hat[idx] = CycNum::root_of_unity(n, ext.kernel_power(idx)) *
                       bh->irreducibles[j].values[h.local_index(base)];
        }
        SectionCharacter ind;
        ind.group = g;
        ind.cocycle = alpha;
        for (int x = 0; x < m; ++x) {
            CycNum sum;
            int target = ext.section(x);
            for (int s = 0; s < total->order(); ++s) {
                const CycNum& v = hat[total->mul(total->mul(total->inv(s), target), s)];
                if (!v.is_zero()) sum += v;
            }
            ind.values.push_back(sum.scaled(Rational(1, order_h_alpha)));
        }
        RAlphaElement col = decompose(ind, bg);
        for (std::size_t i = 0; i < bg->rank(); ++i) mat[i][j] = col.coords[i];
    }
    return mat;
}

// R_alpha x R_beta -> R_{alpha+beta}: pointwise products of section values,
// decomposed against the basis of the entrywise sum cocycle. Using the sum
// table verbatim (no re-normalization) keeps the product strictly associative
// and commutative: any identification with a smaller-modulus representative
// depends on the connecting coboundary, which is only canonical up to a
// linear character. normalize_cocycle remains available for that final,
// single-shot identification when a caller wants it.
inline RAlphaElement twisted_product(const RAlphaElement& x, const RAlphaElement& y) {
    const GroupPtr& g = x.basis->group;
    if (!same_group(g, y.basis->group))
        fail("GroupMismatch", "twisted_product: different groups");
    CocycleTable sum = add_cocycles(x.basis->cocycle, y.basis->cocycle);
    BasisPtr target = alpha_character_basis(g, sum);

    std::vector<CycNum> xv = expand(x);
    std::vector<CycNum> yv = expand(y);
    SectionCharacter prod;
    prod.group = target->group;
    prod.cocycle = target->cocycle;
    const int m = g->order();
    prod.values.reserve(m);
    for (int a = 0; a < m; ++a) prod.values.push_back(xv[a] * yv[a]);
    return decompose(prod, target);
}

struct Report {
    bool passed = true;
    int checks = 0;
    std::vector<std::string> failures;

    void record(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            passed = false;
            failures.push_back(what);
        }
    }
};

// Verifies the algebra embedding phi(g-tilde) = (1/n) sum_j zeta^{n-j} (g,s^j)
// into C[G_alpha]: multiplicativity phi(g)phi(h) = zeta^{a(g,h)} phi(gh) on
// every pair, and linear independence of the images.
inline Report phi_embedding_check(const GroupPtr& g, const CocycleTable& alpha) {
    validate_cocycle(alpha);
    Report report;
    const int m = g->order();
    const long n = alpha.modulus;
    CentralExtension ext = central_extension(g, alpha);
    const GroupPtr& total = ext.total;
    const int tm = total->order();

    std::vector<std::vector<CycNum>> phi(m, std::vector<CycNum>(tm));
    for (int x = 0; x < m; ++x)
        for (long j = 0; j < n; ++j)
            phi[x][ext.index_of(x, j)] =
                CycNum::root_of_unity(n, mod_pos(-j, n)).scaled(Rational(1, n));

    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            std::vector<CycNum> lhs(tm);
            for (int s = 0; s < tm; ++s) {
                if (phi[a][s].is_zero()) continue;
                for (int t = 0; t < tm; ++t) {
                    if (phi[b][t].is_zero()) continue;
                    lhs[total->mul(s, t)] += phi[a][s] * phi[b][t];
                }
            }
            const CycNum scale = CycNum::root_of_unity(n, alpha.entries[a][b]);
            bool ok = true;
            for (int s = 0; s < tm; ++s)
                if (lhs[s] != scale * phi[g->mul(a, b)][s]) {
                    ok = false;
                    break;
                }
            report.record(ok, "phi product mismatch at pair (" + std::to_string(a) + "," +
                                  std::to_string(b) + ")");
        }

    RatMat coords(m);
    for (int x = 0; x < m; ++x)
        for (int s = 0; s < tm; ++s) {
            std::vector<Rational> block = phi[x][s].coords_at(n);
            coords[x].insert(coords[x].end(), block.begin(), block.end());
        }
    report.record(rat_rank(coords) == static_cast<std::size_t>(m),
                  "phi images are linearly dependent");
    return report;
}

namespace detail {

inline std::string subgroup_name(const Subgroup& h) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < h.elements().size(); ++i)
        os << (i ? "," : "") << h.elements()[i];
    os << "}";
    return os.str();
}

// J as a subgroup of the local table of H, for J <= H <= G. Element order is
// ascending in both readings, so nested local tables agree.
inline Subgroup localize(const Subgroup& h, const GroupPtr& h_table,
                         const std::vector<int>& j_elements) {
    std::vector<int> local;
    local.reserve(j_elements.size());
    for (int x : j_elements) local.push_back(h.local_index(x));
    return Subgroup(h_table, std::move(local));
}

inline std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace detail

// Mackey-structure verification across all subgroup pairs: inner and
// centralizer conjugations act trivially, conjugations compose to identities,
// Frobenius reciprocity, and the double-coset identity
//   res_K ind_H = sum_t ind(K cap tHt^-1) conj_t res(H cap t^-1 K t).
inline Report verify_mackey(const GroupPtr& g, const CocycleTable& alpha, int bound = 512) {
    validate_cocycle(alpha);
    Report report;
    const int m = g->order();
    std::vector<Subgroup> subs = enumerate_subgroups(g, bound);

    std::vector<GroupPtr> tables;
    std::vector<CocycleTable> cocycles;
    tables.reserve(subs.size());
    for (const auto& h : subs) {
        CocycleTable c = restrict_cocycle(alpha, h);
        tables.push_back(c.group);
        cocycles.push_back(std::move(c));
    }
    // axiom 1: inner conjugations are trivial. (Conjugation by a centralizing
    // element outside H is NOT required to be trivial: it carries the
    // commutator pairing alpha(t,x) - alpha(x,t), a class invariant.)
    for (const auto& h : subs) {
        for (int t : h.elements()) {
            IntMat c = conjugation_matrix(g, alpha, h, t);
            report.record(c == identity_mat(n_rows(c)),
                          "inner conjugation not identity: H=" + detail::subgroup_name(h) +
                              " g=" + std::to_string(t));
        }
    }

    // axiom 2: conjugation by t then t^-1 is the identity
    for (const auto& h : subs)
        for (int t = 0; t < m; ++t) {
            IntMat forward = conjugation_matrix(g, alpha, h, t);
            IntMat back = conjugation_matrix(g, alpha, conjugate_subgroup(h, t), g->inv(t));
            report.record(mat_mul(back, forward) == identity_mat(n_cols(forward)),
                          "conjugation round trip not identity: H=" +
                              detail::subgroup_name(h) + " g=" + std::to_string(t));
        }

    // Frobenius reciprocity
    std::vector<IntMat> res_from_g(subs.size()), ind_to_g(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i) {
        res_from_g[i] = restriction_matrix(g, alpha, subs[i]);
        ind_to_g[i] = induction_matrix(g, alpha, subs[i]);
        report.record(res_from_g[i] == transpose(ind_to_g[i]),
                      "restriction is not the transpose of induction: H=" +
                          detail::subgroup_name(subs[i]));
    }

    // axiom 3: the double coset formula
    for (std::size_t ki = 0; ki < subs.size(); ++ki)
        for (std::size_t hi = 0; hi < subs.size(); ++hi) {
            const Subgroup& k = subs[ki];
            const Subgroup& h = subs[hi];
            IntMat lhs = mat_mul(res_from_g[ki], ind_to_g[hi]);
            IntMat rhs = zero_mat(n_rows(lhs), n_cols(lhs));
            for (int t : double_cosets(g, k, h)) {
                int tinv = g->inv(t);
                std::vector<int> thtinv;
                for (int x : h.elements()) thtinv.push_back(g->conj(x, t));
                std::sort(thtinv.begin(), thtinv.end());
                std::vector<int> j_up = detail::intersect_sorted(k.elements(), thtinv);
                std::vector<int> j_down;
                for (int x : j_up) j_down.push_back(g->conj(x, tinv));
                std::sort(j_down.begin(), j_down.end());

                IntMat res_local = restriction_matrix(
                    tables[hi], cocycles[hi], detail::localize(h, tables[hi], j_down));
                IntMat conj_mid =
                    conjugation_matrix(g, alpha, Subgroup(g, j_down), t);
                IntMat ind_local = induction_matrix(
                    tables[ki], cocycles[ki], detail::localize(k, tables[ki], j_up));
                rhs = mat_add(rhs, mat_mul(ind_local, mat_mul(conj_mid, res_local)));
            }
            report.record(lhs == rhs, "double coset identity fails: K=" +
                                          detail::subgroup_name(k) +
                                          " H=" + detail::subgroup_name(h));
        }
    return report;
}

} // namespace twistk

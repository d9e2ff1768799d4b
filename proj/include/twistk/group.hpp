#pragma once

#include "twistk/error.hpp"
#include "twistk/numeric.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace twistk {

struct ConjugacyClass {
    std::vector<int> elements; // ascending
};

// Finite group as a multiplication table over indices 0..m-1, identity at 0.
// Conjugacy data, element orders and the exponent are computed eagerly, so a
// constructed table is immutable and safe to share across threads.
class GroupTable {
public:
    explicit GroupTable(std::vector<std::vector<int>> table) : table_(std::move(table)) {
        const int m = static_cast<int>(table_.size());
        if (m == 0) fail("NoIdentity", "empty multiplication table");
        for (int g = 0; g < m; ++g) {
            if (static_cast<int>(table_[g].size()) != m)
                fail("NonClosed", "row " + std::to_string(g) + " has wrong length");
            for (int h = 0; h < m; ++h)
                if (table_[g][h] < 0 || table_[g][h] >= m)
                    fail("NonClosed", "entry (" + std::to_string(g) + "," + std::to_string(h) +
                                          ") out of range");
        }
        for (int g = 0; g < m; ++g)
            if (table_[0][g] != g || table_[g][0] != g)
                fail("NoIdentity", "index 0 is not an identity element");
        // rows and columns must be permutations
        for (int g = 0; g < m; ++g) {
            std::vector<bool> seen_row(m, false), seen_col(m, false);
            for (int h = 0; h < m; ++h) {
                if (seen_row[table_[g][h]])
                    fail("NonClosed", "row " + std::to_string(g) + " repeats a product");
                seen_row[table_[g][h]] = true;
                if (seen_col[table_[h][g]])
                    fail("NonClosed", "column " + std::to_string(g) + " repeats a product");
                seen_col[table_[h][g]] = true;
            }
        }
        for (int g = 0; g < m; ++g)
            for (int h = 0; h < m; ++h)
                for (int k = 0; k < m; ++k)
                    if (table_[table_[g][h]][k] != table_[g][table_[h][k]])
                        fail("NonAssociative", "(" + std::to_string(g) + "," + std::to_string(h) +
                                                   "," + std::to_string(k) + ")");

        inv_.assign(m, -1);
        for (int g = 0; g < m; ++g)
            for (int h = 0; h < m; ++h)
                if (table_[g][h] == 0) inv_[g] = h;

        orders_.assign(m, 1);
        exponent_ = 1;
        for (int g = 0; g < m; ++g) {
            int x = g, o = 1;
            while (x != 0) {
                x = table_[x][g];
                ++o;
            }
            orders_[g] = o;
            exponent_ = lcm_long(exponent_, o);
        }

        class_of_.assign(m, -1);
        for (int g = 0; g < m; ++g) {
            if (class_of_[g] != -1) continue;
            std::set<int> orbit;
            for (int x = 0; x < m; ++x) orbit.insert(table_[table_[x][g]][inv_[x]]);
            int id = static_cast<int>(classes_.size());
            ConjugacyClass cls;
            cls.elements.assign(orbit.begin(), orbit.end());
            for (int y : cls.elements) class_of_[y] = id;
            classes_.push_back(std::move(cls));
        }
        // identity class comes first because element 0 is visited first, and
        // classes are discovered in order of their minimal member
    }

    int order() const { return static_cast<int>(table_.size()); }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    int conj(int g, int x) const { return table_[table_[x][g]][inv_[x]]; } // x g x^{-1}
    int element_order(int g) const { return orders_[g]; }
    long exponent() const { return exponent_; }
    const std::vector<ConjugacyClass>& classes() const { return classes_; }
    int class_of(int g) const { return class_of_[g]; }
    const std::vector<std::vector<int>>& table() const { return table_; }

    int power(int g, long k) const {
        int o = orders_[g];
        k = mod_pos(k, o);
        int x = 0;
        while (k-- > 0) x = table_[x][g];
        return x;
    }

private:
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
    std::vector<int> orders_;
    std::vector<ConjugacyClass> classes_;
    std::vector<int> class_of_;
    long exponent_ = 1;
};

using GroupPtr = std::shared_ptr<const GroupTable>;

inline bool same_group(const GroupPtr& a, const GroupPtr& b) {
    return a.get() == b.get() || a->table() == b->table();
}

inline void check_element(const GroupPtr& g, int x, const char* what) {
    if (x < 0 || x >= g->order())
        fail("ElementNotInGroup", std::string(what) + ": index " + std::to_string(x));
}

// Construct from a raw table; if the identity sits at some index e != 0 the
// elements are re-indexed, moving e to the front and keeping the relative
// order of the rest.
inline GroupPtr make_group(const std::vector<std::vector<int>>& table) {
    const int m = static_cast<int>(table.size());
    if (m == 0) fail("NoIdentity", "empty multiplication table");
    for (int g = 0; g < m; ++g) {
        if (static_cast<int>(table[g].size()) != m)
            fail("NonClosed", "row " + std::to_string(g) + " has wrong length");
        for (int h = 0; h < m; ++h)
            if (table[g][h] < 0 || table[g][h] >= m)
                fail("NonClosed", "entry (" + std::to_string(g) + "," + std::to_string(h) +
                                      ") out of range");
    }
    int e = -1;
    for (int c = 0; c < m && e < 0; ++c) {
        bool ok = true;
        for (int g = 0; g < m && ok; ++g)
            if (table[c][g] != g || table[g][c] != g) ok = false;
        if (ok) e = c;
    }
    if (e < 0) fail("NoIdentity", "no two-sided identity element");
    if (e == 0) return std::make_shared<GroupTable>(table);
    std::vector<int> to_new(m);
    for (int g = 0; g < m; ++g) to_new[g] = (g == e) ? 0 : (g < e ? g + 1 : g);
    std::vector<std::vector<int>> re(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) re[to_new[a]][to_new[b]] = to_new[table[a][b]];
    return std::make_shared<GroupTable>(std::move(re));
}

// BFS word order over the generators: identity first, then for each known
// element w (in discovery order) the products w*gen[0], w*gen[1], ... give the
// new elements. Permutations compose as (p*q)(x) = p(q(x)).
struct PermutationGroup {
    GroupPtr group;
    std::vector<std::vector<int>> perms; // element index -> permutation image
};

inline PermutationGroup make_permutation_group(int degree,
                                               const std::vector<std::vector<int>>& generators) {
    if (degree <= 0) fail("NonClosed", "degree must be positive");
    for (std::size_t i = 0; i < generators.size(); ++i) {
        const auto& p = generators[i];
        if (static_cast<int>(p.size()) != degree)
            fail("NonClosed", "generator " + std::to_string(i) + " has wrong degree");
        std::vector<bool> seen(degree, false);
        for (int x : p) {
            if (x < 0 || x >= degree || seen[x])
                fail("NonClosed", "generator " + std::to_string(i) + " is not a permutation");
            seen[x] = true;
        }
    }
    std::vector<int> id(degree);
    for (int i = 0; i < degree; ++i) id[i] = i;
    std::vector<std::vector<int>> elems{id};
    std::map<std::vector<int>, int> index{{id, 0}};
    for (std::size_t w = 0; w < elems.size(); ++w) {
        for (const auto& gen : generators) {
            std::vector<int> prod(degree);
            for (int x = 0; x < degree; ++x) prod[x] = elems[w][gen[x]];
            if (index.emplace(prod, static_cast<int>(elems.size())).second)
                elems.push_back(std::move(prod));
        }
    }
    const int m = static_cast<int>(elems.size());
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            std::vector<int> prod(degree);
            for (int x = 0; x < degree; ++x) prod[x] = elems[a][elems[b][x]];
            table[a][b] = index.at(prod);
        }
    PermutationGroup out;
    out.group = std::make_shared<GroupTable>(std::move(table));
    out.perms = std::move(elems);
    return out;
}

inline GroupPtr make_group(int degree, const std::vector<std::vector<int>>& generators) {
    return make_permutation_group(degree, generators).group;
}

inline const std::vector<ConjugacyClass>& conjugacy_classes(const GroupPtr& g) {
    return g->classes();
}

// Subgroup of a fixed parent, stored as the ascending list of its elements.
class Subgroup {
public:
    Subgroup(GroupPtr parent, std::vector<int> elements)
        : parent_(std::move(parent)), elements_(std::move(elements)) {
        std::sort(elements_.begin(), elements_.end());
        elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
        if (elements_.empty() || elements_[0] != 0)
            fail("NotASubgroup", "subgroup must contain the identity");
        for (int x : elements_) check_element(parent_, x, "subgroup element");
        for (int a : elements_)
            for (int b : elements_)
                if (!contains(parent_->mul(a, b)))
                    fail("NotASubgroup", "not closed at (" + std::to_string(a) + "," +
                                             std::to_string(b) + ")");
    }

    const GroupPtr& parent() const { return parent_; }
    const std::vector<int>& elements() const { return elements_; }
    int size() const { return static_cast<int>(elements_.size()); }

    bool contains(int g) const {
        return std::binary_search(elements_.begin(), elements_.end(), g);
    }

    int local_index(int global) const {
        auto it = std::lower_bound(elements_.begin(), elements_.end(), global);
        if (it == elements_.end() || *it != global)
            fail("ElementNotInGroup", "element " + std::to_string(global) + " not in subgroup");
        return static_cast<int>(it - elements_.begin());
    }

    // The subgroup as a group table in its own local indices.
    GroupPtr table() const {
        const int k = size();
        std::vector<std::vector<int>> t(k, std::vector<int>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                t[i][j] = local_index(parent_->mul(elements_[i], elements_[j]));
        return std::make_shared<GroupTable>(std::move(t));
    }

    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return same_group(a.parent_, b.parent_) && a.elements_ == b.elements_;
    }

private:
    GroupPtr parent_;
    std::vector<int> elements_;
};

inline Subgroup whole_group(const GroupPtr& g) {
    std::vector<int> all(g->order());
    for (int i = 0; i < g->order(); ++i) all[i] = i;
    return Subgroup(g, std::move(all));
}

inline Subgroup trivial_subgroup(const GroupPtr& g) { return Subgroup(g, {0}); }

inline std::vector<int> closure_of(const GroupPtr& g, std::vector<int> seed) {
    std::set<int> have(seed.begin(), seed.end());
    have.insert(0);
    std::vector<int> work(have.begin(), have.end());
    for (std::size_t i = 0; i < work.size(); ++i)
        for (std::size_t j = 0; j < work.size(); ++j) {
            int p = g->mul(work[i], work[j]);
            if (have.insert(p).second) work.push_back(p);
            p = g->mul(work[j], work[i]);
            if (have.insert(p).second) work.push_back(p);
        }
    return {have.begin(), have.end()};
}

inline Subgroup conjugate_subgroup(const Subgroup& h, int g) {
    const GroupPtr& G = h.parent();
    check_element(G, g, "conjugating element");
    std::vector<int> elems;
    elems.reserve(h.size());
    for (int x : h.elements()) elems.push_back(G->conj(x, g));
    return Subgroup(G, std::move(elems));
}

// All subgroups by cyclic extension: every subgroup K has a generating chain
// whose next generator is always min(K \ H), so extending each found H by g
// and keeping the closure only when g = min(<H,g> \ H) reaches everything.
inline std::vector<Subgroup> enumerate_subgroups(const GroupPtr& g, int bound = 512) {
    if (g->order() > bound)
        fail("GroupTooLarge", "order " + std::to_string(g->order()) + " exceeds bound " +
                                  std::to_string(bound));
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> work;
    std::vector<int> triv{0};
    seen.insert(triv);
    work.push_back(triv);
    for (std::size_t i = 0; i < work.size(); ++i) {
        std::vector<int> h = work[i];
        std::set<int> in_h(h.begin(), h.end());
        for (int x = 1; x < g->order(); ++x) {
            if (in_h.count(x)) continue;
            std::vector<int> ext = h;
            ext.push_back(x);
            std::vector<int> k = closure_of(g, std::move(ext));
            int min_new = -1;
            for (int y : k)
                if (!in_h.count(y)) {
                    min_new = y;
                    break;
                }
            if (min_new != x) continue; // reached later via its canonical generator
            if (seen.insert(k).second) work.push_back(std::move(k));
        }
    }
    std::vector<Subgroup> out;
    out.reserve(work.size());
    for (auto& elems : work) out.emplace_back(g, std::move(elems));
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.elements() < b.elements();
    });
    return out;
}

// Minimal-index representatives of the double cosets K g H, ascending.
inline std::vector<int> double_cosets(const GroupPtr& g, const Subgroup& k, const Subgroup& h) {
    if (!same_group(g, k.parent()) || !same_group(g, h.parent()))
        fail("GroupMismatch", "double_cosets: subgroups of a different group");
    std::vector<bool> seen(g->order(), false);
    std::vector<int> reps;
    for (int x = 0; x < g->order(); ++x) {
        if (seen[x]) continue;
        reps.push_back(x);
        for (int a : k.elements())
            for (int b : h.elements()) seen[g->mul(g->mul(a, x), b)] = true;
    }
    return reps;
}

} // namespace twistk

#pragma once

#include "twistk/bredon.hpp"

namespace twistk {

// E_2 of the twisted equivariant Atiyah-Hirzebruch spectral sequence:
// H^p_G(X; R_alpha) in even rows, zero in odd rows, period 2 in q.
struct E2Page {
    int dimension = 0;
    CohomologyResult cohomology;

    DegreeResult entry(int p, long q) const {
        if (mod_pos(q, 2) == 1 || p < 0 || p > dimension) return DegreeResult{Int(0), {}};
        return cohomology.degrees[p];
    }
};

// Rational ranks of the twisted K-groups; the collapse is only rational, so
// integral torsion stays undetermined.
struct KRanks {
    Int k0_rank;
    Int k1_rank;
    std::string torsion = "undetermined";
};

inline E2Page e2_page(const GCWComplex& x, const CocycleTable& alpha) {
    if (!same_group(x.group, alpha.group))
        fail("GroupMismatch", "e2_page: cocycle lives on a different group");
    CoefficientSystem system(x.group, alpha, isotropy_family(x));
    BredonComplex cochains = bredon_cochains(x, system);
    return E2Page{x.dimension, integral_cohomology(cochains)};
}

// Even/odd free-rank sums of the E_2 page: the rational K-theory ranks.
inline KRanks rational_k_ranks(const GCWComplex& x, const CocycleTable& alpha) {
    E2Page page = e2_page(x, alpha);
    KRanks out{Int(0), Int(0)};
    for (int p = 0; p <= page.dimension; ++p) {
        if (p % 2 == 0)
            out.k0_rank += page.cohomology.degrees[p].free_rank;
        else
            out.k1_rank += page.cohomology.degrees[p].free_rank;
    }
    return out;
}

// K-theory of a single orbit G/H: K^0 is R_{alpha|H}(H) and K^1 vanishes.
struct OrbitK {
    BasisPtr k0_basis;
    Int k0_rank;
    Int k1_rank; // always zero
};

inline OrbitK orbit_k(const GroupPtr& g, const CocycleTable& alpha, const Subgroup& h) {
    if (!same_group(g, h.parent()))
        fail("GroupMismatch", "orbit_k: subgroup of a different group");
    if (!same_group(g, alpha.group))
        fail("GroupMismatch", "orbit_k: cocycle lives on a different group");
    CocycleTable local = restrict_cocycle(alpha, h);
    BasisPtr basis = alpha_character_basis(local.group, local);
    return OrbitK{basis, Int(basis->rank()), Int(0)};
}

} // namespace twistk

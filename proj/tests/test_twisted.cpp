#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <set>

using namespace twistk;
using namespace tk_test;

namespace {

CycNum zeta(long n, long k = 1) { return CycNum::root_of_unity(n, k); }

SectionCharacter nth_char(const BasisPtr& b, std::size_t i) { return b->irreducibles[i]; }

RAlphaElement unit_vector(const BasisPtr& b, std::size_t i) {
    RAlphaElement v;
    v.basis = b;
    v.coords.assign(b->rank(), 0);
    v.coords[i] = 1;
    return v;
}

// A handful of (group, cocycle) pairs covering trivial and genuine twists.
std::vector<std::pair<GroupPtr, CocycleTable>> sample_twists() {
    GroupPtr c2 = make_cyclic(2), v4 = make_v4(), s3 = make_s3(), q8 = make_q8(),
             d4 = make_d4();
    std::vector<std::pair<GroupPtr, CocycleTable>> out;
    out.emplace_back(c2, trivial_cocycle(c2, 1));
    out.emplace_back(c2, beta_c2(c2, 2, 1));
    out.emplace_back(v4, trivial_cocycle(v4, 1));
    out.emplace_back(v4, alpha_xy_v4(v4));
    out.emplace_back(s3, trivial_cocycle(s3, 1));
    out.emplace_back(s3, h2_group(s3, 2).generators[0]);
    out.emplace_back(q8, h2_group(q8, 2).generators[0]);
    out.emplace_back(d4, h2_group(d4, 2).generators[0]);
    return out;
}

} // namespace

TEST_CASE("an explicit projective representation certifies the V4 twisted basis") {
    GroupPtr v4 = make_v4();
    CocycleTable a = alpha_xy_v4(v4);

    // rho(e) = I, rho(a) = sigma_x, rho(b) = sigma_z, rho(ab) = sigma_x sigma_z
    using M2 = std::array<std::array<long, 2>, 2>;
    auto mul2 = [](const M2& p, const M2& q) {
        M2 r{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) r[i][j] += p[i][k] * q[k][j];
        return r;
    };
    std::array<M2, 4> rho = {M2{{{1, 0}, {0, 1}}}, M2{{{0, 1}, {1, 0}}},
                             M2{{{1, 0}, {0, -1}}}, M2{{{0, -1}, {1, 0}}}};
    // the multiplication law rho(g) rho(h) = (-1)^alpha(g,h) rho(gh) holds
    for (int g = 0; g < 4; ++g)
        for (int h = 0; h < 4; ++h) {
            M2 lhs = mul2(rho[g], rho[h]);
            long sign = a.entries[g][h] ? -1 : 1;
            const M2& target = rho[v4->mul(g, h)];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) REQUIRE(lhs[i][j] == sign * target[i][j]);
        }

    // so (2,0,0,0) is a genuine alpha-character; the computed basis is exactly it
    BasisPtr b = alpha_character_basis(v4, a);
    REQUIRE(b->rank() == 1);
    CHECK(nth_char(b, 0).degree() == 2);
    for (int g = 0; g < 4; ++g)
        CHECK(nth_char(b, 0).values[g] == CycNum(rho[g][0][0] + rho[g][1][1]));
}

TEST_CASE("untwisted bases coincide with the ordinary character table") {
    GroupPtr s3 = make_s3();
    BasisPtr b = alpha_character_basis(s3, trivial_cocycle(s3, 1));
    CharacterTable t = character_table(s3);
    REQUIRE(b->rank() == t.count());
    for (std::size_t i = 0; i < b->rank(); ++i)
        for (int g = 0; g < 6; ++g) CHECK(nth_char(b, i).values[g] == t.value(i, g));
}

TEST_CASE("C2 with the square twist has the two fourth-root characters") {
    GroupPtr c2 = make_cyclic(2);
    BasisPtr b = alpha_character_basis(c2, beta_c2(c2, 2, 1));
    REQUIRE(b->rank() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(nth_char(b, i).values[0] == CycNum(1));
        // rho(a)^2 = zeta_2^{beta(a,a)} rho(e) = -1, so the value at a is +-i
        CHECK(nth_char(b, i).values[1] * nth_char(b, i).values[1] == CycNum(-1));
    }
    CHECK(nth_char(b, 0).values[1] == -zeta(4)); // sorted: -i before i
    CHECK(nth_char(b, 1).values[1] == zeta(4));
}

TEST_CASE("basis cache is structural") {
    GroupPtr v4 = make_v4();
    BasisPtr b1 = alpha_character_basis(v4, alpha_xy_v4(v4));
    BasisPtr b2 = alpha_character_basis(v4, alpha_xy_v4(v4));
    CHECK(b1.get() == b2.get());
    // a rebuilt (pointer-distinct) group with the same table hits the cache too
    GroupPtr v4b = make_v4();
    CHECK(v4b.get() != v4.get());
    BasisPtr b3 = alpha_character_basis(v4b, alpha_xy_v4(v4b));
    CHECK(b3.get() == b1.get());
}

TEST_CASE("sum of squared degrees and orthonormality across sample twists") {
    for (const auto& [g, alpha] : sample_twists()) {
        BasisPtr b = alpha_character_basis(g, alpha);
        Int sq = 0;
        for (std::size_t i = 0; i < b->rank(); ++i) {
            Int d = nth_char(b, i).degree();
            CHECK(d > 0);
            sq += d * d;
            // the class order of the twist divides every degree
            CHECK(d % class_order(alpha) == 0);
        }
        CHECK(sq == g->order());
        for (std::size_t i = 0; i < b->rank(); ++i)
            for (std::size_t j = 0; j < b->rank(); ++j) {
                CycNum ip = section_inner_product(nth_char(b, i), nth_char(b, j));
                CHECK(ip == (i == j ? CycNum(1) : CycNum(0)));
            }
    }
}

TEST_CASE("decompose inverts expand") {
    for (const auto& [g, alpha] : sample_twists()) {
        BasisPtr b = alpha_character_basis(g, alpha);
        for (std::size_t i = 0; i < b->rank(); ++i) {
            RAlphaElement e = unit_vector(b, i);
            std::vector<CycNum> vals = expand(e);
            CHECK(vals == nth_char(b, i).values);
            SectionCharacter chi{g, alpha, vals};
            RAlphaElement back = decompose(chi, b);
            CHECK(back.coords == e.coords);
        }
    }
}

TEST_CASE("regular character decomposes into degrees") {
    for (const auto& [g, alpha] : sample_twists()) {
        BasisPtr b = alpha_character_basis(g, alpha);
        SectionCharacter reg{g, alpha, std::vector<CycNum>(g->order())};
        reg.values[0] = CycNum(g->order());
        RAlphaElement v = decompose(reg, b);
        for (std::size_t i = 0; i < b->rank(); ++i)
            CHECK(v.coords[i] == nth_char(b, i).degree());
    }
}

TEST_CASE("decompose rejects non-integral combinations") {
    GroupPtr v4 = make_v4();
    BasisPtr b = alpha_character_basis(v4, trivial_cocycle(v4, 1));
    SectionCharacter bad{v4, trivial_cocycle(v4, 1),
                         {CycNum(1), CycNum(0), CycNum(0), CycNum(0)}};
    CHECK_THROWS_WITH(decompose(bad, b), Catch::Matchers::ContainsSubstring("NotIntegral"));
    // mismatched twists are rejected up front
    SectionCharacter wrong{v4, alpha_xy_v4(v4), {CycNum(2), CycNum(0), CycNum(0), CycNum(0)}};
    CHECK_THROWS_WITH(section_inner_product(bad, wrong),
                      Catch::Matchers::ContainsSubstring("TwistMismatch"));
}

TEST_CASE("restriction to the whole group is the identity") {
    GroupPtr v4 = make_v4();
    CocycleTable a = alpha_xy_v4(v4);
    CHECK(restriction_matrix(v4, a, whole_group(v4)) == identity_mat(1));
    GroupPtr s3 = make_s3();
    CHECK(restriction_matrix(s3, trivial_cocycle(s3, 1), whole_group(s3)) == identity_mat(3));
}

TEST_CASE("restriction of linear characters lands on basis vectors") {
    GroupPtr v4 = make_v4();
    CocycleTable triv = trivial_cocycle(v4, 1);
    for (int x = 1; x < 4; ++x) {
        Subgroup h(v4, {0, x});
        IntMat r = restriction_matrix(v4, triv, h);
        REQUIRE(n_rows(r) == 2);
        REQUIRE(n_cols(r) == 4);
        for (std::size_t j = 0; j < 4; ++j) {
            Int colsum = 0;
            for (std::size_t i = 0; i < 2; ++i) {
                CHECK((r[i][j] == 0 || r[i][j] == 1));
                colsum += r[i][j];
            }
            CHECK(colsum == 1); // each linear character restricts to one linear
        }
    }
}

TEST_CASE("the twisted V4 character restricts to both linears of each axis") {
    GroupPtr v4 = make_v4();
    CocycleTable a = alpha_xy_v4(v4);
    IntMat r = restriction_matrix(v4, a, Subgroup(v4, {0, 1}));
    CHECK(r == IntMat{{1}, {1}});
    r = restriction_matrix(v4, a, Subgroup(v4, {0, 2}));
    CHECK(r == IntMat{{1}, {1}});
    r = restriction_matrix(v4, a, Subgroup(v4, {0, 3}));
    CHECK(r == IntMat{{1}, {1}});
    // restricting to the trivial subgroup counts the degree
    r = restriction_matrix(v4, a, trivial_subgroup(v4));
    CHECK(r == IntMat{{2}});
}

TEST_CASE("restriction is transitive along a subgroup chain") {
    GroupPtr d4 = make_d4();
    for (const CocycleTable& alpha :
         {trivial_cocycle(d4, 1), h2_group(d4, 2).generators[0],
          h2_group(d4, 2).generators[1]}) {
        // r = the rotation; <r^2> <= <r> <= D4
        std::vector<int> rot = closure_of(d4, {1});
        Subgroup k(d4, rot);
        REQUIRE(k.size() == 4);
        int r2 = d4->mul(1, 1);
        Subgroup h(d4, closure_of(d4, {r2}));
        REQUIRE(h.size() == 2);

        IntMat res_gk = restriction_matrix(d4, alpha, k);
        IntMat res_gh = restriction_matrix(d4, alpha, h);
        // H in K-local indices
        CocycleTable alpha_k = restrict_cocycle(alpha, k);
        std::vector<int> h_local;
        for (int x : h.elements()) h_local.push_back(k.local_index(x));
        IntMat res_kh = restriction_matrix(alpha_k.group, alpha_k, Subgroup(alpha_k.group, h_local));
        CHECK(mat_mul(res_kh, res_gk) == res_gh);
    }
}

TEST_CASE("inner conjugations are the identity") {
    for (const auto& [g, alpha] : sample_twists())
        for (const Subgroup& h : enumerate_subgroups(g))
            for (int t : h.elements()) {
                IntMat c = conjugation_matrix(g, alpha, h, t);
                CHECK(c == identity_mat(n_rows(c)));
            }
}

TEST_CASE("centralizing conjugations are the identity for untwisted coefficients") {
    for (const GroupPtr& g : {make_v4(), make_s3(), make_d4()}) {
        CocycleTable triv = trivial_cocycle(g, 1);
        for (const Subgroup& h : enumerate_subgroups(g))
            for (int t = 0; t < g->order(); ++t) {
                bool central = true;
                for (int x : h.elements())
                    if (g->mul(t, x) != g->mul(x, t)) central = false;
                if (!central) continue;
                IntMat c = conjugation_matrix(g, triv, h, t);
                CHECK(c == identity_mat(n_rows(c)));
            }
    }
}

TEST_CASE("twisted conjugation carries the commutator pairing") {
    // discrete torsion: conjugating <a> by the centralizing b swaps the two
    // characters, because alpha(b,a) - alpha(a,b) = 1
    GroupPtr v4 = make_v4();
    CocycleTable a = alpha_xy_v4(v4);
    IntMat swap{{0, 1}, {1, 0}};
    CHECK(conjugation_matrix(v4, a, Subgroup(v4, {0, 1}), 2) == swap);
    CHECK(conjugation_matrix(v4, a, Subgroup(v4, {0, 1}), 3) == swap);
    CHECK(conjugation_matrix(v4, a, Subgroup(v4, {0, 2}), 1) == swap);
    CHECK(conjugation_matrix(v4, a, Subgroup(v4, {0, 3}), 1) == swap);
    // and the round trip composes to the identity (axiom 2 instance)
    IntMat fwd = conjugation_matrix(v4, a, Subgroup(v4, {0, 1}), 2);
    IntMat back = conjugation_matrix(v4, a, Subgroup(v4, {0, 1}), v4->inv(2));
    CHECK(mat_mul(back, fwd) == identity_mat(2));
}

TEST_CASE("conjugation transports characters between conjugate subgroups") {
    GroupPtr s3 = make_s3();
    CocycleTable triv = trivial_cocycle(s3, 1);
    int trans = -1, rot = -1;
    for (int x = 1; x < 6; ++x) {
        if (s3->element_order(x) == 2 && trans < 0) trans = x;
        if (s3->element_order(x) == 3 && rot < 0) rot = x;
    }
    Subgroup h(s3, closure_of(s3, {trans}));
    Subgroup k = conjugate_subgroup(h, rot);
    CHECK(k.elements() != h.elements()); // genuinely moved
    IntMat c = conjugation_matrix(s3, triv, h, rot);
    REQUIRE(n_rows(c) == 2);
    // a permutation matrix: the trivial and sign characters map to their twins
    std::set<std::vector<Int>> cols;
    for (std::size_t j = 0; j < 2; ++j) cols.insert({c[0][j], c[1][j]});
    CHECK(cols == std::set<std::vector<Int>>{{Int(0), Int(1)}, {Int(1), Int(0)}});
    // identity once values are matched up: conj must send chi to chi circ conj
    BasisPtr bh = alpha_character_basis(h.table(), restrict_cocycle(triv, h));
    BasisPtr bk = alpha_character_basis(k.table(), restrict_cocycle(triv, k));
    for (std::size_t j = 0; j < 2; ++j) {
        std::size_t i = c[0][j] == 1 ? 0 : 1;
        for (int x : k.elements()) {
            int back = s3->mul(s3->mul(s3->inv(rot), x), rot);
            CHECK(bk->irreducibles[i].values[k.local_index(x)] ==
                  bh->irreducibles[j].values[h.local_index(back)]);
        }
    }
}

TEST_CASE("induction from the whole group is the identity") {
    GroupPtr v4 = make_v4();
    CocycleTable a = alpha_xy_v4(v4);
    CHECK(induction_matrix(v4, a, whole_group(v4)) == identity_mat(1));
}

TEST_CASE("induction from the trivial subgroup gives the regular element") {
    GroupPtr c2 = make_cyclic(2);
    CocycleTable triv = trivial_cocycle(c2, 1);
    IntMat ind = induction_matrix(c2, triv, trivial_subgroup(c2));
    CHECK(ind == IntMat{{1}, {1}}); // both linears appear once

    GroupPtr v4 = make_v4();
    CocycleTable a = alpha_xy_v4(v4);
    // inducing the trivial character of <a> hits the degree-2 character once
    CHECK(induction_matrix(v4, a, Subgroup(v4, {0, 1})) == IntMat{{1, 1}});
    // from the trivial subgroup: alpha-regular representation = 2 copies
    CHECK(induction_matrix(v4, a, trivial_subgroup(v4)) == IntMat{{2}});
}

TEST_CASE("Frobenius reciprocity on sample twists") {
    for (const auto& [g, alpha] : sample_twists())
        for (const Subgroup& h : enumerate_subgroups(g))
            CHECK(restriction_matrix(g, alpha, h) == transpose(induction_matrix(g, alpha, h)));
}

TEST_CASE("twisted product with the unit is the identity") {
    for (const auto& [g, alpha] : sample_twists()) {
        NormalizedCocycle norm = normalize_cocycle(alpha);
        BasisPtr b = alpha_character_basis(g, norm.cocycle);
        // the unit: trivial character in the untwisted basis
        BasisPtr triv_b = alpha_character_basis(g, trivial_cocycle(g, 1));
        SectionCharacter one{g, trivial_cocycle(g, 1), std::vector<CycNum>(g->order(), CycNum(1))};
        RAlphaElement unit = decompose(one, triv_b);
        for (std::size_t i = 0; i < b->rank(); ++i) {
            RAlphaElement x = unit_vector(b, i);
            RAlphaElement xu = twisted_product(x, unit);
            RAlphaElement ux = twisted_product(unit, x);
            CHECK(xu.basis->cocycle.entries == b->cocycle.entries);
            CHECK(xu.coords == x.coords);
            CHECK(ux.coords == x.coords);
        }
    }
}

TEST_CASE("squaring the twisted V4 character yields all four linears") {
    GroupPtr v4 = make_v4();
    BasisPtr b = alpha_character_basis(v4, alpha_xy_v4(v4));
    RAlphaElement chi = unit_vector(b, 0);
    RAlphaElement sq = twisted_product(chi, chi);
    // the sum cocycle alpha + alpha vanishes entrywise: untwisted coefficients
    for (const auto& row : sq.basis->cocycle.entries)
        for (long v : row) CHECK(v == 0);
    CHECK(sq.coords == std::vector<Int>{1, 1, 1, 1});
    // the four basis characters are exactly the linear characters of V4
    CharacterTable t = character_table(v4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(sq.basis->irreducibles[i].degree() == 1);
        CHECK(sq.basis->irreducibles[i].values ==
              std::vector<CycNum>{t.value(i, 0), t.value(i, 1), t.value(i, 2), t.value(i, 3)});
    }
    CHECK(expand(sq) == std::vector<CycNum>{CycNum(4), CycNum(0), CycNum(0), CycNum(0)});
}

TEST_CASE("twisted product is commutative and associative") {
    GroupPtr q8 = make_q8();
    H2Description h2 = h2_group(q8, 2);
    std::vector<CocycleTable> twists{trivial_cocycle(q8, 1)};
    for (const auto& gen : h2.generators) twists.push_back(gen);

    std::vector<RAlphaElement> elems;
    for (const auto& alpha : twists) {
        BasisPtr b = alpha_character_basis(q8, alpha);
        elems.push_back(unit_vector(b, 0));
        elems.push_back(unit_vector(b, b->rank() - 1));
    }
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = i; j < elems.size(); ++j) {
            RAlphaElement xy = twisted_product(elems[i], elems[j]);
            RAlphaElement yx = twisted_product(elems[j], elems[i]);
            CHECK(xy.basis.get() == yx.basis.get());
            CHECK(xy.coords == yx.coords);
        }
    for (std::size_t i = 0; i < elems.size(); i += 3)
        for (std::size_t j = 1; j < elems.size(); j += 3)
            for (std::size_t k = 2; k < elems.size(); k += 3) {
                RAlphaElement l =
                    twisted_product(twisted_product(elems[i], elems[j]), elems[k]);
                RAlphaElement r =
                    twisted_product(elems[i], twisted_product(elems[j], elems[k]));
                CHECK(l.basis.get() == r.basis.get());
                CHECK(l.coords == r.coords);
            }
}

TEST_CASE("phi embedding check passes on sample twists") {
    for (const auto& [g, alpha] : sample_twists()) {
        Report r = phi_embedding_check(g, alpha);
        CHECK(r.passed);
        CHECK(r.checks == g->order() * g->order() + 1);
        CHECK(r.failures.empty());
    }
}

TEST_CASE("phi of the C2 square twist squares to minus one") {
    // independent expansion: phi(a~) = (1/2)(a,s^0) - (1/2)(a,s^1) inside
    // C[C4]; its square must be zeta_2^{beta(a,a)} phi(e~) = -phi(e~)
    GroupPtr c2 = make_cyclic(2);
    CocycleTable beta = beta_c2(c2, 2, 1);
    CentralExtension ext = central_extension(c2, beta);
    const GroupPtr& t = ext.total;
    std::vector<CycNum> phi_a(4), phi_e(4);
    for (long j = 0; j < 2; ++j) {
        phi_a[ext.index_of(1, j)] = zeta(2, -j).scaled(Rational(1, 2));
        phi_e[ext.index_of(0, j)] = zeta(2, -j).scaled(Rational(1, 2));
    }
    std::vector<CycNum> sq(4);
    for (int s = 0; s < 4; ++s)
        for (int u = 0; u < 4; ++u)
            if (!phi_a[s].is_zero() && !phi_a[u].is_zero()) sq[t->mul(s, u)] += phi_a[s] * phi_a[u];
    for (int s = 0; s < 4; ++s) CHECK(sq[s] == -phi_e[s]);
}

TEST_CASE("mackey verification passes on the standard examples") {
    GroupPtr v4 = make_v4();
    Report r = verify_mackey(v4, alpha_xy_v4(v4));
    CHECK(r.passed);
    CHECK(r.failures.empty());
    // 5 subgroups: 5 pairs-of-subgroup checks quadratically, plus the rest
    CHECK(r.checks > 25);

    GroupPtr s3 = make_s3();
    r = verify_mackey(s3, trivial_cocycle(s3, 1));
    CHECK(r.passed);

    r = verify_mackey(s3, h2_group(s3, 2).generators[0]);
    CHECK(r.passed);
}

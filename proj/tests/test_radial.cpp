#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "modcell/radial.hpp"
#include "oracles.hpp"

using namespace modcell;

namespace {

CombinatorialType make(int h, int m, std::vector<Annulus> annuli, std::vector<int> pairing, std::vector<int> level,
                       int levels, bool at_inner = false, bool at_outer = false) {
    CombinatorialType t;
    t.h = h;
    t.m = m;
    t.annuli = std::move(annuli);
    t.pairing = std::move(pairing);
    t.level = std::move(level);
    t.levels = levels;
    t.at_inner = at_inner;
    t.at_outer = at_outer;
    return t;
}

CombinatorialType cylinder(bool on_real_line) { return make(0, 1, {{on_real_line, {{0}}}}, {}, {}, 0); }

// one pair of slits and two points, every stack a singleton
CombinatorialType generic() { return make(1, 2, {{false, {{0}, {2}, {1}, {3}}}}, {1, 0}, {1, 1}, 1); }

std::set<std::vector<int>> encodings(const std::vector<CombinatorialType>& ts) {
    std::set<std::vector<int>> out;
    for (const auto& t : ts) out.insert(encode(t));
    return out;
}

}  // namespace

TEST(ValidateType, CylinderIsValid) {
    EXPECT_TRUE(validate_type(cylinder(false)).empty());
    EXPECT_TRUE(validate_type(cylinder(true)).empty());
}

TEST(ValidateType, PairedSlitsOnDifferentLevels) {
    auto t = make(1, 2, {{false, {{0}, {2}, {1}, {3}}}}, {1, 0}, {1, 2}, 2);
    EXPECT_TRUE(has_condition(validate_type(t), "(ii)"));
}

TEST(ValidateType, TooFewBoundaryCycles) {
    auto t = make(1, 3, {{false, {{0}, {2}, {1}, {3}, {4}}}}, {1, 0}, {1, 1}, 1);
    EXPECT_TRUE(has_condition(validate_type(t), "(iv)"));
}

TEST(ValidateType, PointsSharingAnArcSet) {
    auto t = make(1, 2, {{false, {{0}, {1}, {2}, {3}}}}, {1, 0}, {1, 1}, 1);
    EXPECT_TRUE(has_condition(validate_type(t), "(v)"));
}

TEST(ValidateType, StructuralErrors) {
    auto dup = generic();
    dup.annuli[0].positions[1] = {0};
    EXPECT_TRUE(has_condition(validate_type(dup), "(iii)"));

    auto unused = make(1, 2, {{false, {{0}, {2}, {1}, {3}}}}, {1, 0}, {2, 2}, 2);
    EXPECT_TRUE(has_condition(validate_type(unused), "levels"));

    auto fixed = generic();
    fixed.pairing = {0, 1};
    EXPECT_TRUE(has_condition(validate_type(fixed), "(ii)"));
}

TEST(MultiDegree, Cylinder) {
    EXPECT_EQ(multi_degree(cylinder(false)), (MultiDegree{{1}, 0}));
    EXPECT_EQ(multi_degree(cylinder(true)), (MultiDegree{{0}, 0}));
}

TEST(MultiDegree, CountsDividersAndInteriorLevels) {
    EXPECT_EQ(multi_degree(generic()), (MultiDegree{{4}, 1}));
    auto t = generic();
    t.at_outer = true;
    EXPECT_EQ(multi_degree(t).annular, 0);
    t.annuli[0].first_at_zero = true;
    EXPECT_EQ(multi_degree(t).radial[0], 3);
}

TEST(Jumps, GenericTypeHasSingletonOrbit) {
    EXPECT_EQ(jump_orbit(generic()).size(), 1u);
    EXPECT_FALSE(is_degenerate(generic()));
}

TEST(Jumps, PointAboveSlitJumps) {
    const auto t = face(generic(), 0, 1);  // stack [0 2]
    const auto orbit = jump_orbit(t);
    ASSERT_EQ(orbit.size(), 2u);
    // the point moves next to the partner slit
    bool moved = false;
    for (const auto& s : orbit[1].annuli[0].positions)
        moved = moved || (std::find(s.begin(), s.end(), 1) != s.end() && std::find(s.begin(), s.end(), 2) != s.end());
    EXPECT_TRUE(moved);
    EXPECT_EQ(canonicalize(orbit[0]), canonicalize(orbit[1]));
    for (const auto& u : orbit) EXPECT_TRUE(is_valid(u));
}

TEST(Canonicalize, IdempotentAndConstantOnOrbits) {
    for (const auto& t : enumerate_types(2, 1, 1, TypeFilter::all)) {
        EXPECT_EQ(canonicalize(t), t);
        for (const auto& u : jump_orbit(t)) EXPECT_EQ(canonicalize(u), t);
    }
}

TEST(Canonicalize, SlitRelabeling) {
    std::vector<int> p{2, 0, 3, 1, 4};
    for (const auto& t : enumerate_types(2, 1, 1, TypeFilter::all)) {
        auto r = t;
        for (auto& a : r.annuli)
            for (auto& s : a.positions)
                for (auto& x : s) x = p[x];
        for (int s = 0; s < 4; ++s) {
            r.pairing[p[s]] = p[t.pairing[s]];
            r.level[p[s]] = t.level[s];
        }
        ASSERT_TRUE(is_valid(r));
        EXPECT_EQ(canonicalize(r), t);
    }
}

TEST(Degeneracy, UnilevelWithSlitsIsDegenerate) {
    for (const auto& t : enumerate_types(1, 1, 2, TypeFilter::unilevel)) EXPECT_TRUE(is_degenerate(t));
}

TEST(Degeneracy, BoundaryFlags) {
    auto t = generic();
    t.at_inner = true;
    EXPECT_TRUE(is_degenerate(t));
}

TEST(Degeneracy, CollapsingOntoSqueezedPair) {
    const auto t = make(1, 2, {{false, {{0}, {2, 1, 3}}}}, {1, 0}, {1, 1}, 1);
    ASSERT_TRUE(is_valid(t));
    EXPECT_FALSE(is_degenerate(t));
    const auto f = face(t, 0, 1);
    EXPECT_TRUE(has_squeezed_pair(f));
    EXPECT_TRUE(is_degenerate(f));
}

TEST(TypeFaces, DropDegreeOnOneAxis) {
    for (const auto& t : enumerate_types(1, 2, 1, TypeFilter::all)) {
        const auto d = multi_degree(t);
        for (int i = 0; i <= t.n(); ++i) {
            const int q = i < t.n() ? d.radial[i] : d.annular;
            for (int j = 0; q > 0 && j <= q; ++j) {
                const auto f = face(t, i, j);
                EXPECT_TRUE(is_valid(f));
                auto expected = d;
                (i < t.n() ? expected.radial[i] : expected.annular) -= 1;
                EXPECT_EQ(multi_degree(f), expected);
            }
        }
    }
}

TEST(TypeFaces, SimplicialIdentities) {
    for (const auto& t : enumerate_types(1, 1, 2, TypeFilter::all)) {
        const auto d = multi_degree(t);
        for (int i = 0; i <= t.n(); ++i) {
            const int q = i < t.n() ? d.radial[i] : d.annular;
            for (int k = 1; k < q; ++k)
                for (int j = 0; j < k; ++j)
                    EXPECT_EQ(canonicalize(face(face(t, i, k), i, j)), canonicalize(face(face(t, i, j), i, k - 1)));
        }
    }
}

TEST(TypeFaces, OutOfRange) {
    EXPECT_THROW(face(generic(), 0, 5), Error);
    EXPECT_THROW(face(generic(), 2, 0), Error);
    EXPECT_THROW(face(cylinder(true), 0, 0), Error);
}

TEST(TypeFaces, Signs) {
    const MultiDegree d{{2, 3}, 1};
    EXPECT_EQ(face_sign(d, 0, 0), 1);
    EXPECT_EQ(face_sign(d, 0, 1), -1);
    EXPECT_EQ(face_sign(d, 1, 0), 1);
    EXPECT_EQ(face_sign(d, 1, 1), -1);
    EXPECT_EQ(face_sign(d, 2, 0), -1);
}

TEST(UnilevelProjection, Properties) {
    for (const auto& t : enumerate_types(1, 2, 1, TypeFilter::nondegenerate)) {
        const auto u = unilevel_projection(t);
        EXPECT_TRUE(is_unilevel(u));
        EXPECT_TRUE(is_valid(u));
        EXPECT_EQ(unilevel_projection(u), u);
        EXPECT_EQ(u.annuli, t.annuli);
        EXPECT_EQ(u.pairing, t.pairing);
        const auto d = multi_degree(t);
        for (int i = 0; i < t.n(); ++i)
            for (int j = 0; d.radial[i] > 0 && j <= d.radial[i]; ++j)
                EXPECT_EQ(unilevel_projection(face(t, i, j)), face(u, i, j));
    }
}

TEST(EnumerateTypes, CylinderUnilevel) {
    const auto ts = enumerate_types(0, 1, 1, TypeFilter::unilevel);
    ASSERT_EQ(ts.size(), 2u);
    std::multiset<int> degrees;
    for (const auto& t : ts) degrees.insert(multi_degree(t).radial[0]);
    EXPECT_EQ(degrees, (std::multiset<int>{0, 1}));
}

TEST(EnumerateTypes, InconsistentParameters) {
    EXPECT_THROW(enumerate_types(0, 1, 2, TypeFilter::all), Error);
    EXPECT_TRUE(oracle::types_from_words(0, 1, 2, TypeFilter::all).empty());
}

TEST(EnumerateTypes, AgreesWithWordOracle) {
    const std::vector<std::array<int, 3>> families{{0, 1, 1}, {1, 1, 2}, {1, 2, 1}, {2, 1, 1}};
    for (const auto& [h, n, m] : families)
        for (auto filter : {TypeFilter::all, TypeFilter::nondegenerate, TypeFilter::unilevel})
            EXPECT_EQ(encodings(enumerate_types(h, n, m, filter)), oracle::types_from_words(h, n, m, filter))
                << h << " " << n << " " << m;
}

TEST(EnumerateTypes, OutputIsValidCanonicalAndSorted) {
    const auto ts = enumerate_types(2, 1, 1, TypeFilter::nondegenerate);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        EXPECT_TRUE(is_valid(ts[k]));
        EXPECT_EQ(canonicalize(ts[k]), ts[k]);
        if (k) EXPECT_LT(encode(ts[k - 1]), encode(ts[k]));
    }
}

TEST(EnumerateTypes, WorkersDoNotChangeResult) {
    EXPECT_EQ(enumerate_types(2, 1, 1, TypeFilter::all, 1), enumerate_types(2, 1, 1, TypeFilter::all, 3));
}

TEST(TypeJson, RoundTrip) {
    for (const auto& t : enumerate_types(1, 2, 1, TypeFilter::all)) EXPECT_EQ(type_from_json(to_json(t)), t);
}

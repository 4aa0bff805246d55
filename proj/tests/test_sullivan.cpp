#include <array>

#include <gtest/gtest.h>

#include "modcell/critical.hpp"
#include "modcell/sullivan.hpp"
#include "oracles.hpp"

using namespace modcell;

namespace {

// one chord and two free ends on a single circle
SullivanDiagram pair_of_pants() {
    SullivanDiagram d;
    d.chords = 1;
    d.m = 2;
    d.circles = {{false, {{0}, {2}, {1}, {3}}}};
    d.pairing = {1, 0};
    return d;
}

const std::vector<std::array<int, 3>> kFamilies{{0, 1, 1}, {0, 1, 2}, {0, 2, 1}, {1, 1, 1}};

}  // namespace

TEST(ValidateDiagram, PairOfPants) {
    const auto d = pair_of_pants();
    EXPECT_TRUE(validate_diagram(d).empty());
    EXPECT_EQ(topological_type(d), (TopologicalType{0, 1, 2}));
    EXPECT_EQ(dimension(d), 4);
}

TEST(ValidateDiagram, Violations) {
    auto bare = pair_of_pants();
    bare.circles.push_back({false, {}});
    EXPECT_TRUE(has_condition(validate_diagram(bare), "attachment"));

    auto missing = pair_of_pants();
    missing.m = 1;
    EXPECT_TRUE(has_condition(validate_diagram(missing), "free-ends"));

    auto loose = pair_of_pants();
    loose.pairing = {0, 1};
    EXPECT_TRUE(has_condition(validate_diagram(loose), "structure"));

    EXPECT_THROW(induced_fat_graph(bare), Error);
}

TEST(ValidateDiagram, InducedGraphIsAdmissible) {
    for (const auto& d : enumerate_diagrams(0, 2, 1)) {
        const auto g = induced_fat_graph(d);
        EXPECT_TRUE(is_admissible(g));
        EXPECT_EQ(oracle::boundary_count(g), d.n() + d.m);
        EXPECT_EQ(static_cast<int>(admissible_cycles(g).size()), d.n());
    }
}

TEST(EnumerateDiagrams, Cylinder) {
    const auto ds = enumerate_diagrams(0, 1, 1);
    ASSERT_EQ(ds.size(), 2u);
    for (const auto& d : ds) EXPECT_EQ(topological_type(d), (TopologicalType{0, 1, 1}));
}

TEST(EnumerateDiagrams, NeedsIncomingAndOutgoing) {
    EXPECT_THROW(enumerate_diagrams(0, 1, 0), Error);
    EXPECT_THROW(enumerate_diagrams(0, 0, 1), Error);
}

TEST(EnumerateDiagrams, CountsMatchUnilevelTypes) {
    for (const auto& [g, n, m] : kFamilies) {
        const auto ds = enumerate_diagrams(g, n, m);
        EXPECT_EQ(ds.size(), enumerate_types(slit_pairs_for(g, n, m), n, m, TypeFilter::unilevel).size());
        for (const auto& d : ds) {
            EXPECT_TRUE(is_valid(d));
            EXPECT_EQ(canonicalize(d), d);
            EXPECT_EQ(topological_type(d), (TopologicalType{g, n, m}));
        }
    }
}

TEST(Bijection, MutuallyInverse) {
    for (const auto& [g, n, m] : kFamilies) {
        for (const auto& t : enumerate_types(slit_pairs_for(g, n, m), n, m, TypeFilter::unilevel))
            EXPECT_EQ(g_map(f_map(t)), t);
        for (const auto& d : enumerate_diagrams(g, n, m)) EXPECT_EQ(f_map(g_map(d)), d);
    }
}

TEST(Bijection, ConstantOnJumpOrbits) {
    for (const auto& t : enumerate_types(2, 1, 1, TypeFilter::unilevel)) {
        const auto d = f_map(t);
        for (const auto& u : jump_orbit(t)) EXPECT_EQ(f_map(u), d);
    }
}

TEST(Bijection, RejectsMultilevelTypes) {
    const auto t = enumerate_types(1, 1, 2, TypeFilter::nondegenerate).front();
    EXPECT_THROW(f_map(t), Error);
}

TEST(Bijection, CommutesWithFaces) {
    for (const auto& [g, n, m] : kFamilies)
        for (const auto& d : enumerate_diagrams(g, n, m)) {
            const auto t = g_map(d);
            const auto deg = multi_degree(t);
            for (int i = 0; i < n; ++i)
                for (int j = 0; deg.radial[i] > 0 && j <= deg.radial[i]; ++j) {
                    const auto f = sd_face(d, i, j);
                    EXPECT_EQ(dimension(f), dimension(d) - 1);
                    EXPECT_EQ(f, f_map(canonicalize(face(t, i, j))));
                }
        }
}

TEST(DiagramFaces, OutOfRange) {
    const auto d = pair_of_pants();
    EXPECT_THROW(sd_face(d, 1, 0), Error);
    EXPECT_THROW(sd_face(d, 0, 5), Error);
}

TEST(FromAdmissible, InducedGraphGivesTheDiagramBack) {
    for (const auto& d : enumerate_diagrams(1, 1, 1)) EXPECT_EQ(from_admissible(induced_fat_graph(d)), d);
}

TEST(FromAdmissible, RetractsCriticalGraphs) {
    // sliding every vertex of a critical graph onto the admissible cycles
    // lands on the diagram of the unilevel projection
    for (const auto& [h, n, m] : std::vector<std::array<int, 3>>{{1, 1, 2}, {1, 2, 1}, {2, 1, 1}})
        for (const auto& t : enumerate_types(h, n, m, TypeFilter::nondegenerate))
            EXPECT_EQ(from_admissible(critical_graph(t)), f_map(canonicalize(unilevel_projection(t)))) << to_text(t);
}

TEST(FromAdmissible, InvariantUnderSlides) {
    for (const auto& t : enumerate_types(2, 1, 1, TypeFilter::nondegenerate)) {
        const auto cg = critical_graph(t);
        const auto expected = from_admissible(cg);
        std::set<int> on_circle;
        for (const auto& c : admissible_cycles(cg)) on_circle.insert(c.vertices.begin(), c.vertices.end());
        const auto edges = cg.edges();
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            const int a = cg.source(edges[e].first), b = cg.source(edges[e].second);
            if (a == b || cg.is_leaf_edge(edges[e].first) || (on_circle.count(a) && on_circle.count(b))) continue;
            EXPECT_EQ(from_admissible(collapse_forest(cg, {e})), expected);
        }
    }
}

TEST(FromAdmissible, RejectsNonAdmissible) {
    // one vertex, the incoming boundary runs through it twice
    std::vector<int> sigma{2, 1, 6, 4, 8, 0, 3, 7, 5, 9};
    const auto g = FatGraph::from_rotation(sigma, {1, 0, 3, 2, 5, 4, 7, 6, 9, 8},
                                           {{1, 0, LeafDirection::incoming},
                                            {7, 0, LeafDirection::outgoing},
                                            {9, 1, LeafDirection::outgoing}});
    ASSERT_TRUE(validate_closed(g).empty());
    EXPECT_THROW(from_admissible(g), Error);
}

TEST(DiagramJson, RoundTrip) {
    for (const auto& d : enumerate_diagrams(0, 2, 1)) {
        const auto j = to_json(d);
        EXPECT_TRUE(j.contains("circles"));
        EXPECT_TRUE(j.contains("chords"));
        EXPECT_TRUE(j.contains("free_order"));
        EXPECT_EQ(diagram_from_json(j), d);
    }
}

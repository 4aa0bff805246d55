#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "modcell/critical.hpp"
#include "modcell/fat_graph.hpp"
#include "oracles.hpp"

using namespace modcell;

namespace {

std::vector<int> sigma_from(const std::vector<std::vector<int>>& rotations, int n) {
    std::vector<int> s(n);
    std::iota(s.begin(), s.end(), 0);
    for (const auto& r : rotations)
        for (std::size_t k = 0; k < r.size(); ++k) s[r[k]] = r[(k + 1) % r.size()];
    return s;
}

FatGraph figure_eight(bool twisted) {
    // a=0, a'=1, b=2, b'=3
    const std::vector<int> rot = twisted ? std::vector<int>{0, 2, 1, 3} : std::vector<int>{0, 1, 2, 3};
    return FatGraph::from_rotation(sigma_from({rot}, 4), {1, 0, 3, 2}, {});
}

FatGraph theta() { return FatGraph::from_rotation(sigma_from({{0, 2, 4}, {1, 5, 3}}, 6), {1, 0, 3, 2, 5, 4}, {}); }

FatGraph relabel(const FatGraph& g, const std::vector<int>& p) {
    const int n = g.half_edge_count();
    std::vector<int> s(n), i(n);
    for (int h = 0; h < n; ++h) {
        s[p[h]] = p[g.sigma(h)];
        i[p[h]] = p[g.pair(h)];
    }
    std::vector<LeafSpec> leaves;
    for (const auto& l : g.leaves()) leaves.push_back({p[g.leaf_half_edge(l)], l.index, l.direction});
    return FatGraph::from_rotation(s, i, leaves);
}

// in-leaf x=0/1, loops a=2/3 and b=4/5, out-leaves y=6/7 and z=8/9
FatGraph single_vertex(const std::vector<int>& rot) {
    return FatGraph::from_rotation(sigma_from({rot}, 10), {1, 0, 3, 2, 5, 4, 7, 6, 9, 8},
                                   {{1, 0, LeafDirection::incoming},
                                    {7, 0, LeafDirection::outgoing},
                                    {9, 1, LeafDirection::outgoing}});
}

}  // namespace

TEST(BoundaryCycles, PlanarFigureEightHasThree) {
    const auto cycles = boundary_permutation(figure_eight(false));
    ASSERT_EQ(cycles.size(), 3u);
    std::vector<std::vector<int>> expected{{0, 2}, {1}, {3}};
    EXPECT_EQ(cycles, expected);
}

TEST(BoundaryCycles, TwistedFigureEightHasOne) {
    const auto cycles = boundary_permutation(figure_eight(true));
    ASSERT_EQ(cycles.size(), 1u);
    EXPECT_EQ(cycles[0], (std::vector<int>{0, 3, 1, 2}));
}

TEST(BoundaryCycles, PartitionHalfEdges) {
    for (const auto& t : enumerate_types(1, 1, 2, TypeFilter::nondegenerate)) {
        const auto g = critical_graph(t);
        std::vector<int> all;
        for (const auto& c : boundary_cycles(g)) all.insert(all.end(), c.begin(), c.end());
        std::sort(all.begin(), all.end());
        ASSERT_EQ(static_cast<int>(all.size()), g.half_edge_count());
        for (int h = 0; h < g.half_edge_count(); ++h) EXPECT_EQ(all[h], h);
    }
}

TEST(SurfaceType, FigureEights) {
    EXPECT_EQ(surface_type(figure_eight(false)).genus, 0);
    EXPECT_EQ(surface_type(figure_eight(false)).boundary_count, 3);
    EXPECT_EQ(surface_type(figure_eight(true)).genus, 1);
    EXPECT_EQ(surface_type(figure_eight(true)).boundary_count, 1);
}

TEST(SurfaceType, CycleGraphIsCylinder) {
    const auto g = FatGraph::from_rotation(sigma_from({{0, 3}, {1, 2}}, 4), {1, 0, 3, 2}, {});
    EXPECT_EQ(surface_type(g).genus, 0);
    EXPECT_EQ(surface_type(g).boundary_count, 2);
}

TEST(SurfaceType, DisconnectedThrows) {
    const auto g = FatGraph::from_rotation({0, 1, 2, 3}, {1, 0, 3, 2}, {});
    EXPECT_THROW(surface_type(g), Error);
}

TEST(SurfaceType, MatchesOracleOnCriticalGraphs) {
    for (const auto& t : enumerate_types(2, 1, 1, TypeFilter::nondegenerate)) {
        const auto g = critical_graph(t);
        EXPECT_EQ(surface_type(g).genus, oracle::genus(g));
        EXPECT_EQ(surface_type(g).boundary_count, oracle::boundary_count(g));
    }
}

TEST(CollapseForest, ThetaEdge) {
    const auto g = theta();
    const auto q = collapse_forest(g, {0});
    EXPECT_EQ(q.vertex_count(), 1);
    EXPECT_EQ(q.valence(0), 4);
    EXPECT_EQ(oracle::boundary_count(q), 3);
    EXPECT_EQ(oracle::boundary_count(g), 3);
}

TEST(CollapseForest, EmptyForestIsIdentity) {
    const auto g = theta();
    EXPECT_EQ(canonical_label(collapse_forest(g, {})), canonical_label(g));
}

TEST(CollapseForest, Errors) {
    const auto g = theta();
    try {
        collapse_forest(g, {0, 1});
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("not a forest"), std::string::npos);
    }
    const auto c = critical_graph(enumerate_types(0, 1, 1, TypeFilter::nondegenerate).front());
    int leaf_edge = -1;
    const auto edges = c.edges();
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
        if (c.is_leaf_edge(edges[e].first)) leaf_edge = e;
    ASSERT_GE(leaf_edge, 0);
    try {
        collapse_forest(c, {leaf_edge});
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("leaf collapse forbidden"), std::string::npos);
    }
}

TEST(CollapseForest, PreservesSurfaceType) {
    for (const auto& t : enumerate_types(1, 2, 1, TypeFilter::nondegenerate)) {
        const auto g = critical_graph(t);
        const auto st = surface_type(g);
        const auto edges = g.edges();
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            if (g.is_leaf_edge(edges[e].first) || g.source(edges[e].first) == g.source(edges[e].second)) continue;
            const auto q = collapse_forest(g, {e});
            EXPECT_EQ(surface_type(q).genus, st.genus);
            EXPECT_EQ(surface_type(q).boundary_count, st.boundary_count);
            EXPECT_EQ(q.vertex_count(), g.vertex_count() - 1);
        }
    }
}

TEST(Admissible, LoopWithChord) {
    // in-leaf x, loop a, out-leaf y on the far side of the loop
    const auto g = FatGraph::from_rotation(sigma_from({{0, 2, 4, 3}}, 6), {1, 0, 3, 2, 5, 4},
                                           {{1, 0, LeafDirection::incoming}, {5, 0, LeafDirection::outgoing}});
    EXPECT_TRUE(validate_closed(g).empty());
    EXPECT_TRUE(is_admissible(g));
}

TEST(Admissible, CircleThroughOneVertexTwice) {
    const auto g = single_vertex({0, 2, 6, 3, 4, 8, 5});
    EXPECT_TRUE(validate_closed(g).empty());
    EXPECT_FALSE(is_admissible(g));
}

TEST(Admissible, NotClosedThrows) { EXPECT_THROW(is_admissible(theta()), Error); }

TEST(Admissible, CriticalGraphsAreAdmissible) {
    for (const auto& t : enumerate_types(1, 1, 2, TypeFilter::nondegenerate)) EXPECT_TRUE(is_admissible(critical_graph(t)));
}

TEST(CanonicalLabel, InvariantUnderRelabeling) {
    std::mt19937 rng(7);
    for (const auto& t : enumerate_types(1, 2, 1, TypeFilter::nondegenerate)) {
        const auto g = critical_graph(t);
        std::vector<int> p(g.half_edge_count());
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        EXPECT_EQ(canonical_label(relabel(g, p)), canonical_label(g));
    }
}

TEST(CanonicalLabel, FigureEightsDiffer) {
    EXPECT_NE(canonical_label(figure_eight(false)), canonical_label(figure_eight(true)));
}

TEST(CanonicalLabel, CollapseChangesLabel) {
    EXPECT_NE(canonical_label(theta()), canonical_label(collapse_forest(theta(), {0})));
}

TEST(CanonicalLabel, AgreesWithBruteForceIsomorphism) {
    // every fat structure on three edges, all at one or two vertices
    std::vector<FatGraph> graphs;
    std::vector<int> perm{0, 1, 2, 3, 4, 5};
    do {
        std::vector<int> s(perm.begin(), perm.end());
        try {
            graphs.push_back(FatGraph::from_rotation(s, {1, 0, 3, 2, 5, 4}, {}));
        } catch (const Error&) {
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::mt19937 rng(11);
    std::shuffle(graphs.begin(), graphs.end(), rng);
    graphs.resize(80);
    for (std::size_t a = 0; a < graphs.size(); ++a)
        for (std::size_t b = a + 1; b < graphs.size(); ++b)
            EXPECT_EQ(canonical_label(graphs[a]) == canonical_label(graphs[b]),
                      oracle::isomorphic(graphs[a], graphs[b]));
}

TEST(FatGraphMetric, UniformIsValidOnCriticalGraphs) {
    for (const auto& t : enumerate_types(1, 1, 2, TypeFilter::nondegenerate)) {
        const auto g = critical_graph(t);
        EXPECT_TRUE(validate_metric(g, uniform_metric(g)).empty());
    }
}

TEST(FatGraphMetric, Violations) {
    const auto g = critical_graph(enumerate_types(0, 1, 1, TypeFilter::nondegenerate).front());
    const auto edges = g.edges();
    const auto circle = admissible_edges(g);
    auto m = uniform_metric(g);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
        if (g.is_leaf_edge(edges[e].first)) m.lengths[e] = Rational(1, 2);
    EXPECT_TRUE(has_condition(validate_metric(g, m), "leaf-length"));

    auto z = uniform_metric(g);
    for (int e : circle) z.lengths[e] = 0;
    EXPECT_FALSE(validate_metric(g, z).empty());
}

TEST(FatGraphJson, RoundTrip) {
    for (const auto& t : enumerate_types(1, 1, 2, TypeFilter::nondegenerate)) {
        const auto g = critical_graph(t);
        EXPECT_EQ(canonical_label(fat_graph_from_json(to_json(g))), canonical_label(g));
    }
}

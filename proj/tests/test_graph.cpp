#include <gtest/gtest.h>

#include <random>

#include <linkgraph/graph.hpp>

#include "oracles.hpp"

using namespace linkgraph;

namespace {

const auto kInf = kUnreachable;

DirectedGraph path3() { return DirectedGraph(3, {{0, 1}, {1, 2}}); }
DirectedGraph cycle3() { return DirectedGraph(3, {{0, 1}, {1, 2}, {2, 0}}); }
DirectedGraph two_cycle() { return DirectedGraph(2, {{0, 1}, {1, 0}}); }

// Canonical form of a partition: smallest member of each node's component.
std::vector<NodeId> representatives(const SccDecomposition &d) {
    std::vector<NodeId> first(d.sizes.size(), UINT32_MAX), rep(d.component.size());
    for (NodeId v = 0; v < d.component.size(); ++v) first[d.component[v]] = std::min(first[d.component[v]], v);
    for (NodeId v = 0; v < d.component.size(); ++v) rep[v] = first[d.component[v]];
    return rep;
}

} // namespace

TEST(DirectedGraph, DropsSelfLoopsAndParallelEdges) {
    DirectedGraph g(3, {{0, 0}, {0, 1}, {0, 1}, {2, 1}, {1, 2}});
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_EQ(g.edge_count(), 3u);
    EXPECT_FALSE(g.has_edge(0, 0));
    EXPECT_TRUE(g.has_edge(0, 1));
}

TEST(DirectedGraph, RejectsOutOfRangeEndpoint) {
    EXPECT_THROW(DirectedGraph(2, {{0, 2}}), Error);
}

TEST(DirectedGraph, AdjacencyInvariantsOnRandomGraphs) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = oracle::random_digraph(1 + trial % 20, 0.3, rng);
        std::size_t out_total = 0, in_total = 0;
        for (NodeId i = 0; i < g.node_count(); ++i) {
            auto out = g.out_neighbors(i);
            auto in = g.in_neighbors(i);
            EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));
            EXPECT_EQ(std::adjacent_find(out.begin(), out.end()), out.end());
            EXPECT_TRUE(std::is_sorted(in.begin(), in.end()));
            for (NodeId j : out) {
                EXPECT_NE(i, j);
                auto back = g.in_neighbors(j);
                EXPECT_TRUE(std::binary_search(back.begin(), back.end(), i));
            }
            out_total += out.size();
            in_total += in.size();
        }
        EXPECT_EQ(out_total, g.edge_count());
        EXPECT_EQ(in_total, g.edge_count());
    }
}

TEST(Degrees, Examples) {
    EXPECT_EQ(degrees(two_cycle(), 0), (Degrees{1, 1, 1}));
    EXPECT_EQ(degrees(path3(), 1), (Degrees{1, 1, 2}));
    EXPECT_EQ(degrees(DirectedGraph(1, {}), 0), (Degrees{0, 0, 0}));
    EXPECT_THROW(degrees(path3(), 3), Error);
}

TEST(BfsDistances, Examples) {
    EXPECT_EQ(bfs_distances(path3(), 0), (std::vector<Distance>{0, 1, 2}));
    EXPECT_EQ(bfs_distances(path3(), 2), (std::vector<Distance>{kInf, kInf, 0}));
    EXPECT_EQ(bfs_distances(cycle3(), 1), (std::vector<Distance>{2, 0, 1}));
}

TEST(BfsDistances, TriangleInequality) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = oracle::random_digraph(12, 0.2, rng);
        std::vector<std::vector<Distance>> d;
        for (NodeId s = 0; s < g.node_count(); ++s) d.push_back(bfs_distances(g, s));
        for (NodeId i = 0; i < 12; ++i)
            for (NodeId j = 0; j < 12; ++j)
                for (NodeId k = 0; k < 12; ++k)
                    if (d[i][j] != kInf && d[j][k] != kInf) EXPECT_LE(d[i][k], d[i][j] + d[j][k]);
    }
}

TEST(ReachSet, Examples) {
    EXPECT_EQ(reach_set(path3(), 0), (std::vector<NodeId>{1, 2}));
    EXPECT_TRUE(reach_set(path3(), 2).empty());
    EXPECT_EQ(reach_set(cycle3(), 2), (std::vector<NodeId>{0, 1}));
}

TEST(Scc, CycleWithPendant) {
    DirectedGraph g(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
    auto d = scc(g);
    EXPECT_EQ(d.sizes.size(), 2u);
    EXPECT_EQ(d.largest_size(), 3u);
    EXPECT_EQ(d.component[0], d.component[1]);
    EXPECT_EQ(d.component[1], d.component[2]);
    EXPECT_NE(d.component[2], d.component[3]);
}

TEST(Scc, AcyclicPathIsAllSingletons) {
    auto d = scc(path3());
    EXPECT_EQ(d.sizes.size(), 3u);
    EXPECT_EQ(d.largest_size(), 1u);
}

TEST(Scc, TieGoesToComponentWithSmallestNode) {
    // Build the second cycle first in edge order so discovery order cannot decide the tie.
    DirectedGraph g(4, {{2, 3}, {3, 2}, {0, 1}, {1, 0}});
    auto d = scc(g);
    EXPECT_EQ(d.largest_size(), 2u);
    EXPECT_EQ(d.largest, d.component[0]);
    DirectedGraph h(5, {{3, 4}, {4, 3}, {1, 2}, {2, 1}});
    EXPECT_EQ(scc(h).largest, scc(h).component[1]);
}

TEST(Scc, MaskedNodesLoseTheirEdges) {
    std::vector<bool> mask{false, true, false};
    EXPECT_EQ(scc(cycle3(), &mask).largest_size(), 1u);
}

TEST(Scc, MatchesPairwiseReachabilityOracle) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        auto g = oracle::random_digraph(1 + trial % 8, trial % 2 ? 0.2 : 0.45, rng);
        EXPECT_EQ(representatives(scc(g)), oracle::scc_representatives(g));
    }
}

TEST(Scc, TransposeHasSamePartition) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = oracle::random_digraph(30, 0.05, rng);
        EXPECT_EQ(representatives(scc(g)), representatives(scc(g.transpose())));
    }
}

TEST(Scc, DeepPathDoesNotOverflowStack) {
    const std::size_t n = 200000;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    edges.emplace_back(static_cast<NodeId>(n - 1), 0);
    EXPECT_EQ(scc(DirectedGraph(n, std::move(edges))).largest_size(), n);
}

#include <gtest/gtest.h>

#include <cstdio>
#include <random>
#include <set>

#include <linkgraph/global_metrics.hpp>

#include "oracles.hpp"

using namespace linkgraph;

namespace {

DirectedGraph path3() { return DirectedGraph(3, {{0, 1}, {1, 2}}); }
DirectedGraph cycle3() { return DirectedGraph(3, {{0, 1}, {1, 2}, {2, 0}}); }
DirectedGraph two_cycle() { return DirectedGraph(2, {{0, 1}, {1, 0}}); }
DirectedGraph star3() { return DirectedGraph(4, {{0, 1}, {0, 2}, {0, 3}}); }

DirectedGraph clique(std::size_t k) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < k; ++u)
        for (NodeId v = 0; v < k; ++v)
            if (u != v) edges.emplace_back(u, v);
    return DirectedGraph(k, std::move(edges));
}

} // namespace

TEST(MeanDegrees, DlmfRowRoundsToPrintedValue) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<NodeId> pick(0, 907);
    std::set<std::pair<NodeId, NodeId>> edges;
    while (edges.size() < 7527) {
        auto u = pick(rng), v = pick(rng);
        if (u != v) edges.emplace(u, v);
    }
    DirectedGraph g(908, {edges.begin(), edges.end()});
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", mean_degrees(g).mean_in_degree);
    EXPECT_STREQ(buf, "8.29");
}

TEST(MeanDegrees, Examples) {
    auto a = mean_degrees(two_cycle());
    EXPECT_DOUBLE_EQ(a.mean_in_degree, 1.0);
    EXPECT_DOUBLE_EQ(a.mean_degree, 1.0);
    EXPECT_DOUBLE_EQ(*a.antiparallel_fraction, 1.0);

    auto p = mean_degrees(path3());
    EXPECT_DOUBLE_EQ(p.mean_in_degree, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(p.mean_degree, 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(*p.antiparallel_fraction, 0.0);
}

TEST(MeanDegrees, EdgelessAndEmpty) {
    EXPECT_FALSE(mean_degrees(DirectedGraph(3, {})).antiparallel_fraction.has_value());
    EXPECT_THROW(mean_degrees(DirectedGraph()), Error);
}

TEST(MeanDegrees, AntiparallelFractionMatchesPairCount) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = oracle::random_digraph(2 + trial % 60, 0.15, rng);
        if (g.edge_count() == 0) continue;
        std::size_t antiparallel_edges = 0, degree_sum = 0;
        for (auto [u, v] : g.edges())
            if (g.has_edge(v, u)) ++antiparallel_edges;
        for (NodeId i = 0; i < g.node_count(); ++i) degree_sum += degrees(g, i).total;
        // 2m − Σδ counts each antiparallel pair once per endpoint, i.e. once per edge of the pair.
        const double expected = static_cast<double>(antiparallel_edges) / static_cast<double>(degree_sum);
        EXPECT_NEAR(*mean_degrees(g).antiparallel_fraction, expected, 1e-12);
    }
}

TEST(GsccFraction, Examples) {
    EXPECT_DOUBLE_EQ(gscc_fraction(DirectedGraph(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}})), 0.75);
    EXPECT_DOUBLE_EQ(gscc_fraction(path3()), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(gscc_fraction(cycle3()), 1.0);
}

TEST(AvgDistance, Examples) {
    auto p = avg_distance(path3());
    EXPECT_EQ(p.finite_pairs, 3u);
    EXPECT_DOUBLE_EQ(*p.average, 4.0 / 3.0);
    auto c = avg_distance(cycle3());
    EXPECT_EQ(c.finite_pairs, 6u);
    EXPECT_DOUBLE_EQ(*c.average, 1.5);
    EXPECT_FALSE(avg_distance(DirectedGraph(4, {})).average.has_value());
}

TEST(AvgDistance, MatchesFloydWarshallOn200Nodes) {
    std::mt19937_64 rng(3);
    auto g = oracle::random_digraph(200, 0.01, rng);
    auto expected = oracle::distances(g);
    for (unsigned threads : {1u, 3u}) {
        auto got = avg_distance(g, threads);
        EXPECT_EQ(got.finite_pairs, expected.pairs);
        EXPECT_EQ(got.distance_sum, expected.sum);
        EXPECT_EQ(*got.average, static_cast<double>(expected.sum) / static_cast<double>(expected.pairs));
    }
}

TEST(Clustering, Examples) {
    auto c = clustering(cycle3());
    EXPECT_EQ(c.triangles, 1u);
    EXPECT_EQ(c.path_triples, 3u);
    EXPECT_DOUBLE_EQ(c.coefficient, 1.0);

    auto p = clustering(path3());
    EXPECT_DOUBLE_EQ(p.coefficient, 0.0);
    EXPECT_DOUBLE_EQ(p.second_moment, 2.0);
    EXPECT_NEAR(*p.random_coefficient, 1.0 / 16.0, 1e-15);

    auto s = clustering(star3());
    EXPECT_EQ(s.triangles, 0u);
    EXPECT_EQ(s.path_triples, 3u);
    EXPECT_DOUBLE_EQ(s.coefficient, 0.0);

    auto empty = clustering(DirectedGraph(3, {}));
    EXPECT_DOUBLE_EQ(empty.coefficient, 0.0);
    EXPECT_FALSE(empty.random_coefficient.has_value());
}

TEST(Clustering, TriangleAndTripleCountsMatchBruteForce) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = oracle::random_digraph(3 + trial % 25, 0.2, rng);
        const std::size_t n = g.node_count();
        auto linked = [&](NodeId a, NodeId b) { return g.has_edge(a, b) || g.has_edge(b, a); };
        std::uint64_t t = 0, paths = 0;
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = a + 1; b < n; ++b)
                for (NodeId c = b + 1; c < n; ++c) {
                    const int links = linked(a, b) + linked(b, c) + linked(a, c);
                    if (links == 3) ++t;
                    if (links >= 2) paths += links == 3 ? 3 : 1;
                }
        auto got = clustering(g);
        EXPECT_EQ(got.triangles, t);
        EXPECT_EQ(got.path_triples, paths);
    }
}

TEST(Clustering, SymmetricCliqueIsFullyTransitive) {
    for (std::size_t k = 3; k <= 8; ++k) {
        auto g = clique(k);
        EXPECT_DOUBLE_EQ(clustering(g).coefficient, 1.0);
        EXPECT_DOUBLE_EQ(gscc_fraction(g), 1.0);
    }
}

TEST(Assortativity, DegenerateVarianceIsUndefined) {
    EXPECT_FALSE(assortativity(path3(), DegreeEnd::Out, DegreeEnd::In).has_value());
    for (auto [a, b] : kAssortativityPairs) EXPECT_FALSE(assortativity(cycle3(), a, b).has_value());
    EXPECT_FALSE(assortativity(DirectedGraph(3, {}), DegreeEnd::Out, DegreeEnd::In).has_value());
}

TEST(Assortativity, MatchesExactPearsonOn30Nodes) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = oracle::random_digraph(30, 0.1, rng);
        for (auto [a, b] : kAssortativityPairs) {
            auto got = assortativity(g, a, b);
            auto want = oracle::pearson(g, a == DegreeEnd::In, b == DegreeEnd::In);
            ASSERT_EQ(got.has_value(), want.has_value());
            if (got) EXPECT_NEAR(*got, *want, 1e-12);
        }
    }
}

TEST(GlobalReport, BoundsHoldOnRandomGraphs) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = oracle::random_digraph(1 + trial % 40, 0.02 + 0.01 * (trial % 30), rng);
        auto r = global_report(g, 1);
        const double n = static_cast<double>(r.n);
        EXPECT_LE(r.degrees.mean_in_degree, r.degrees.mean_degree + 1e-12);
        EXPECT_LE(r.degrees.mean_degree, 2 * r.degrees.mean_in_degree + 1e-12);
        EXPECT_GE(r.gscc_fraction, 1.0 / n - 1e-15);
        EXPECT_LE(r.gscc_fraction, 1.0);
        EXPECT_GE(r.clustering.coefficient, 0.0);
        EXPECT_LE(r.clustering.coefficient, 1.0);
        for (const auto &a : r.assortativity)
            if (a) {
                EXPECT_GE(*a, -1.0);
                EXPECT_LE(*a, 1.0);
            }
    }
}

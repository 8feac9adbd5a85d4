#pragma once

// Test-only reference computations. Everything here is deliberately brute force and shares
// no code path with the library beyond the DirectedGraph container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <linkgraph/graph.hpp>

namespace oracle {

using linkgraph::DirectedGraph;
using linkgraph::NodeId;

inline constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

inline DirectedGraph random_digraph(std::size_t n, double p, std::mt19937_64 &rng) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v)
            if (u != v && coin(rng)) edges.emplace_back(u, v);
    return DirectedGraph(n, std::move(edges));
}

inline DirectedGraph from_edges(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges) {
    return DirectedGraph(n, std::move(edges));
}

// All-pairs shortest distances by Floyd–Warshall on the unit-weight adjacency matrix.
inline std::vector<std::vector<std::uint64_t>> floyd_warshall(const DirectedGraph &g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<std::uint64_t>> d(n, std::vector<std::uint64_t>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (auto [u, v] : g.edges()) d[u][v] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] != kInf && d[k][j] != kInf && d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

struct DistanceOracle {
    std::uint64_t sum = 0;
    std::uint64_t pairs = 0;
    std::vector<double> closeness, graph;
};

inline DistanceOracle distances(const DirectedGraph &g) {
    const auto d = floyd_warshall(g);
    const std::size_t n = g.node_count();
    DistanceOracle out{0, 0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t row_sum = 0, row_max = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || d[i][j] == kInf) continue;
            row_sum += d[i][j];
            row_max = std::max(row_max, d[i][j]);
            out.sum += d[i][j];
            ++out.pairs;
        }
        if (row_sum > 0) {
            out.closeness[i] = 1.0 / static_cast<double>(row_sum);
            out.graph[i] = 1.0 / static_cast<double>(row_max);
        }
    }
    return out;
}

// Canonical partition: for each node, the smallest node it is mutually reachable with.
inline std::vector<NodeId> scc_representatives(const DirectedGraph &g) {
    const auto d = floyd_warshall(g);
    const std::size_t n = g.node_count();
    std::vector<NodeId> rep(n);
    for (NodeId i = 0; i < n; ++i) {
        rep[i] = i;
        for (NodeId j = 0; j < i; ++j)
            if (d[i][j] != kInf && d[j][i] != kInf) {
                rep[i] = j;
                break;
            }
    }
    return rep;
}

struct PathCounts {
    std::vector<double> betweenness;
    std::vector<std::uint64_t> stress;
};

// Enumerates every shortest path explicitly by depth-first search over simple paths.
inline PathCounts enumerate_shortest_paths(const DirectedGraph &g) {
    const std::size_t n = g.node_count();
    const auto d = floyd_warshall(g);
    PathCounts out{std::vector<double>(n, 0.0), std::vector<std::uint64_t>(n, 0)};
    std::vector<NodeId> path;
    std::vector<std::vector<NodeId>> found;
    std::vector<bool> on_path(n, false);

    auto dfs = [&](auto &&self, NodeId u, NodeId target, std::uint64_t budget) -> void {
        if (u == target) {
            if (path.size() - 1 == d[path.front()][target]) found.push_back(path);
            return;
        }
        if (budget == 0) return;
        for (NodeId v : g.out_neighbors(u)) {
            if (on_path[v]) continue;
            on_path[v] = true;
            path.push_back(v);
            self(self, v, target, budget - 1);
            path.pop_back();
            on_path[v] = false;
        }
    };

    for (NodeId j = 0; j < n; ++j) {
        for (NodeId k = 0; k < n; ++k) {
            if (j == k || d[j][k] == kInf) continue;
            found.clear();
            path.assign(1, j);
            std::fill(on_path.begin(), on_path.end(), false);
            on_path[j] = true;
            dfs(dfs, j, k, d[j][k]);
            const auto sigma = found.size();
            std::vector<std::uint64_t> through(n, 0);
            for (const auto &p : found)
                for (std::size_t pos = 1; pos + 1 < p.size(); ++pos) ++through[p[pos]];
            for (NodeId i = 0; i < n; ++i) {
                if (i == j || i == k) continue;
                out.stress[i] += through[i];
                out.betweenness[i] += static_cast<double>(through[i]) / static_cast<double>(sigma);
            }
        }
    }
    return out;
}

// Pearson correlation of (tail degree, head degree) over edges, in exact 128-bit integer
// arithmetic up to the final division: (mΣab − ΣaΣb) / sqrt((mΣa² − (Σa)²)(mΣb² − (Σb)²)).
inline std::optional<double> pearson(const DirectedGraph &g, bool tail_uses_in, bool head_uses_in) {
    using i128 = __int128;
    i128 m = 0, sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (auto [u, v] : g.edges()) {
        const i128 a = tail_uses_in ? g.in_degree(u) : g.out_degree(u);
        const i128 b = head_uses_in ? g.in_degree(v) : g.out_degree(v);
        ++m;
        sa += a;
        sb += b;
        sab += a * b;
        saa += a * a;
        sbb += b * b;
    }
    if (m == 0) return std::nullopt;
    const i128 va = m * saa - sa * sa, vb = m * sbb - sb * sb;
    if (va == 0 || vb == 0) return std::nullopt;
    const long double num = static_cast<long double>(m * sab - sa * sb);
    return static_cast<double>(num / std::sqrt(static_cast<long double>(va) * static_cast<long double>(vb)));
}

// Principal eigenvector of AᵀA by dense power iteration from a non-uniform start.
inline std::vector<double> principal_authority(const DirectedGraph &g, std::mt19937_64 &rng) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0)), ata(n, std::vector<double>(n, 0.0));
    for (auto [u, v] : g.edges()) a[u][v] = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) ata[i][j] += a[k][i] * a[k][j];
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    std::vector<double> x(n), y(n);
    for (double &v : x) v = unit(rng);
    for (int iter = 0; iter < 20000; ++iter) {
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = 0.0;
            for (std::size_t j = 0; j < n; ++j) y[i] += ata[i][j] * x[j];
            norm += y[i] * y[i];
        }
        norm = std::sqrt(norm);
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] /= norm;
            change = std::max(change, std::abs(y[i] - x[i]));
        }
        x.swap(y);
        if (change < 1e-15) break;
    }
    return x;
}

inline double cosine(const std::vector<double> &a, const std::vector<double> &b) {
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    return ab / std::sqrt(aa * bb);
}

// Relevant set by explicit tallying: a node's rank in a list is the number of candidates
// that beat it (larger value, or equal value and smaller index).
inline std::set<NodeId> vote_relevant(const std::vector<NodeId> &candidates,
                                      const std::vector<std::vector<double>> &features) {
    if (candidates.size() <= 10) return {};
    std::map<NodeId, int> votes;
    for (const auto &values : features) {
        for (NodeId v : candidates) {
            std::size_t rank = 0;
            for (NodeId w : candidates)
                if (values[w] > values[v] || (values[w] == values[v] && w < v)) ++rank;
            if (rank < 10) ++votes[v];
        }
    }
    std::set<NodeId> relevant;
    for (auto [v, count] : votes)
        if (count >= 6) relevant.insert(v);
    return relevant;
}

// Directed Erdős–Rényi graph with expected mean in-degree `mean_degree`, sampled as m
// distinct random ordered pairs.
inline DirectedGraph er_digraph(std::size_t n, double mean_degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    const auto m = static_cast<std::size_t>(mean_degree * static_cast<double>(n));
    std::set<std::pair<NodeId, NodeId>> edges;
    while (edges.size() < m) {
        const NodeId u = pick(rng), v = pick(rng);
        if (u != v) edges.emplace(u, v);
    }
    return DirectedGraph(n, {edges.begin(), edges.end()});
}

// Configuration-style digraph with independent power-law in- and out-degree sequences
// P(k) ∝ k^-exponent for k ≥ min_degree; stubs paired uniformly at random.
inline DirectedGraph heavy_tailed_digraph(std::size_t n, double exponent, std::size_t min_degree,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double cap = static_cast<double>(n - 1);
    auto draw = [&] {
        const double u = 1.0 - unit(rng);
        const double k = std::floor(static_cast<double>(min_degree) * std::pow(u, -1.0 / (exponent - 1.0)));
        return static_cast<std::size_t>(std::min(k, cap));
    };
    std::vector<NodeId> out_stubs, in_stubs;
    for (NodeId v = 0; v < n; ++v) {
        for (std::size_t k = draw(); k > 0; --k) out_stubs.push_back(v);
        for (std::size_t k = draw(); k > 0; --k) in_stubs.push_back(v);
    }
    std::shuffle(out_stubs.begin(), out_stubs.end(), rng);
    std::shuffle(in_stubs.begin(), in_stubs.end(), rng);
    const std::size_t m = std::min(out_stubs.size(), in_stubs.size());
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(m);
    for (std::size_t e = 0; e < m; ++e) edges.emplace_back(out_stubs[e], in_stubs[e]);
    return DirectedGraph(n, std::move(edges));
}

} // namespace oracle

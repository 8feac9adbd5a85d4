#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "parallel.hpp"

namespace linkgraph {

enum class Feature {
    InDegree,
    OutDegree,
    Degree,
    Betweenness,
    Stress,
    Closeness,
    GraphCentrality,
    Hub,
    Authority,
    PageRank,
};

inline constexpr std::size_t kFeatureCount = 10;

inline constexpr std::array<Feature, kFeatureCount> kAllFeatures{
    Feature::InDegree, Feature::OutDegree,       Feature::Degree, Feature::Betweenness, Feature::Stress,
    Feature::Closeness, Feature::GraphCentrality, Feature::Hub,    Feature::Authority,   Feature::PageRank,
};

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "indegree", "outdegree", "degree", "betweenness", "stress",
    "closeness", "graph", "hub", "authority", "pagerank",
};

inline std::string_view to_string(Feature f) { return kFeatureNames[static_cast<std::size_t>(f)]; }

inline std::optional<Feature> parse_feature(std::string_view name) {
    for (std::size_t k = 0; k < kFeatureCount; ++k)
        if (kFeatureNames[k] == name) return kAllFeatures[k];
    if (name == "graphcentrality") return Feature::GraphCentrality;
    return std::nullopt;
}

struct FeatureVector {
    Feature feature = Feature::InDegree;
    std::vector<double> values;
};

using FeatureSet = std::array<FeatureVector, kFeatureCount>;

struct PowerIterationOptions {
    // Stopping rule: every component moves by at most tol between consecutive iterates.
    double tol = 1e-12;
    std::size_t max_iters = 100000;
    unsigned threads = 0;
};

struct ShortestPathCentralities {
    std::vector<double> betweenness;
    std::vector<std::uint64_t> stress;
};

struct ProximityCentralities {
    std::vector<double> closeness;
    std::vector<double> graph;
};

struct HitsResult {
    std::vector<double> hubs;         // y
    std::vector<double> authorities;  // x
    std::size_t iterations = 0;
};

struct PageRankResult {
    std::vector<double> ranks;
    std::size_t iterations = 0;
};

inline std::array<FeatureVector, 3> degree_vectors(const DirectedGraph &g) {
    const std::size_t n = g.node_count();
    std::array<FeatureVector, 3> result{FeatureVector{Feature::InDegree, std::vector<double>(n)},
                                        FeatureVector{Feature::OutDegree, std::vector<double>(n)},
                                        FeatureVector{Feature::Degree, std::vector<double>(n)}};
    for (NodeId i = 0; i < n; ++i) {
        const auto d = degrees(g, i);
        result[0].values[i] = static_cast<double>(d.in);
        result[1].values[i] = static_cast<double>(d.out);
        result[2].values[i] = static_cast<double>(d.total);
    }
    return result;
}

namespace detail {

// Sources are grouped into fixed blocks and partial sums are folded in block order,
// so floating-point results do not depend on the worker count.
inline constexpr std::size_t kSourceBlock = 64;

struct BrandesWorkspace {
    explicit BrandesWorkspace(std::size_t n)
        : bfs(n), sigma(n, 0.0), paths(n, 0), dependency(n, 0.0), continuations(n, 0) {}

    BfsWorkspace bfs;
    std::vector<double> sigma;
    std::vector<std::uint64_t> paths;
    std::vector<double> dependency;
    std::vector<std::uint64_t> continuations;

    void accumulate(const DirectedGraph &g, NodeId s, std::span<double> betweenness,
                    std::span<std::uint64_t> stress) {
        bfs.run(g, s);
        const auto dist = bfs.distances();
        const auto order = bfs.order();
        for (NodeId v : order) {
            sigma[v] = 0.0;
            paths[v] = 0;
            dependency[v] = 0.0;
            continuations[v] = 0;
        }
        sigma[s] = 1.0;
        paths[s] = 1;
        // Shortest-path counts; predecessors of w are in-neighbors one level closer.
        for (NodeId w : order.subspan(1)) {
            for (NodeId v : g.in_neighbors(w)) {
                if (dist[v] != kUnreachable && dist[v] + 1 == dist[w]) {
                    sigma[w] += sigma[v];
                    paths[w] += paths[v];
                }
            }
        }
        // Back-propagation in nonincreasing distance.
        for (std::size_t k = order.size(); k-- > 1;) {
            const NodeId w = order[k];
            for (NodeId v : g.in_neighbors(w)) {
                if (dist[v] != kUnreachable && dist[v] + 1 == dist[w]) {
                    dependency[v] += sigma[v] / sigma[w] * (1.0 + dependency[w]);
                    continuations[v] += 1 + continuations[w];
                }
            }
            betweenness[w] += dependency[w];
            stress[w] += paths[w] * continuations[w];
        }
    }
};

} // namespace detail

/**
 * Betweenness B_i and stress S_i over ordered pairs (j, k) with j ≠ i, k ≠ i and k
 * reachable from j. One BFS plus a dependency back-propagation per source, O(nm) total.
 * Stress is accumulated in exact integers.
 */
inline ShortestPathCentralities shortest_path_centralities(const DirectedGraph &g, unsigned threads = 0) {
    const std::size_t n = g.node_count();
    const unsigned workers = resolve_threads(threads);
    ShortestPathCentralities result{std::vector<double>(n, 0.0), std::vector<std::uint64_t>(n, 0)};
    const std::size_t blocks = (n + detail::kSourceBlock - 1) / detail::kSourceBlock;

    std::vector<std::vector<double>> partial_b(workers, std::vector<double>(n));
    std::vector<std::vector<std::uint64_t>> partial_s(workers, std::vector<std::uint64_t>(n));
    std::vector<detail::BrandesWorkspace> spaces;
    spaces.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) spaces.emplace_back(n);

    for (std::size_t wave = 0; wave < blocks; wave += workers) {
        const std::size_t in_wave = std::min<std::size_t>(workers, blocks - wave);
        parallel_for(in_wave, workers, [&](std::size_t slot) {
            std::fill(partial_b[slot].begin(), partial_b[slot].end(), 0.0);
            std::fill(partial_s[slot].begin(), partial_s[slot].end(), 0);
            const std::size_t first = (wave + slot) * detail::kSourceBlock;
            const std::size_t last = std::min(n, first + detail::kSourceBlock);
            for (std::size_t s = first; s < last; ++s)
                spaces[slot].accumulate(g, static_cast<NodeId>(s), partial_b[slot], partial_s[slot]);
        });
        for (std::size_t slot = 0; slot < in_wave; ++slot) {
            for (std::size_t i = 0; i < n; ++i) {
                result.betweenness[i] += partial_b[slot][i];
                result.stress[i] += partial_s[slot][i];
            }
        }
    }
    return result;
}

// C_i = 1 / Σ_{j∈R_i} d_ij and G_i = 1 / max_{j∈R_i} d_ij; both 0 when R_i is empty.
inline ProximityCentralities closeness_and_graph_centrality(const DirectedGraph &g, unsigned threads = 0) {
    const std::size_t n = g.node_count();
    ProximityCentralities result{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        BfsWorkspace ws(n);
        for (std::size_t s = begin; s < end; ++s) {
            ws.run(g, static_cast<NodeId>(s));
            if (ws.order().size() <= 1) continue;
            std::uint64_t total = 0;
            for (NodeId v : ws.order()) total += ws.distances()[v];
            result.closeness[s] = 1.0 / static_cast<double>(total);
            result.graph[s] = 1.0 / static_cast<double>(ws.distances()[ws.order().back()]);
        }
    });
    return result;
}

namespace detail {

inline double max_abs_change(const std::vector<double> &a, const std::vector<double> &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline bool scale_to(std::vector<double> &v, double divisor) {
    if (!(divisor > 0.0)) return false;
    for (double &x : v) x /= divisor;
    return true;
}

inline double euclidean_norm(const std::vector<double> &v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

inline double plain_sum(const std::vector<double> &v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum;
}

inline void check_options(const PowerIterationOptions &opt) {
    if (!(opt.tol > 0.0)) throw Error("convergence tolerance must be positive");
}

} // namespace detail

/**
 * Hub (y) and authority (x) scores. Both start at 1; each round updates the authorities
 * x_i = Σ_{j∈I_i} y_j, rescales them to unit Euclidean norm, then updates the hubs
 * y_i = Σ_{j∈O_i} x_j and rescales those likewise. Iteration stops once no component of
 * either normalized vector moved by more than tol; the converged vectors are rescaled to
 * sum 1. A graph without edges yields uniform vectors.
 */
inline HitsResult hits(const DirectedGraph &g, const PowerIterationOptions &opt = {}) {
    detail::check_options(opt);
    const std::size_t n = g.node_count();
    HitsResult result{std::vector<double>(n, 1.0), std::vector<double>(n, 1.0), 0};
    if (n == 0) return result;
    if (g.edge_count() == 0) {
        std::fill(result.hubs.begin(), result.hubs.end(), 1.0 / static_cast<double>(n));
        result.authorities = result.hubs;
        return result;
    }

    std::vector<double> next_auth(n), next_hub(n);
    double residual = 0.0;
    while (true) {
        if (result.iterations == opt.max_iters) throw ConvergenceError("HITS", result.iterations, residual);
        parallel_for(n, opt.threads, [&](std::size_t i) {
            double sum = 0.0;
            for (NodeId j : g.in_neighbors(static_cast<NodeId>(i))) sum += result.hubs[j];
            next_auth[i] = sum;
        });
        detail::scale_to(next_auth, detail::euclidean_norm(next_auth));
        parallel_for(n, opt.threads, [&](std::size_t i) {
            double sum = 0.0;
            for (NodeId j : g.out_neighbors(static_cast<NodeId>(i))) sum += next_auth[j];
            next_hub[i] = sum;
        });
        detail::scale_to(next_hub, detail::euclidean_norm(next_hub));
        ++result.iterations;

        residual = std::max(detail::max_abs_change(next_auth, result.authorities),
                            detail::max_abs_change(next_hub, result.hubs));
        result.authorities.swap(next_auth);
        result.hubs.swap(next_hub);
        if (residual <= opt.tol) break;
    }
    detail::scale_to(result.authorities, detail::plain_sum(result.authorities));
    detail::scale_to(result.hubs, detail::plain_sum(result.hubs));
    return result;
}

/**
 * Page rank by the undamped-teleport rule ρ_i := 0.15 + 0.85 Σ_{j∈I_i} ρ_j / δ_j^-,
 * starting from ρ = 1. Sinks pass nothing on; there is no redistribution of their mass.
 * The fixed point is rescaled to sum 1.
 */
inline PageRankResult pagerank(const DirectedGraph &g, const PowerIterationOptions &opt = {}) {
    detail::check_options(opt);
    constexpr double kDamping = 0.85;
    const std::size_t n = g.node_count();
    PageRankResult result{std::vector<double>(n, 1.0), 0};
    if (n == 0) return result;

    std::vector<double> share(n), next(n);
    double residual = 0.0;
    while (true) {
        if (result.iterations == opt.max_iters) throw ConvergenceError("PageRank", result.iterations, residual);
        for (NodeId j = 0; j < n; ++j) {
            const auto out = g.out_degree(j);
            share[j] = out == 0 ? 0.0 : result.ranks[j] / static_cast<double>(out);
        }
        parallel_for(n, opt.threads, [&](std::size_t i) {
            double sum = 0.0;
            for (NodeId j : g.in_neighbors(static_cast<NodeId>(i))) sum += share[j];
            next[i] = (1.0 - kDamping) + kDamping * sum;
        });
        ++result.iterations;
        residual = detail::max_abs_change(next, result.ranks);
        result.ranks.swap(next);
        if (residual <= opt.tol) break;
    }
    detail::scale_to(result.ranks, detail::plain_sum(result.ranks));
    return result;
}

inline FeatureSet compute_all_features(const DirectedGraph &g, const PowerIterationOptions &opt = {}) {
    FeatureSet set;
    auto deg = degree_vectors(g);
    for (std::size_t k = 0; k < 3; ++k) set[k] = std::move(deg[k]);

    auto paths = shortest_path_centralities(g, opt.threads);
    set[3] = {Feature::Betweenness, std::move(paths.betweenness)};
    set[4] = {Feature::Stress, std::vector<double>(paths.stress.begin(), paths.stress.end())};

    auto prox = closeness_and_graph_centrality(g, opt.threads);
    set[5] = {Feature::Closeness, std::move(prox.closeness)};
    set[6] = {Feature::GraphCentrality, std::move(prox.graph)};

    auto h = hits(g, opt);
    set[7] = {Feature::Hub, std::move(h.hubs)};
    set[8] = {Feature::Authority, std::move(h.authorities)};
    set[9] = {Feature::PageRank, std::move(pagerank(g, opt).ranks)};
    return set;
}

inline FeatureVector compute_feature(const DirectedGraph &g, Feature f, const PowerIterationOptions &opt = {}) {
    switch (f) {
    case Feature::InDegree: return std::move(degree_vectors(g)[0]);
    case Feature::OutDegree: return std::move(degree_vectors(g)[1]);
    case Feature::Degree: return std::move(degree_vectors(g)[2]);
    case Feature::Betweenness:
        return {f, shortest_path_centralities(g, opt.threads).betweenness};
    case Feature::Stress: {
        auto stress = shortest_path_centralities(g, opt.threads).stress;
        return {f, std::vector<double>(stress.begin(), stress.end())};
    }
    case Feature::Closeness: return {f, closeness_and_graph_centrality(g, opt.threads).closeness};
    case Feature::GraphCentrality: return {f, closeness_and_graph_centrality(g, opt.threads).graph};
    case Feature::Hub: return {f, hits(g, opt).hubs};
    case Feature::Authority: return {f, hits(g, opt).authorities};
    case Feature::PageRank: return {f, pagerank(g, opt).ranks};
    }
    throw Error("unknown feature");
}

struct CcdPoint {
    double z = 0;
    double fraction_above = 0;  // F(z)
};

// F(z) = |{i : v_i > z}| / n at z = 0 and at every distinct value, ascending in z.
inline std::vector<CcdPoint> ccd(std::span<const double> values) {
    if (values.empty()) throw Error("CCD of an empty feature vector");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> thresholds;
    if (sorted.front() > 0.0) thresholds.push_back(0.0);
    for (double v : sorted)
        if (thresholds.empty() || thresholds.back() != v) thresholds.push_back(v);

    const double n = static_cast<double>(sorted.size());
    std::vector<CcdPoint> table;
    table.reserve(thresholds.size());
    for (double z : thresholds) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), z);
        table.push_back({z, static_cast<double>(above) / n});
    }
    return table;
}

inline std::vector<CcdPoint> ccd(const FeatureVector &v) { return ccd(std::span<const double>(v.values)); }

} // namespace linkgraph

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "parallel.hpp"

namespace linkgraph {

struct MeanDegrees {
    double mean_in_degree = 0;  // δ+ = m/n
    double mean_degree = 0;     // δ, directions disregarded
    std::optional<double> antiparallel_fraction;  // 2δ+/δ − 1, undefined when m = 0
};

struct DistanceSummary {
    std::optional<double> average;  // ℓ, undefined when no finite pair exists
    std::uint64_t finite_pairs = 0; // N
    std::uint64_t distance_sum = 0;
};

struct ClusteringSummary {
    double coefficient = 0;                  // C = 3t/T, 0 when T = 0
    std::uint64_t triangles = 0;             // t
    std::uint64_t path_triples = 0;          // T
    std::optional<double> random_coefficient;  // C′, undefined when δ = 0
    double second_moment = 0;                // δ⁽²⁾
};

enum class DegreeEnd { In, Out };

// Order used for the four assortativity fields: out-in, in-out, out-out, in-in.
inline constexpr std::array<std::pair<DegreeEnd, DegreeEnd>, 4> kAssortativityPairs{{
    {DegreeEnd::Out, DegreeEnd::In},
    {DegreeEnd::In, DegreeEnd::Out},
    {DegreeEnd::Out, DegreeEnd::Out},
    {DegreeEnd::In, DegreeEnd::In},
}};
inline constexpr std::array<std::string_view, 4> kAssortativityNames{"out_in", "in_out", "out_out", "in_in"};

struct GlobalReport {
    std::size_t n = 0;
    std::size_t m = 0;
    MeanDegrees degrees;
    double gscc_fraction = 0;
    DistanceSummary distance;
    ClusteringSummary clustering;
    std::array<std::optional<double>, 4> assortativity;
};

inline MeanDegrees mean_degrees(const DirectedGraph &g) {
    const std::size_t n = g.node_count();
    if (n == 0) throw Error("mean degrees are undefined for an empty graph");
    std::uint64_t degree_sum = 0;
    for (NodeId i = 0; i < n; ++i) degree_sum += degrees(g, i).total;
    MeanDegrees result;
    result.mean_in_degree = static_cast<double>(g.edge_count()) / static_cast<double>(n);
    result.mean_degree = static_cast<double>(degree_sum) / static_cast<double>(n);
    if (g.edge_count() > 0)
        result.antiparallel_fraction =
            2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(degree_sum) - 1.0;
    return result;
}

inline double gscc_fraction(const DirectedGraph &g) {
    if (g.node_count() == 0) throw Error("GSCC fraction is undefined for an empty graph");
    return static_cast<double>(scc(g).largest_size()) / static_cast<double>(g.node_count());
}

// One BFS per source; partial sums are integers so the reduction is exact for any thread count.
inline DistanceSummary avg_distance(const DirectedGraph &g, unsigned threads = 0) {
    const std::size_t n = g.node_count();
    const unsigned workers = resolve_threads(threads);
    std::vector<std::uint64_t> sums(workers, 0), pairs(workers, 0);
    parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        BfsWorkspace ws(n);
        for (std::size_t s = begin; s < end; ++s) {
            ws.run(g, static_cast<NodeId>(s));
            auto dist = ws.distances();
            for (NodeId v : ws.order().subspan(1)) sums[w] += dist[v];
            pairs[w] += ws.order().size() - 1;
        }
    });
    DistanceSummary result;
    for (unsigned w = 0; w < workers; ++w) {
        result.distance_sum += sums[w];
        result.finite_pairs += pairs[w];
    }
    if (result.finite_pairs > 0)
        result.average = static_cast<double>(result.distance_sum) / static_cast<double>(result.finite_pairs);
    return result;
}

// Sorted neighbor lists of the undirected projection.
inline std::vector<std::vector<NodeId>> undirected_neighbors(const DirectedGraph &g) {
    std::vector<std::vector<NodeId>> result(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) {
        auto in = g.in_neighbors(i);
        auto out = g.out_neighbors(i);
        auto &merged = result[i];
        merged.reserve(in.size() + out.size());
        std::set_union(in.begin(), in.end(), out.begin(), out.end(), std::back_inserter(merged));
    }
    return result;
}

inline ClusteringSummary clustering(const DirectedGraph &g) {
    const std::size_t n = g.node_count();
    const auto nbrs = undirected_neighbors(g);
    ClusteringSummary result;

    // Each triangle u < v < w is found once, from its smallest vertex.
    for (NodeId u = 0; u < n; ++u) {
        const auto &nu = nbrs[u];
        for (auto vi = std::upper_bound(nu.begin(), nu.end(), u); vi != nu.end(); ++vi) {
            const NodeId v = *vi;
            const auto &nv = nbrs[v];
            auto a = std::upper_bound(vi, nu.end(), v);
            auto b = std::upper_bound(nv.begin(), nv.end(), v);
            while (a != nu.end() && b != nv.end()) {
                if (*a < *b) ++a;
                else if (*b < *a) ++b;
                else { ++result.triangles; ++a; ++b; }
            }
        }
    }

    std::uint64_t degree_sum = 0, degree_square_sum = 0;
    for (const auto &list : nbrs) {
        const std::uint64_t d = list.size();
        degree_sum += d;
        degree_square_sum += d * d;
        if (d >= 2) result.path_triples += d * (d - 1) / 2;
    }
    if (result.path_triples > 0)
        result.coefficient = 3.0 * static_cast<double>(result.triangles) / static_cast<double>(result.path_triples);
    if (n > 0) {
        const double nd = static_cast<double>(n);
        const double mean = static_cast<double>(degree_sum) / nd;
        result.second_moment = static_cast<double>(degree_square_sum) / nd;
        if (degree_sum > 0) {
            const double excess = result.second_moment - mean;
            result.random_coefficient = excess * excess / (nd * mean * mean * mean);
        }
    }
    return result;
}

/**
 * Pearson correlation over edges i→j between a degree of the tail i and a degree of the
 * head j (tail_end/head_end choose in- or out-degree). Undefined when m = 0 or when either
 * sequence is constant.
 */
inline std::optional<double> assortativity(const DirectedGraph &g, DegreeEnd tail_end, DegreeEnd head_end) {
    const std::size_t m = g.edge_count();
    if (m == 0) return std::nullopt;
    auto degree_of = [&](NodeId v, DegreeEnd end) {
        return static_cast<std::int64_t>(end == DegreeEnd::In ? g.in_degree(v) : g.out_degree(v));
    };

    std::int64_t alpha_min = INT64_MAX, alpha_max = INT64_MIN, beta_min = INT64_MAX, beta_max = INT64_MIN;
    long double alpha_sum = 0, beta_sum = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto a = degree_of(u, tail_end);
        for (NodeId v : g.out_neighbors(u)) {
            const auto b = degree_of(v, head_end);
            alpha_min = std::min(alpha_min, a);
            alpha_max = std::max(alpha_max, a);
            beta_min = std::min(beta_min, b);
            beta_max = std::max(beta_max, b);
            alpha_sum += a;
            beta_sum += b;
        }
    }
    if (alpha_min == alpha_max || beta_min == beta_max) return std::nullopt;

    // Centered second pass; equal to ⟨αβ⟩ − μαμβ over σασβ without the cancellation.
    const long double mu_alpha = alpha_sum / m, mu_beta = beta_sum / m;
    long double cov = 0, var_alpha = 0, var_beta = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const long double da = degree_of(u, tail_end) - mu_alpha;
        for (NodeId v : g.out_neighbors(u)) {
            const long double db = degree_of(v, head_end) - mu_beta;
            cov += da * db;
            var_alpha += da * da;
            var_beta += db * db;
        }
    }
    double r = static_cast<double>(cov / std::sqrt(var_alpha * var_beta));
    return std::clamp(r, -1.0, 1.0);
}

inline GlobalReport global_report(const DirectedGraph &g, unsigned threads = 0) {
    GlobalReport report;
    report.n = g.node_count();
    report.m = g.edge_count();
    report.degrees = mean_degrees(g);
    report.gscc_fraction = gscc_fraction(g);
    report.distance = avg_distance(g, threads);
    report.clustering = clustering(g);
    for (std::size_t k = 0; k < kAssortativityPairs.size(); ++k)
        report.assortativity[k] = assortativity(g, kAssortativityPairs[k].first, kAssortativityPairs[k].second);
    return report;
}

} // namespace linkgraph

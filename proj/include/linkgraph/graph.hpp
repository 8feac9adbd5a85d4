#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace linkgraph {

using NodeId = std::uint32_t;
using Distance = std::uint32_t;

inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();

struct Degrees {
    std::size_t in = 0;
    std::size_t out = 0;
    // Neighbors with edge directions disregarded: |I_i ∪ O_i|.
    std::size_t total = 0;

    friend bool operator==(const Degrees &, const Degrees &) = default;
};

/**
 * Immutable simple digraph in compressed sparse row form, with both the forward
 * (out-neighbor) and reverse (in-neighbor) adjacency. Adjacency lists are sorted
 * and free of duplicates; self-loops are never stored.
 */
class DirectedGraph {
public:
    DirectedGraph() = default;

    // Self-loops are dropped and parallel edges collapse to one.
    DirectedGraph(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges,
                  std::vector<std::string> labels = {})
        : labels_(std::move(labels)) {
        if (!labels_.empty() && labels_.size() != n)
            throw Error("label count does not match node count");
        for (const auto &[u, v] : edges)
            if (u >= n || v >= n) throw Error("edge endpoint out of range");
        std::erase_if(edges, [](const auto &e) { return e.first == e.second; });
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

        out_offsets_.assign(n + 1, 0);
        in_offsets_.assign(n + 1, 0);
        for (const auto &[u, v] : edges) {
            ++out_offsets_[u + 1];
            ++in_offsets_[v + 1];
        }
        for (std::size_t i = 0; i < n; ++i) {
            out_offsets_[i + 1] += out_offsets_[i];
            in_offsets_[i + 1] += in_offsets_[i];
        }
        out_targets_.resize(edges.size());
        in_sources_.resize(edges.size());
        std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
        // edges are sorted by (tail, head), so both lists come out sorted.
        for (std::size_t e = 0; e < edges.size(); ++e) {
            out_targets_[e] = edges[e].second;
            in_sources_[in_fill[edges[e].second]++] = edges[e].first;
        }
    }

    std::size_t node_count() const noexcept { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return out_targets_.size(); }

    std::span<const NodeId> out_neighbors(NodeId i) const {
        return {out_targets_.data() + out_offsets_[i], out_targets_.data() + out_offsets_[i + 1]};
    }
    std::span<const NodeId> in_neighbors(NodeId i) const {
        return {in_sources_.data() + in_offsets_[i], in_sources_.data() + in_offsets_[i + 1]};
    }

    std::size_t out_degree(NodeId i) const { return out_offsets_[i + 1] - out_offsets_[i]; }
    std::size_t in_degree(NodeId i) const { return in_offsets_[i + 1] - in_offsets_[i]; }

    bool has_edge(NodeId from, NodeId to) const {
        auto out = out_neighbors(from);
        return std::binary_search(out.begin(), out.end(), to);
    }

    // Empty when the graph was built without labels.
    const std::vector<std::string> &labels() const noexcept { return labels_; }
    std::string label(NodeId i) const { return labels_.empty() ? std::to_string(i) : labels_[i]; }

    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> result;
        result.reserve(edge_count());
        for (NodeId u = 0; u < node_count(); ++u)
            for (NodeId v : out_neighbors(u)) result.emplace_back(u, v);
        return result;
    }

    DirectedGraph transpose() const {
        std::vector<std::pair<NodeId, NodeId>> reversed;
        reversed.reserve(edge_count());
        for (NodeId u = 0; u < node_count(); ++u)
            for (NodeId v : out_neighbors(u)) reversed.emplace_back(v, u);
        return DirectedGraph(node_count(), std::move(reversed), labels_);
    }

    // Same node set with every edge incident to an isolated node removed.
    DirectedGraph without_edges_of(const std::vector<bool> &isolated) const {
        std::vector<std::pair<NodeId, NodeId>> kept;
        for (NodeId u = 0; u < node_count(); ++u) {
            if (isolated[u]) continue;
            for (NodeId v : out_neighbors(u))
                if (!isolated[v]) kept.emplace_back(u, v);
        }
        return DirectedGraph(node_count(), std::move(kept), labels_);
    }

private:
    std::vector<std::size_t> out_offsets_;
    std::vector<NodeId> out_targets_;
    std::vector<std::size_t> in_offsets_;
    std::vector<NodeId> in_sources_;
    std::vector<std::string> labels_;
};

inline void check_node(const DirectedGraph &g, NodeId i) {
    if (i >= g.node_count())
        throw Error("node index " + std::to_string(i) + " out of range (n = "
                    + std::to_string(g.node_count()) + ")");
}

inline Degrees degrees(const DirectedGraph &g, NodeId i) {
    check_node(g, i);
    auto in = g.in_neighbors(i);
    auto out = g.out_neighbors(i);
    // Size of the union of two sorted duplicate-free ranges.
    std::size_t common = 0;
    for (auto a = in.begin(), b = out.begin(); a != in.end() && b != out.end();) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else { ++common; ++a; ++b; }
    }
    return {in.size(), out.size(), in.size() + out.size() - common};
}

// Reusable BFS state so that all-sources loops do not reallocate per source.
class BfsWorkspace {
public:
    explicit BfsWorkspace(std::size_t n) : dist_(n, kUnreachable) { order_.reserve(n); }

    // Fills distances from source; order() lists reached nodes in nondecreasing distance.
    void run(const DirectedGraph &g, NodeId source) {
        for (NodeId v : order_) dist_[v] = kUnreachable;
        order_.clear();
        dist_[source] = 0;
        order_.push_back(source);
        for (std::size_t head = 0; head < order_.size(); ++head) {
            const NodeId u = order_[head];
            const Distance next = dist_[u] + 1;
            for (NodeId v : g.out_neighbors(u)) {
                if (dist_[v] == kUnreachable) {
                    dist_[v] = next;
                    order_.push_back(v);
                }
            }
        }
    }

    std::span<const Distance> distances() const noexcept { return dist_; }
    std::span<const NodeId> order() const noexcept { return order_; }

private:
    std::vector<Distance> dist_;
    std::vector<NodeId> order_;
};

inline std::vector<Distance> bfs_distances(const DirectedGraph &g, NodeId source) {
    check_node(g, source);
    BfsWorkspace ws(g.node_count());
    ws.run(g, source);
    auto d = ws.distances();
    return {d.begin(), d.end()};
}

// R_i: nodes at finite positive distance from i, in ascending index order.
inline std::vector<NodeId> reach_set(const DirectedGraph &g, NodeId i) {
    auto d = bfs_distances(g, i);
    std::vector<NodeId> reached;
    for (NodeId j = 0; j < d.size(); ++j)
        if (d[j] != 0 && d[j] != kUnreachable) reached.push_back(j);
    return reached;
}

struct SccDecomposition {
    std::vector<std::size_t> component;  // component id per node
    std::vector<std::size_t> sizes;      // size per component id
    std::size_t largest = 0;             // id of the giant component

    std::size_t largest_size() const { return sizes.empty() ? 0 : sizes[largest]; }
};

/**
 * Strongly connected components by an iterative Tarjan pass, O(n + m).
 *
 * Nodes flagged in `isolated` are treated as having no incident edges. Component ids
 * are assigned in order of discovery; the largest component is the one of maximum size
 * containing the smallest node index.
 */
inline SccDecomposition scc(const DirectedGraph &g, const std::vector<bool> *isolated = nullptr) {
    const std::size_t n = g.node_count();
    constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
    SccDecomposition result;
    result.component.assign(n, kUnvisited);

    std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
    std::vector<NodeId> stack;
    std::vector<bool> on_stack(n, false);
    // Call frames: node and position within its out-list.
    std::vector<std::pair<NodeId, std::size_t>> frames;
    std::size_t counter = 0;

    auto blocked = [&](NodeId v) { return isolated != nullptr && (*isolated)[v]; };

    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        frames.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!frames.empty()) {
            auto &[u, pos] = frames.back();
            auto out = blocked(u) ? std::span<const NodeId>{} : g.out_neighbors(u);
            if (pos < out.size()) {
                const NodeId v = out[pos++];
                if (blocked(v)) continue;
                if (index[v] == kUnvisited) {
                    index[v] = low[v] = counter++;
                    stack.push_back(v);
                    on_stack[v] = true;
                    frames.emplace_back(v, 0);
                } else if (on_stack[v]) {
                    low[u] = std::min(low[u], index[v]);
                }
                continue;
            }
            const NodeId done = u;
            frames.pop_back();
            if (!frames.empty()) {
                const NodeId parent = frames.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                const std::size_t id = result.sizes.size();
                std::size_t size = 0;
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    result.component[w] = id;
                    ++size;
                } while (w != done);
                result.sizes.push_back(size);
            }
        }
    }

    // Tie rule: scan nodes in index order, so the first component reaching the max wins.
    std::size_t best = 0;
    for (NodeId v = 0; v < n; ++v) {
        const std::size_t c = result.component[v];
        if (result.sizes[c] > best) {
            best = result.sizes[c];
            result.largest = c;
        }
    }
    return result;
}

} // namespace linkgraph

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "local_metrics.hpp"
#include "parallel.hpp"

namespace linkgraph {

struct RandomSchedule {
    std::uint64_t seed = 0;
    std::size_t trials = 10;
};

struct TargetedSchedule {
    Feature feature = Feature::Degree;
    // 0: rank once on the intact graph. k > 0: re-rank the remaining nodes on the
    // current masked graph after every k isolations.
    std::size_t recompute_every = 0;
};

using IsolationSchedule = std::variant<RandomSchedule, TargetedSchedule>;

inline std::string schedule_name(const IsolationSchedule &s) {
    if (std::holds_alternative<RandomSchedule>(s)) return "random";
    return std::string(to_string(std::get<TargetedSchedule>(s).feature));
}

struct PercolationPoint {
    std::size_t isolated_count = 0;
    double isolated_fraction = 0;
    double gscc_fraction = 0;  // S after this many isolations
};

struct PercolationTrace {
    std::string schedule;
    std::vector<PercolationPoint> points;
    double breakdown_fraction = 0;
    // Random schedules only: the breakdown fraction of each trial, in trial order.
    std::vector<double> trial_breakdowns;
};

/**
 * Tracks the SCC partition of a graph while nodes are isolated one at a time.
 *
 * Paths between two members of an SCC never leave it, so isolating v can only split
 * v's own component; only that component is re-decomposed.
 */
class GsccTracker {
public:
    explicit GsccTracker(const DirectedGraph &g)
        : g_(g), isolated_(g.node_count(), false), stamp_(g.node_count(), 0),
          index_(g.node_count(), 0), low_(g.node_count(), 0), on_stack_(g.node_count(), false),
          size_count_(g.node_count() + 1, 0) {
        const auto initial = scc(g);
        members_.resize(initial.sizes.size());
        component_.assign(initial.component.begin(), initial.component.end());
        for (NodeId v = 0; v < g.node_count(); ++v) members_[initial.component[v]].push_back(v);
        for (const auto &group : members_) ++size_count_[group.size()];
        largest_ = initial.largest_size();
    }

    std::size_t largest_size() const noexcept { return largest_; }
    bool is_isolated(NodeId v) const { return isolated_[v]; }
    const std::vector<bool> &isolated() const noexcept { return isolated_; }

    void isolate(NodeId v) {
        if (isolated_[v]) return;
        isolated_[v] = true;
        const std::size_t c = component_[v];
        if (members_[c].size() == 1) return;

        std::vector<NodeId> rest = std::move(members_[c]);
        members_[c].clear();
        --size_count_[rest.size()];
        std::erase(rest, v);
        component_[v] = members_.size();
        members_.push_back({v});
        ++size_count_[1];

        split(c, rest);
        while (largest_ > 0 && size_count_[largest_] == 0) --largest_;
    }

private:
    // Tarjan restricted to `nodes` (all formerly in component c); the first group found reuses id c.
    void split(std::size_t c, const std::vector<NodeId> &nodes) {
        ++epoch_;
        for (NodeId u : nodes) stamp_[u] = epoch_;
        auto in_scope = [&](NodeId w) { return stamp_[w] == epoch_ && !isolated_[w]; };
        constexpr std::size_t kNew = 0;
        std::size_t counter = 1;
        for (NodeId u : nodes) index_[u] = kNew;

        bool reuse = true;
        std::vector<NodeId> stack;
        std::vector<std::pair<NodeId, std::size_t>> frames;
        for (NodeId root : nodes) {
            if (index_[root] != kNew) continue;
            index_[root] = low_[root] = counter++;
            stack.push_back(root);
            on_stack_[root] = true;
            frames.emplace_back(root, 0);
            while (!frames.empty()) {
                auto &[u, pos] = frames.back();
                auto out = g_.out_neighbors(u);
                if (pos < out.size()) {
                    const NodeId w = out[pos++];
                    if (!in_scope(w)) continue;
                    if (index_[w] == kNew) {
                        index_[w] = low_[w] = counter++;
                        stack.push_back(w);
                        on_stack_[w] = true;
                        frames.emplace_back(w, 0);
                    } else if (on_stack_[w]) {
                        low_[u] = std::min(low_[u], index_[w]);
                    }
                    continue;
                }
                const NodeId done = u;
                frames.pop_back();
                if (!frames.empty()) low_[frames.back().first] = std::min(low_[frames.back().first], low_[done]);
                if (low_[done] != index_[done]) continue;

                const std::size_t id = reuse ? c : members_.size();
                if (!reuse) members_.emplace_back();
                reuse = false;
                auto &group = members_[id];
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack_[w] = false;
                    component_[w] = id;
                    group.push_back(w);
                } while (w != done);
                ++size_count_[group.size()];
            }
        }
    }

    const DirectedGraph &g_;
    std::vector<bool> isolated_;
    std::vector<std::uint64_t> stamp_;
    std::uint64_t epoch_ = 0;
    std::vector<std::size_t> index_, low_;
    std::vector<bool> on_stack_;
    std::vector<std::size_t> component_;
    std::vector<std::vector<NodeId>> members_;
    std::vector<std::size_t> size_count_;
    std::size_t largest_ = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Unbiased draw in [0, bound) with a fixed algorithm, so sequences match across standard libraries.
inline std::uint64_t bounded(std::mt19937_64 &rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do x = rng(); while (x >= limit);
    return x % bound;
}

inline std::vector<NodeId> random_order(std::size_t n, std::uint64_t seed, std::size_t trial) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(trial)));
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);
    return order;
}

// Remaining nodes by nonincreasing value, ties by ascending index.
inline std::vector<NodeId> ranked(const std::vector<double> &values, const GsccTracker *tracker) {
    std::vector<NodeId> order;
    for (NodeId v = 0; v < values.size(); ++v)
        if (tracker == nullptr || !tracker->is_isolated(v)) order.push_back(v);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return values[a] > values[b]; });
    return order;
}

// S after each isolation until no SCC has two or more nodes.
inline std::vector<double> run_order(const DirectedGraph &g, const std::vector<NodeId> &order) {
    GsccTracker tracker(g);
    std::vector<double> s;
    const double n = static_cast<double>(g.node_count());
    for (NodeId v : order) {
        if (tracker.largest_size() <= 1) break;
        tracker.isolate(v);
        s.push_back(static_cast<double>(tracker.largest_size()) / n);
    }
    return s;
}

inline std::vector<double> run_targeted(const DirectedGraph &g, const TargetedSchedule &schedule,
                                        const PowerIterationOptions &opt) {
    if (schedule.recompute_every == 0)
        return run_order(g, ranked(compute_feature(g, schedule.feature, opt).values, nullptr));

    GsccTracker tracker(g);
    std::vector<double> s;
    const double n = static_cast<double>(g.node_count());
    while (tracker.largest_size() > 1) {
        const auto current = g.without_edges_of(tracker.isolated());
        const auto order = ranked(compute_feature(current, schedule.feature, opt).values, &tracker);
        for (std::size_t k = 0; k < schedule.recompute_every && k < order.size(); ++k) {
            if (tracker.largest_size() <= 1) break;
            tracker.isolate(order[k]);
            s.push_back(static_cast<double>(tracker.largest_size()) / n);
        }
    }
    return s;
}

inline std::vector<PercolationPoint> to_points(const std::vector<double> &s, std::size_t n) {
    std::vector<PercolationPoint> points;
    points.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k)
        points.push_back({k + 1, static_cast<double>(k + 1) / static_cast<double>(n), s[k]});
    return points;
}

} // namespace detail

/**
 * Isolates nodes (removes all their incident edges) until no strongly connected component
 * has more than one node, recording S after every isolation.
 *
 * Random schedules run `trials` independent shuffles and average S pointwise by isolation
 * count; a trial that stopped early contributes its final S to later counts. The reported
 * breakdown fraction is the mean of the per-trial breakdown fractions. Targeted schedules
 * always isolate the remaining node with the highest feature value (ties: lowest index).
 */
inline PercolationTrace isolate_run(const DirectedGraph &g, const IsolationSchedule &schedule,
                                    const PowerIterationOptions &opt = {}) {
    const std::size_t n = g.node_count();
    PercolationTrace trace;
    trace.schedule = schedule_name(schedule);
    if (n == 0) return trace;

    if (const auto *targeted = std::get_if<TargetedSchedule>(&schedule)) {
        if (scc(g).largest_size() <= 1) return trace;
        const auto s = detail::run_targeted(g, *targeted, opt);
        trace.points = detail::to_points(s, n);
        trace.breakdown_fraction = static_cast<double>(s.size()) / static_cast<double>(n);
        return trace;
    }

    const auto &random = std::get<RandomSchedule>(schedule);
    if (random.trials == 0) throw Error("random isolation needs at least one trial");
    if (scc(g).largest_size() <= 1) {
        trace.trial_breakdowns.assign(random.trials, 0.0);
        return trace;
    }
    std::vector<std::vector<double>> per_trial(random.trials);
    parallel_for(random.trials, opt.threads, [&](std::size_t t) {
        per_trial[t] = detail::run_order(g, detail::random_order(n, random.seed, t));
    });

    std::size_t longest = 0;
    double breakdown_sum = 0.0;
    for (const auto &s : per_trial) {
        longest = std::max(longest, s.size());
        trace.trial_breakdowns.push_back(static_cast<double>(s.size()) / static_cast<double>(n));
        breakdown_sum += trace.trial_breakdowns.back();
    }
    std::vector<double> mean(longest, 0.0);
    for (std::size_t k = 0; k < longest; ++k) {
        double sum = 0.0;
        for (const auto &s : per_trial) sum += k < s.size() ? s[k] : s.back();
        mean[k] = sum / static_cast<double>(random.trials);
    }
    trace.points = detail::to_points(mean, n);
    trace.breakdown_fraction = breakdown_sum / static_cast<double>(random.trials);
    return trace;
}

struct BreakdownRow {
    std::string schedule;
    double breakdown_fraction = 0;
};

// One row per trace, ascending by breakdown fraction (stable for ties).
inline std::vector<BreakdownRow> breakdown_summary(const std::vector<PercolationTrace> &traces) {
    if (traces.empty()) throw Error("breakdown summary needs at least one trace");
    std::vector<BreakdownRow> rows;
    rows.reserve(traces.size());
    for (const auto &t : traces) rows.push_back({t.schedule, t.breakdown_fraction});
    std::stable_sort(rows.begin(), rows.end(), [](const BreakdownRow &a, const BreakdownRow &b) {
        return a.breakdown_fraction < b.breakdown_fraction;
    });
    return rows;
}

} // namespace linkgraph

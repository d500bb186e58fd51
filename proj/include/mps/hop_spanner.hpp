#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "mps/graph.hpp"
#include "mps/metrics.hpp"

// Bounded-hop spanners. An s-hop spanner replaces every graph edge uv by a
// path of at most s edges and cost at most s*w(uv); unlike classical greedy
// spanners this bounds the edge count of the replacement path, which is what
// the fault-tolerant wrapper needs.

namespace mps {

// ---------------------------------------------------------------------------
// Greedy (2k-1)-hop spanner: visit edges by non-decreasing weight, keep an
// edge only when the current spanner has no path of <= 2k-1 hops between its
// endpoints. The result has girth > 2k and fewer than n^(1+1/k) edges.

inline Subgraph greedy_hop_spanner(const WeightedGraph& g, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const int budget = 2 * k - 1;
    auto edges = g.edges();
    std::sort(edges.begin(), edges.end(), [](const WEdge& a, const WEdge& b) {
        if (a.w != b.w) return a.w < b.w;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });

    std::vector<std::vector<Vertex>> adj(g.vertex_count());
    std::vector<int> stamp(g.vertex_count(), -1);
    int round = 0;

    // Hop-bounded reachability in the current spanner.
    auto reachable_within = [&](Vertex from, Vertex to, int hops) {
        ++round;
        std::queue<std::pair<Vertex, int>> q;
        stamp[from] = round;
        q.push({from, 0});
        while (!q.empty()) {
            auto [x, d] = q.front();
            q.pop();
            if (d == hops) continue;
            for (Vertex y : adj[x]) {
                if (stamp[y] == round) continue;
                if (y == to) return true;
                stamp[y] = round;
                q.push({y, d + 1});
            }
        }
        return false;
    };

    Subgraph h(g);
    for (const auto& e : edges) {
        if (!reachable_within(e.u, e.v, budget)) {
            h.add_edge(e.u, e.v);
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Hop-spanner predicate: b rounds of synchronous edge relaxation give the
// exact min-cost-within-b-hops value for every source.

struct HopCheck {
    bool ok = true;
    std::optional<EdgeKey> counterexample;
};

inline HopCheck is_b_hop_spanner(const WeightedGraph& g, const Subgraph& h, int b, Rational s) {
    const int n = g.vertex_count();
    std::vector<WEdge> hedges;
    hedges.reserve(h.edge_count());
    for (const auto& [u, v] : h.edge_set()) hedges.push_back({u, v, g.edge_weight(u, v)});

    std::vector<long long> prev(n), cur(n);
    for (Vertex u = 0; u < n; ++u) {
        if (!g.alive(u) || g.neighbors(u).empty()) continue;
        bool needed = false;
        for (auto [v, w] : g.neighbors(u)) needed |= (u < v);
        if (!needed) continue;

        std::fill(prev.begin(), prev.end(), Cost::kInf);
        prev[u] = 0;
        for (int r = 0; r < b; ++r) {
            cur = prev;
            for (const auto& e : hedges) {
                if (prev[e.u] != Cost::kInf) cur[e.v] = std::min(cur[e.v], prev[e.u] + e.w);
                if (prev[e.v] != Cost::kInf) cur[e.u] = std::min(cur[e.u], prev[e.v] + e.w);
            }
            prev.swap(cur);
        }
        for (auto [v, w] : g.neighbors(u)) {
            if (u >= v) continue;
            if (!within_stretch(prev[v] == Cost::kInf ? Cost::infinity() : Cost(prev[v]), s,
                                Cost(w), Cost(0)))
                return {false, edge_key(u, v)};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Randomized cluster spanner. Every vertex draws a level (promotion chance q
// per level, capped at k-1); clusters grow around surviving centers one hop
// per round, and vertices with no sampled cluster in reach connect once to
// each neighboring cluster and retire. The whole construction runs on
// neighbor-local information, which is what lets the LOCAL-model protocol in
// local_sim.hpp replay it round for round.

namespace cluster {

struct NodeState {
    Vertex center = -1;
    int center_level = 0;
    int hop = 0;
    bool settled = false;
};

struct NeighborView {
    Vertex id = -1;
    Weight w = 0;
    NodeState st;
    bool dead = false;  // edge discarded by either side
};

struct Decision {
    std::optional<NodeState> new_state;
    std::vector<Vertex> spanner_edges;  // neighbors to connect to
    std::vector<Vertex> kill_edges;     // neighbors whose edge is discarded
    bool settle = false;
};

inline int draw_level(std::uint64_t seed, Vertex v, int k, double q) {
    int level = 0;
    for (int i = 0; i + 1 < k; ++i) {
        if (rng::to_unit(rng::derive(seed, rng::kSaltLevel, static_cast<std::uint64_t>(v),
                                     static_cast<std::uint64_t>(i))) < q)
            ++level;
        else
            break;
    }
    return level;
}

inline double promotion_probability(int n_universe, int k, double c) {
    if (n_universe <= 1 || k <= 1) return 0.0;
    double q = std::pow(c * std::log(static_cast<double>(n_universe)) / n_universe, 1.0 / k);
    return std::clamp(q, 0.0, 1.0);
}

// One vertex's action in growth round i, from its own state and its
// neighbors' states after round i-1. Pure; shared by the sequential builder
// and the distributed protocol.
inline Decision growth_round(int i, const NodeState& st, const std::vector<NeighborView>& nbrs) {
    Decision d;
    if (st.settled) return d;
    if (st.center_level >= i) return d;  // my cluster survives; nothing to do

    // Cheapest connecting edge per adjacent cluster, my own cluster excluded.
    struct Candidate {
        Weight w;
        Vertex center;
        Vertex via;
        int hop;
        int center_level;
    };
    std::map<Vertex, Candidate> best;  // keyed by cluster center
    for (const auto& nb : nbrs) {
        if (nb.dead || nb.st.settled) continue;
        if (nb.st.center == st.center) {
            d.kill_edges.push_back(nb.id);  // intra-cluster edge, never useful again
            continue;
        }
        Candidate c{nb.w, nb.st.center, nb.id, nb.st.hop, nb.st.center_level};
        auto it = best.find(nb.st.center);
        if (it == best.end() || c.w < it->second.w ||
            (c.w == it->second.w && c.via < it->second.via))
            best[nb.st.center] = c;
    }

    std::optional<Candidate> join;
    for (const auto& [center, c] : best) {
        if (c.center_level < i) continue;  // not sampled at this level
        if (!join || c.w < join->w || (c.w == join->w && c.center < join->center))
            join = c;
    }

    if (join) {
        d.new_state = NodeState{join->center, join->center_level, join->hop + 1, false};
        d.spanner_edges.push_back(join->via);
        for (const auto& [center, c] : best) {
            if (center == join->center || c.w < join->w) {
                if (center != join->center) d.spanner_edges.push_back(c.via);
                // all edges into this cluster are now redundant
                for (const auto& nb : nbrs)
                    if (!nb.dead && !nb.st.settled && nb.st.center == center)
                        d.kill_edges.push_back(nb.id);
            }
        }
    } else {
        // No sampled cluster in reach: connect once to every adjacent cluster
        // and retire.
        d.settle = true;
        d.new_state = NodeState{st.center, st.center_level, st.hop, true};
        for (const auto& [center, c] : best) d.spanner_edges.push_back(c.via);
        for (const auto& nb : nbrs)
            if (!nb.dead) d.kill_edges.push_back(nb.id);
    }
    return d;
}

// Final joining pass once clusters stopped growing.
inline Decision final_round(const NodeState& st, const std::vector<NeighborView>& nbrs) {
    Decision d;
    if (st.settled) return d;
    std::map<Vertex, std::pair<Weight, Vertex>> best;
    for (const auto& nb : nbrs) {
        if (nb.dead || nb.st.settled) continue;
        if (nb.st.center == st.center) continue;
        auto it = best.find(nb.st.center);
        if (it == best.end() || nb.w < it->second.first ||
            (nb.w == it->second.first && nb.id < it->second.second))
            best[nb.st.center] = {nb.w, nb.id};
    }
    for (const auto& [center, via] : best) d.spanner_edges.push_back(via.second);
    return d;
}

}  // namespace cluster

/// Randomized (2k-1)-hop spanner; a pure function of (g, k, c, seed).
/// The sampling probability uses the vertex-id universe size, which is the
/// quantity network nodes are assumed to know.
inline Subgraph cluster_hop_spanner(const WeightedGraph& g, int k, double c, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const int n = g.vertex_count();
    const double q = cluster::promotion_probability(n, k, c);

    std::vector<int> level(n, 0);
    for (Vertex v : g.vertices()) level[v] = cluster::draw_level(seed, v, k, q);

    std::vector<cluster::NodeState> state(n);
    for (Vertex v : g.vertices()) state[v] = {v, level[v], 0, false};

    EdgeSet dead;
    Subgraph h(g);

    auto views_of = [&](Vertex v) {
        std::vector<cluster::NeighborView> out;
        out.reserve(g.neighbors(v).size());
        for (auto [y, w] : g.neighbors(v))
            out.push_back({y, w, state[y], dead.count(edge_key(v, y)) > 0});
        return out;
    };

    auto apply = [&](Vertex v, const cluster::Decision& d, std::vector<cluster::NodeState>& next) {
        if (d.new_state) next[v] = *d.new_state;
        for (Vertex y : d.spanner_edges) h.add_edge(v, y);
        for (Vertex y : d.kill_edges) dead.insert(edge_key(v, y));
    };

    // Decisions are computed against the frozen round state before any are
    // applied, matching the synchronous message-passing execution.
    auto verts = g.vertices();
    for (int i = 1; i <= k - 1; ++i) {
        std::vector<cluster::Decision> ds(verts.size());
        for (size_t vi = 0; vi < verts.size(); ++vi)
            ds[vi] = cluster::growth_round(i, state[verts[vi]], views_of(verts[vi]));
        auto next = state;
        for (size_t vi = 0; vi < verts.size(); ++vi) apply(verts[vi], ds[vi], next);
        state = std::move(next);
    }
    std::vector<cluster::Decision> ds(verts.size());
    for (size_t vi = 0; vi < verts.size(); ++vi)
        ds[vi] = cluster::final_round(state[verts[vi]], views_of(verts[vi]));
    auto next = state;
    for (size_t vi = 0; vi < verts.size(); ++vi) apply(verts[vi], ds[vi], next);
    return h;
}

// ---------------------------------------------------------------------------
// Brute-force girth check used by the greedy tests: shortest cycle length via
// one hop-BFS per edge with that edge removed.

inline std::optional<int> shortest_cycle_length(const WeightedGraph& g) {
    std::optional<int> best;
    const int n = g.vertex_count();
    std::vector<int> depth(n);
    for (const auto& e : g.edges()) {
        std::fill(depth.begin(), depth.end(), -1);
        std::queue<Vertex> q;
        depth[e.u] = 0;
        q.push(e.u);
        while (!q.empty()) {
            Vertex x = q.front();
            q.pop();
            if (best && depth[x] + 1 >= *best) continue;
            for (auto [y, w] : g.neighbors(x)) {
                if (x == e.u && y == e.v) continue;
                if (x == e.v && y == e.u) continue;
                if (depth[y] != -1) continue;
                depth[y] = depth[x] + 1;
                q.push(y);
            }
        }
        if (depth[e.v] != -1) {
            int len = depth[e.v] + 1;
            if (!best || len < *best) best = len;
        }
    }
    return best;  // nullopt for forests
}

}  // namespace mps

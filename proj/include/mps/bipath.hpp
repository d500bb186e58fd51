#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "mps/graph.hpp"
#include "mps/metrics.hpp"

// Bi-path (2-multipath) spanner machinery: shortest pairs of disjoint paths
// in digraphs, shortest 2-path spanning trees rooted at an edge, the dense-
// 2-ball removal construction, and the residual sparsity certificate.

namespace mps {

// ---------------------------------------------------------------------------
// Weighted digraph with an arc list, the reduction target for disjoint-path
// computations.

struct Digraph {
    struct Arc {
        int from;
        int to;
        long long cost;
    };

    int n = 0;
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> out;  // arc ids per node

    explicit Digraph(int nodes) : n(nodes), out(nodes) {}

    int add_arc(int from, int to, long long cost) {
        if (cost < 0) throw std::invalid_argument("negative arc cost");
        int id = static_cast<int>(arcs.size());
        arcs.push_back({from, to, cost});
        out[from].push_back(id);
        return id;
    }
};

struct DisjointPaths {
    Cost total = Cost::infinity();
    std::vector<int> path1, path2;  // node sequences src..dst when total is finite
};

namespace detail {

struct DigraphDijkstra {
    std::vector<long long> dist;
    std::vector<int> parent_arc;  // -1 at src / unreached
};

inline DigraphDijkstra dijkstra_digraph(const Digraph& d, int src) {
    DigraphDijkstra r{std::vector<long long>(d.n, Cost::kInf), std::vector<int>(d.n, -1)};
    using Item = std::pair<long long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    r.dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [dd, x] = pq.top();
        pq.pop();
        if (dd > r.dist[x]) continue;
        for (int id : d.out[x]) {
            const auto& a = d.arcs[id];
            long long nd = dd + a.cost;
            if (nd < r.dist[a.to]) {
                r.dist[a.to] = nd;
                r.parent_arc[a.to] = id;
                pq.push({nd, a.to});
            }
        }
    }
    return r;
}

// Net arc set of a cheapest pair of arc-disjoint src->dst paths, via the
// reduced-cost residual trick: reverse the shortest path, run one more
// Dijkstra, cancel opposite arcs.
struct PairArcs {
    bool found = false;
    long long total = 0;
    std::vector<int> arc_ids;
};

inline PairArcs disjoint_pair_arcs(const Digraph& d, const DigraphDijkstra& first, int src,
                                   int dst) {
    if (first.dist[dst] >= Cost::kInf) return {};

    std::vector<int> path_arcs;
    for (int v = dst; v != src;) {
        int id = first.parent_arc[v];
        path_arcs.push_back(id);
        v = d.arcs[id].from;
    }
    std::vector<char> on_path(d.arcs.size(), 0);
    std::vector<int> rev_to(d.n, -1);  // reversed path arcs, cost 0 in reduced space
    for (int id : path_arcs) {
        on_path[id] = 1;
        rev_to[d.arcs[id].to] = d.arcs[id].from;
    }

    std::vector<long long> dist2(d.n, Cost::kInf);
    // parent in the residual walk: (node we came from, arc id or -1 for a
    // reversed path arc)
    std::vector<std::pair<int, int>> par2(d.n, {-1, -2});
    using Item = std::pair<long long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist2[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [dd, x] = pq.top();
        pq.pop();
        if (dd > dist2[x]) continue;
        for (int id : d.out[x]) {
            if (on_path[id]) continue;
            const auto& a = d.arcs[id];
            if (first.dist[a.to] >= Cost::kInf) continue;
            long long red = a.cost + first.dist[x] - first.dist[a.to];
            if (dd + red < dist2[a.to]) {
                dist2[a.to] = dd + red;
                par2[a.to] = {x, id};
                pq.push({dd + red, a.to});
            }
        }
        if (rev_to[x] != -1 && dd < dist2[rev_to[x]]) {
            dist2[rev_to[x]] = dd;
            par2[rev_to[x]] = {x, -1};
            pq.push({dd, rev_to[x]});
        }
    }
    if (dist2[dst] >= Cost::kInf) return {};

    std::vector<int> usage(d.arcs.size(), 0);
    for (int id : path_arcs) usage[id] += 1;
    std::map<std::pair<int, int>, int> path_arc_of;  // (from,to) -> arc id, for cancellation
    for (int id : path_arcs) path_arc_of[{d.arcs[id].from, d.arcs[id].to}] = id;
    for (int v = dst; v != src;) {
        auto [prev, id] = par2[v];
        if (id >= 0) {
            usage[id] += 1;
        } else {
            usage[path_arc_of.at({v, prev})] -= 1;  // reversed path arc cancels
        }
        v = prev;
    }

    PairArcs out;
    out.found = true;
    for (size_t id = 0; id < usage.size(); ++id) {
        if (usage[id] > 0) {
            out.arc_ids.push_back(static_cast<int>(id));
            out.total += d.arcs[id].cost;
        }
    }
    return out;
}

// Decomposes a net pair-arc set into two node paths, smallest-successor
// first for determinism.
inline std::pair<std::vector<int>, std::vector<int>> decode_two_paths(const Digraph& d,
                                                                      const std::vector<int>& ids,
                                                                      int src, int dst) {
    std::map<int, std::vector<int>> succ;  // node -> remaining out arc ids
    for (int id : ids) succ[d.arcs[id].from].push_back(id);
    for (auto& [node, list] : succ)
        std::sort(list.begin(), list.end(),
                  [&](int a, int b) { return d.arcs[a].to < d.arcs[b].to; });
    auto walk = [&]() {
        std::vector<int> path{src};
        int at = src;
        while (at != dst) {
            auto& list = succ[at];
            if (list.empty()) throw std::logic_error("disjoint-pair decomposition stranded");
            int id = list.front();
            list.erase(list.begin());
            at = d.arcs[id].to;
            path.push_back(at);
        }
        return path;
    };
    auto p1 = walk();
    auto p2 = walk();
    return {p1, p2};
}

}  // namespace detail

/// Minimum total cost of two arc-disjoint src->dst dipaths, with the paths as
/// witnesses; Infinity (and empty paths) when no two such dipaths exist.
inline DisjointPaths suurballe_pair(const Digraph& d, int src, int dst) {
    if (src == dst) throw std::invalid_argument("src == dst");
    auto first = detail::dijkstra_digraph(d, src);
    auto pair = detail::disjoint_pair_arcs(d, first, src, dst);
    if (!pair.found) return {};
    auto [p1, p2] = detail::decode_two_paths(d, pair.arc_ids, src, dst);
    return {Cost(pair.total), std::move(p1), std::move(p2)};
}

/// One-to-all form: fixed src, cheapest disjoint dipath pair towards every
/// node. The first Dijkstra is shared; each destination runs one residual
/// pass.
struct SuurballeAll {
    int src = 0;
    std::vector<Cost> pair_cost;              // per destination
    std::vector<std::vector<int>> pair_arcs;  // arc ids per destination (empty if infinite)
};

inline SuurballeAll suurballe_all(const Digraph& d, int src) {
    SuurballeAll out;
    out.src = src;
    out.pair_cost.assign(d.n, Cost::infinity());
    out.pair_arcs.assign(d.n, {});
    auto first = detail::dijkstra_digraph(d, src);
    for (int dst = 0; dst < d.n; ++dst) {
        if (dst == src) continue;
        auto pair = detail::disjoint_pair_arcs(d, first, src, dst);
        if (pair.found) {
            out.pair_cost[dst] = Cost(pair.total);
            out.pair_arcs[dst] = std::move(pair.arc_ids);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shortest 2-path spanning tree rooted at an edge.

struct Spst2 {
    Vertex u = 0, v = 0;
    Weight w_uv = 0;
    EdgeSet tree_edges;                 // realizing subgraph, root edge included
    std::map<Vertex, Cost> cycle_cost;  // delta^2(uv, w) for every w of G[uv]
    int component_size = 0;             // nu = |V(G[uv])|
    bool size_bound_met = true;         // |tree_edges| <= 4*nu
};

namespace detail {

inline WeightedGraph graph_from_edges(const WeightedGraph& parent, const EdgeSet& edges) {
    WeightedGraph out(parent.vertex_count());
    std::vector<Vertex> dead;
    for (Vertex v = 0; v < parent.vertex_count(); ++v)
        if (!parent.alive(v)) dead.push_back(v);
    out = out.remove_vertices(dead);
    for (const auto& [a, b] : edges) out.add_edge(a, b, parent.edge_weight(a, b));
    return out;
}

}  // namespace detail

/// Shortest 2-path spanning tree of root uv: a sparse subgraph in which every
/// vertex of the bi-component G[uv] lies on a minimum-cost cycle through uv.
///
/// Built by the digraph reduction: replace uv by two half-weight edges to a
/// new midpoint, direct every edge both ways, split every vertex into an
/// in/out pair joined by a zero-cost arc (unit vertex capacities), and take
/// cheapest disjoint dipath pairs from the midpoint to every vertex. Weights
/// are doubled during the reduction so the halves stay integral.
inline Spst2 spst2(const WeightedGraph& g, Vertex u, Vertex v) {
    const Weight wuv = g.edge_weight(u, v);
    auto comp = bicomponent_of(g, u, v);
    if (!comp) throw std::invalid_argument("spst2 root must not be a cut-edge");
    const EdgeSet& comp_edges = comp->edge_set();

    std::set<Vertex> comp_verts;
    for (const auto& [a, b] : comp_edges) {
        comp_verts.insert(a);
        comp_verts.insert(b);
    }

    const int n = g.vertex_count();
    const int z = n;  // midpoint replacing the root edge
    auto in_of = [](Vertex x) { return 2 * x; };
    auto out_of = [](Vertex x) { return 2 * x + 1; };

    Digraph d(2 * (n + 1));
    std::map<int, EdgeKey> edge_of_arc;
    for (Vertex x : comp_verts) d.add_arc(in_of(x), out_of(x), 0);
    for (const auto& [a, b] : comp_edges) {
        if (edge_key(a, b) == edge_key(u, v)) continue;  // replaced by the halves
        Weight w2 = 2 * g.edge_weight(a, b);
        edge_of_arc[d.add_arc(out_of(a), in_of(b), w2)] = edge_key(a, b);
        edge_of_arc[d.add_arc(out_of(b), in_of(a), w2)] = edge_key(a, b);
    }
    // Half-weight edges z-u and z-v; nothing may pass through z.
    edge_of_arc[d.add_arc(out_of(z), in_of(u), wuv)] = edge_key(u, v);
    edge_of_arc[d.add_arc(out_of(z), in_of(v), wuv)] = edge_key(u, v);

    auto all = suurballe_all(d, out_of(z));

    Spst2 t;
    t.u = u;
    t.v = v;
    t.w_uv = wuv;
    t.component_size = static_cast<int>(comp_verts.size());
    t.tree_edges.insert(edge_key(u, v));
    for (Vertex x : comp_verts) {
        Cost pc = all.pair_cost[in_of(x)];
        if (pc.is_infinite()) {
            t.cycle_cost[x] = Cost::infinity();  // cannot happen inside a bi-component
            continue;
        }
        t.cycle_cost[x] = Cost(pc.value / 2);
        for (int id : all.pair_arcs[in_of(x)]) {
            auto it = edge_of_arc.find(id);
            if (it != edge_of_arc.end()) t.tree_edges.insert(it->second);
        }
    }

    // The disjoint-pair structure keeps this near 2*nu in practice; if the
    // union ever exceeds the 4*nu bound, greedily drop removable edges.
    const size_t bound = 4 * static_cast<size_t>(t.component_size);
    if (t.tree_edges.size() > bound) {
        auto realizes = [&](const EdgeSet& edges) {
            WeightedGraph sub = detail::graph_from_edges(g, edges);
            for (Vertex x : comp_verts)
                if (cycle_cost_through_edge(sub, u, v, x) != t.cycle_cost[x]) return false;
            return true;
        };
        std::vector<EdgeKey> candidates;
        for (const auto& e : t.tree_edges)
            if (e != edge_key(u, v)) candidates.push_back(e);
        std::sort(candidates.begin(), candidates.end(), [&](const EdgeKey& a, const EdgeKey& b) {
            Weight wa = g.edge_weight(a.first, a.second);
            Weight wb = g.edge_weight(b.first, b.second);
            if (wa != wb) return wa > wb;
            return a > b;
        });
        for (const auto& e : candidates) {
            if (t.tree_edges.size() <= bound) break;
            EdgeSet trial = t.tree_edges;
            trial.erase(e);
            if (realizes(trial)) t.tree_edges = std::move(trial);
        }
        t.size_bound_met = t.tree_edges.size() <= bound;
    }
    return t;
}

// ---------------------------------------------------------------------------
// The bi-path spanner: repeatedly pick an edge whose 2-ball of radius 4W meets
// more than sqrt(n) of its endpoints' neighbors, keep a shortest 2-path
// spanning tree plus two depth-2 BFS trees, delete that neighborhood, and
// finally keep whatever survives.

struct BipathOptions {
    // The SPST^2 and the BFS trees are taken from the current working graph,
    // which is what the stretch argument uses; the frozen variants mirror the
    // other reading of the construction and exist for comparison runs.
    bool spst_on_frozen = false;
    bool bfs_on_frozen = false;
};

struct BipathIteration {
    EdgeKey root;
    size_t ball_size = 0;
    std::vector<Vertex> removed;
    size_t edges_added = 0;
};

struct BipathTrace {
    std::vector<BipathIteration> iterations;
    long long residual_edges = 0;
    WeightedGraph residual;  // working graph left after the loop
};

namespace detail {

// Unweighted BFS tree edges from root, depth <= depth_limit, id-ordered.
inline EdgeSet bfs_tree_edges(const WeightedGraph& g, Vertex root, int depth_limit) {
    EdgeSet out;
    if (!g.alive(root)) return out;
    std::vector<int> depth(g.vertex_count(), -1);
    std::queue<Vertex> q;
    depth[root] = 0;
    q.push(root);
    while (!q.empty()) {
        Vertex x = q.front();
        q.pop();
        if (depth[x] == depth_limit) continue;
        for (auto [y, w] : g.neighbors(x)) {
            if (depth[y] != -1) continue;
            depth[y] = depth[x] + 1;
            out.insert(edge_key(x, y));
            q.push(y);
        }
    }
    return out;
}

}  // namespace detail

inline std::pair<Subgraph, BipathTrace> bipath_spanner(const WeightedGraph& g,
                                                       const BipathOptions& opts = {}) {
    const long long n = g.vertex_count();
    const Weight w_max = g.max_weight();  // fixed before the loop, never recomputed
    const Cost radius = Cost(4 * w_max);

    WeightedGraph cur = g;
    Subgraph h(g);
    BipathTrace trace;
    EdgeSet discarded;  // unsuitable edges are never re-examined

    auto ball_of = [&](Vertex u, Vertex v) {
        std::set<Vertex> cand;
        for (auto [y, w] : cur.neighbors(u)) cand.insert(y);
        for (auto [y, w] : cur.neighbors(v)) cand.insert(y);
        cand.insert(u);
        cand.insert(v);
        EdgeCycleSolver solver(cur, u, v);
        std::vector<Vertex> ball;
        for (Vertex w : cand)
            if (solver.query(w) <= radius) ball.push_back(w);
        return ball;
    };

    while (true) {
        std::optional<std::pair<EdgeKey, std::vector<Vertex>>> pick;
        for (const auto& e : cur.edges()) {
            EdgeKey key = edge_key(e.u, e.v);
            if (discarded.count(key)) continue;
            auto ball = ball_of(e.u, e.v);
            const long long size = static_cast<long long>(ball.size());
            if (size * size > n) {
                pick = {key, std::move(ball)};
                break;
            }
            discarded.insert(key);
        }
        if (!pick) break;

        auto [key, ball] = *pick;
        auto [u, v] = key;
        size_t before = h.edge_count();

        const WeightedGraph& spst_src = opts.spst_on_frozen ? g : cur;
        h.add_edges(spst2(spst_src, u, v).tree_edges);
        const WeightedGraph& bfs_src = opts.bfs_on_frozen ? g : cur;
        h.add_edges(detail::bfs_tree_edges(bfs_src, u, 2));
        h.add_edges(detail::bfs_tree_edges(bfs_src, v, 2));

        cur = cur.remove_vertices(ball);
        trace.iterations.push_back({key, ball.size(), ball, h.edge_count() - before});
    }

    for (const auto& e : cur.edges()) h.add_edge(e.u, e.v);
    trace.residual_edges = cur.edge_count();
    trace.residual = cur;
    return {std::move(h), std::move(trace)};
}

// ---------------------------------------------------------------------------
// Sparsity certificate: if every edge uv of an unweighted graph has
// |B^2(uv, 2k) ∩ N(u) \ {u,v}| <= n^(1/k), the graph has at most
// 2*n^(1+1/k) edges. The ball-removal loop is executed as the certificate.

struct SparsityReport {
    bool hypothesis_holds = true;
    std::optional<EdgeKey> witness;  // violating edge when the hypothesis fails
    long long vertex_count = 0;      // id-universe n the bounds are taken against
    long long edge_count = 0;
    double bound = 0.0;  // 2*n^(1+1/k), for display
    bool bound_holds = false;
    int balls_removed = 0;

    bool ok() const { return hypothesis_holds && bound_holds; }
};

inline SparsityReport residual_sparsity_certificate(const WeightedGraph& g, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const long long n = g.vertex_count();
    SparsityReport rep;
    rep.vertex_count = n;
    rep.edge_count = g.edge_count();
    rep.bound = 2.0 * std::pow(static_cast<double>(n), 1.0 + 1.0 / k);

    // Weights set to one.
    WeightedGraph unit(g.vertex_count());
    {
        std::vector<Vertex> dead;
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (!g.alive(v)) dead.push_back(v);
        unit = unit.remove_vertices(dead);
        for (const auto& e : g.edges()) unit.add_edge(e.u, e.v, 1);
    }

    auto ipow = [](long long base, int exp) {
        __int128 r = 1;
        for (int i = 0; i < exp; ++i) r *= base;
        return r;
    };

    // Hypothesis: |B^2(uv,2k) ∩ N(u) \ {u,v}| <= n^(1/k), i.e. count^k <= n.
    for (const auto& e : unit.edges()) {
        EdgeCycleSolver solver(unit, e.u, e.v);
        long long count = 0;
        for (auto [w, wt] : unit.neighbors(e.u)) {
            if (w == e.v) continue;
            if (solver.query(w) <= Cost(2 * k)) ++count;
        }
        if (ipow(count, k) > static_cast<__int128>(n)) {
            rep.hypothesis_holds = false;
            rep.witness = edge_key(e.u, e.v);
            return rep;
        }
    }

    // Remove 1-balls: for i := k-1 down to 0, while some |B(u,i)| >= n^(i/k)
    // remove B(u,i). Runs to completion as the executable certificate.
    WeightedGraph cur = unit;
    for (int i = k - 1; i >= 0; --i) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (Vertex u : cur.vertices()) {
                auto ball = hop_ball(cur, u, i);
                if (ipow(static_cast<long long>(ball.size()), k) >= ipow(n, i)) {
                    cur = cur.remove_vertices(ball);
                    ++rep.balls_removed;
                    changed = true;
                    break;
                }
            }
        }
    }

    rep.bound_holds = ipow(rep.edge_count, k) <= ipow(2, k) * ipow(n, k + 1);
    return rep;
}

}  // namespace mps

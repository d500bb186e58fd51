#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "mps/graph.hpp"

// Exact computation of the graph metrics everything else is judged against:
// weighted shortest paths, the p-multipath cost (minimum total weight of p
// internally vertex-disjoint paths), edge-rooted cycle costs, 1- and 2-balls,
// and small-instance brute-force oracles.

namespace mps {

inline constexpr int kBruteForceGuard = 12;

// ---------------------------------------------------------------------------
// Shortest paths

inline std::vector<Cost> dijkstra_all(const WeightedGraph& g, Vertex src) {
    std::vector<Cost> dist(g.vertex_count(), Cost::infinity());
    if (!g.alive(src)) throw std::invalid_argument("dijkstra from removed vertex");
    using Item = std::pair<long long, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u].value) continue;
        for (auto [v, w] : g.neighbors(u)) {
            long long nd = d + w;
            if (nd < dist[v].value) {
                dist[v] = nd;
                pq.push({nd, v});
            }
        }
    }
    return dist;
}

/// d_G(u,v): exact weighted shortest-path cost, Infinity when disconnected.
inline Cost shortest_path_cost(const WeightedGraph& g, Vertex u, Vertex v) {
    if (!g.alive(v)) throw std::invalid_argument("invalid vertex");
    if (u == v) return 0;
    return dijkstra_all(g, u)[v];
}

/// Vertices within r hops of u (hop metric, weights ignored).
inline std::vector<Vertex> hop_ball(const WeightedGraph& g, Vertex u, int r) {
    if (r < 0) throw std::invalid_argument("negative radius");
    if (!g.alive(u)) throw std::invalid_argument("invalid vertex");
    std::vector<int> depth(g.vertex_count(), -1);
    std::queue<Vertex> q;
    depth[u] = 0;
    q.push(u);
    std::vector<Vertex> out{u};
    while (!q.empty()) {
        Vertex x = q.front();
        q.pop();
        if (depth[x] == r) continue;
        for (auto [y, w] : g.neighbors(x)) {
            if (depth[y] == -1) {
                depth[y] = depth[x] + 1;
                out.push_back(y);
                q.push(y);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Min-cost flow on unit-capacity digraphs (successive shortest paths with
// Dijkstra over reduced costs; all arc costs are non-negative).

namespace detail {

class MinCostFlow {
public:
    explicit MinCostFlow(int n) : head_(n, -1) {}

    int add_arc(int from, int to, long long cap, long long cost) {
        int id = static_cast<int>(arcs_.size());
        arcs_.push_back({to, next_of(from), cap, cost});
        head_[from] = id;
        arcs_.push_back({from, next_of(to), 0, -cost});
        head_[to] = id + 1;
        return id;
    }

    // Ships up to `want` units src->dst one augmentation at a time.
    // Returns (units shipped, total cost).
    std::pair<int, long long> run(int src, int dst, int want) {
        const int n = static_cast<int>(head_.size());
        std::vector<long long> pot(n, 0);
        int shipped = 0;
        while (shipped < want) {
            std::vector<long long> dist(n, kUnreached);
            std::vector<int> via(n, -1);
            using Item = std::pair<long long, int>;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
            dist[src] = 0;
            pq.push({0, src});
            while (!pq.empty()) {
                auto [d, u] = pq.top();
                pq.pop();
                if (d > dist[u]) continue;
                for (int id = head_[u]; id != -1; id = arcs_[id].next) {
                    const Arc& a = arcs_[id];
                    if (a.cap <= 0) continue;
                    long long nd = d + a.cost + pot[u] - pot[a.to];
                    if (nd < dist[a.to]) {
                        dist[a.to] = nd;
                        via[a.to] = id;
                        pq.push({nd, a.to});
                    }
                }
            }
            if (dist[dst] == kUnreached) break;
            for (int v = 0; v < n; ++v)
                if (dist[v] < kUnreached) pot[v] += dist[v];
            for (int v = dst; v != src;) {
                Arc& a = arcs_[via[v]];
                a.cap -= 1;
                arcs_[via[v] ^ 1].cap += 1;
                v = arcs_[via[v] ^ 1].to;
            }
            ++shipped;
        }
        long long total = 0;
        for (size_t i = 0; i < arcs_.size(); i += 2)
            total += arcs_[i].cost * arcs_[i ^ 1].cap;  // reverse cap == flow carried
        return {shipped, total};
    }

    long long flow_on(int arc_id) const { return arcs_[arc_id ^ 1].cap; }

    void snapshot() { pristine_ = arcs_; }
    void restore() { arcs_ = pristine_; }
    void set_cap(int arc_id, long long cap) {
        arcs_[arc_id].cap = cap;
        arcs_[arc_id ^ 1].cap = 0;
    }

private:
    static constexpr long long kUnreached = std::numeric_limits<long long>::max() / 4;

    struct Arc {
        int to;
        int next;
        long long cap;
        long long cost;
    };

    int next_of(int v) const { return head_[v]; }

    std::vector<int> head_;
    std::vector<Arc> arcs_;
    std::vector<Arc> pristine_;
};

// Split-digraph ids: in(x) = 2x, out(x) = 2x+1.
inline int split_in(Vertex x) { return 2 * x; }
inline int split_out(Vertex x) { return 2 * x + 1; }

}  // namespace detail

// ---------------------------------------------------------------------------
// p-multipath cost

/// Witness collection of p internally vertex-disjoint u-v paths.
struct PathSet {
    Vertex u = 0, v = 0;
    std::vector<std::vector<Vertex>> paths;
    Cost total_cost;
};

struct MultipathResult {
    Cost cost;
    std::optional<PathSet> witness;  // present iff cost is finite
};

/// Reusable delta^p solver for one graph: the split digraph (every vertex an
/// in/out pair joined by a capacity-1 zero-cost arc, every undirected edge a
/// pair of antiparallel unit arcs) is built once; queries reset capacities.
/// Vertex capacities enforce internal disjointness exactly; the endpoints'
/// own split arcs are widened to p per query, which changes nothing because
/// no optimal flow routes through its endpoints.
class MultipathSolver {
public:
    explicit MultipathSolver(const WeightedGraph& g)
        : g_(&g), flow_(2 * g.vertex_count()), split_arc_(g.vertex_count(), -1) {
        for (Vertex x : g.vertices())
            split_arc_[x] = flow_.add_arc(detail::split_in(x), detail::split_out(x), 1, 0);
        for (const auto& e : g.edges()) {
            int id1 = flow_.add_arc(detail::split_out(e.u), detail::split_in(e.v), 1, e.w);
            real_arcs_.emplace_back(e.u, e.v, id1);
            int id2 = flow_.add_arc(detail::split_out(e.v), detail::split_in(e.u), 1, e.w);
            real_arcs_.emplace_back(e.v, e.u, id2);
        }
        flow_.snapshot();
    }

    MultipathResult query(int p, Vertex u, Vertex v, bool want_witness = true) {
        if (p < 1) throw std::invalid_argument("p must be >= 1");
        if (u == v) throw std::invalid_argument("multipath endpoints must differ");
        if (!g_->alive(u) || !g_->alive(v)) throw std::invalid_argument("invalid vertex");

        flow_.restore();
        flow_.set_cap(split_arc_[u], p);
        flow_.set_cap(split_arc_[v], p);
        auto [units, cost] = flow_.run(detail::split_out(u), detail::split_in(v), p);
        if (units < p) return {Cost::infinity(), std::nullopt};
        if (!want_witness) return {Cost(cost), std::nullopt};

        // Decompose into p paths; ties broken by smallest next vertex id.
        std::map<Vertex, std::vector<Vertex>> next_of;
        for (auto [a, b, id] : real_arcs_)
            if (flow_.flow_on(id) > 0) next_of[a].push_back(b);
        for (auto& [a, outs] : next_of) std::sort(outs.begin(), outs.end());

        PathSet ws{u, v, {}, Cost(cost)};
        for (int i = 0; i < p; ++i) {
            std::vector<Vertex> path{u};
            Vertex at = u;
            while (at != v) {
                auto& outs = next_of[at];
                if (outs.empty()) throw std::logic_error("flow decomposition stranded");
                at = outs.front();
                outs.erase(outs.begin());
                path.push_back(at);
            }
            ws.paths.push_back(std::move(path));
        }
        return {Cost(cost), std::move(ws)};
    }

private:
    const WeightedGraph* g_;
    detail::MinCostFlow flow_;
    std::vector<int> split_arc_;
    std::vector<std::tuple<Vertex, Vertex, int>> real_arcs_;
};

/// delta^p(u,v): minimum cost of p pairwise internally vertex-disjoint u-v
/// paths, Infinity if fewer than p exist.
inline MultipathResult multipath_cost(const WeightedGraph& g, int p, Vertex u, Vertex v) {
    MultipathSolver solver(g);
    return solver.query(p, u, v);
}

// ---------------------------------------------------------------------------
// Brute-force oracle for delta^p (guard: alive count <= 12)

namespace detail {

struct SimplePath {
    std::uint32_t internal_mask;  // over compact alive-vertex indexing
    long long cost;
};

inline void enumerate_paths(const WeightedGraph& g, const std::vector<int>& compact, Vertex v,
                            Vertex at, std::uint32_t visited, long long cost, int max_edges,
                            int edges_used, std::uint32_t internal, std::vector<SimplePath>& out) {
    if (at == v) {
        out.push_back({internal, cost});
        return;
    }
    if (edges_used == max_edges) return;
    for (auto [y, w] : g.neighbors(at)) {
        const std::uint32_t bit = 1u << compact[y];
        if (visited & bit) continue;
        std::uint32_t internal2 = internal | (y == v ? 0u : bit);
        enumerate_paths(g, compact, v, y, visited | bit, cost + w, max_edges, edges_used + 1,
                        internal2, out);
    }
}

inline std::vector<SimplePath> all_simple_paths(const WeightedGraph& g, Vertex u, Vertex v,
                                                int max_edges) {
    std::vector<int> compact(g.vertex_count(), -1);
    int idx = 0;
    for (Vertex x : g.vertices()) compact[x] = idx++;
    std::vector<SimplePath> out;
    enumerate_paths(g, compact, v, u, 1u << compact[u], 0, max_edges, 0, 0, out);
    return out;
}

}  // namespace detail

/// Exhaustive delta^p over tuples of internally vertex-disjoint simple paths.
/// Independent of the flow implementation; used as its oracle.
inline Cost multipath_cost_bruteforce(const WeightedGraph& g, int p, Vertex u, Vertex v,
                                      int guard = kBruteForceGuard) {
    if (p < 1) throw std::invalid_argument("p must be >= 1");
    if (u == v) throw std::invalid_argument("multipath endpoints must differ");
    if (g.alive_count() > guard)
        throw GuardError("brute-force oracle limited to " + std::to_string(guard) + " vertices");

    auto paths = detail::all_simple_paths(g, u, v, g.alive_count());
    // Keep the cheapest path per internal-vertex mask: two distinct paths with
    // the same non-empty mask can never be both picked, and the empty mask
    // (the single edge uv) occurs at most once in a simple graph.
    std::map<std::uint32_t, long long> best;
    for (const auto& sp : paths) {
        auto it = best.find(sp.internal_mask);
        if (it == best.end() || sp.cost < it->second) best[sp.internal_mask] = sp.cost;
    }
    std::vector<std::pair<std::uint32_t, long long>> options(best.begin(), best.end());

    long long best_total = Cost::kInf;
    // Choose p pairwise-disjoint masks, options scanned in index order.
    auto rec = [&](auto&& self, size_t from, int left, std::uint32_t used, long long acc) -> void {
        if (left == 0) {
            best_total = std::min(best_total, acc);
            return;
        }
        if (acc >= best_total) return;
        for (size_t i = from; i < options.size(); ++i) {
            auto [mask, c] = options[i];
            if (mask & used) continue;
            self(self, i + 1, left - 1, used | mask, acc + c);
        }
    };
    rec(rec, 0, p, 0, 0);
    return best_total == Cost::kInf ? Cost::infinity() : Cost(best_total);
}

// ---------------------------------------------------------------------------
// Edge-rooted cycle costs and 2-balls

/// Reusable solver for delta^2(uv, w) with the edge uv fixed: minimum cost of
/// a cycle through uv and w, Infinity when none exists. For w in {u, v} this
/// is the minimum cycle through uv. Cycles are w(uv) plus two internally
/// disjoint paths from w to u and v in g minus uv, computed as a 2-unit flow
/// from w to a super-sink fed by u and v with unit vertex capacities.
class EdgeCycleSolver {
public:
    EdgeCycleSolver(const WeightedGraph& g, Vertex u, Vertex v)
        : g_(&g), u_(u), v_(v), w_uv_(g.edge_weight(u, v)), flow_(2 * g.vertex_count() + 1) {
        const int sink = 2 * g.vertex_count();
        for (Vertex x : g.vertices())
            if (x != u && x != v) flow_.add_arc(detail::split_in(x), detail::split_out(x), 1, 0);
        for (const auto& e : g.edges()) {
            if (edge_key(e.u, e.v) == edge_key(u, v)) continue;  // the root edge itself
            auto dir = [&](Vertex a, Vertex b) {
                if (a == u || a == v) return;  // u and v only terminate paths
                flow_.add_arc(detail::split_out(a), detail::split_in(b), 1, e.w);
            };
            dir(e.u, e.v);
            dir(e.v, e.u);
        }
        flow_.add_arc(detail::split_in(u), sink, 1, 0);
        flow_.add_arc(detail::split_in(v), sink, 1, 0);
        flow_.snapshot();
    }

    Cost query(Vertex w) {
        if (!g_->alive(w)) throw std::invalid_argument("invalid vertex");
        if (w == u_ || w == v_) {
            Cost d = endpoint_distance();
            return d.is_infinite() ? Cost::infinity() : Cost(w_uv_) + d;
        }
        flow_.restore();
        auto [units, cost] = flow_.run(detail::split_out(w), 2 * g_->vertex_count(), 2);
        if (units < 2) return Cost::infinity();
        return Cost(w_uv_ + cost);
    }

private:
    // Shortest u-v distance avoiding the root edge, computed once.
    Cost endpoint_distance() {
        if (endpoint_dist_) return *endpoint_dist_;
        std::vector<long long> dist(g_->vertex_count(), Cost::kInf);
        using Item = std::pair<long long, Vertex>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[u_] = 0;
        pq.push({0, u_});
        while (!pq.empty()) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d > dist[x]) continue;
            for (auto [y, w] : g_->neighbors(x)) {
                if (edge_key(x, y) == edge_key(u_, v_)) continue;
                if (d + w < dist[y]) {
                    dist[y] = d + w;
                    pq.push({d + w, y});
                }
            }
        }
        endpoint_dist_ = dist[v_] == Cost::kInf ? Cost::infinity() : Cost(dist[v_]);
        return *endpoint_dist_;
    }

    const WeightedGraph* g_;
    Vertex u_, v_;
    Weight w_uv_;
    detail::MinCostFlow flow_;
    std::optional<Cost> endpoint_dist_;
};

inline Cost cycle_cost_through_edge(const WeightedGraph& g, Vertex u, Vertex v, Vertex w) {
    EdgeCycleSolver solver(g, u, v);
    return solver.query(w);
}

/// B^2(uv, r): vertices whose cheapest cycle through the edge uv costs <= r.
inline std::vector<Vertex> two_ball(const WeightedGraph& g, Vertex u, Vertex v, Cost r) {
    EdgeCycleSolver solver(g, u, v);
    std::vector<Vertex> out;
    for (Vertex w : g.vertices())
        if (solver.query(w) <= r) out.push_back(w);
    return out;
}

// ---------------------------------------------------------------------------
// mu_s / kappa_s brute-force quantities (guard: alive count <= 12)

/// Maximum number of pairwise internally vertex-disjoint u-v paths of at most
/// s edges. Exhaustive.
inline int mu_s(const WeightedGraph& g, Vertex u, Vertex v, int s, int guard = kBruteForceGuard) {
    if (g.alive_count() > guard) throw GuardError("mu_s guard exceeded");
    if (u == v || !g.alive(u) || !g.alive(v)) throw std::invalid_argument("bad endpoints");
    auto paths = detail::all_simple_paths(g, u, v, s);
    std::set<std::uint32_t> mask_set;
    for (const auto& sp : paths) mask_set.insert(sp.internal_mask);
    std::vector<std::uint32_t> masks(mask_set.begin(), mask_set.end());
    int best = 0;
    auto rec = [&](auto&& self, size_t from, std::uint32_t used, int count) -> void {
        best = std::max(best, count);
        for (size_t i = from; i < masks.size(); ++i)
            if (!(masks[i] & used)) self(self, i + 1, used | masks[i], count + 1);
    };
    rec(rec, 0, 0, 0);
    return best;
}

/// Minimum number of vertices (outside {u,v}) whose deletion destroys every
/// u-v path of at most s edges. Requires non-adjacent endpoints.
inline int kappa_s(const WeightedGraph& g, Vertex u, Vertex v, int s, int guard = kBruteForceGuard) {
    if (g.alive_count() > guard) throw GuardError("kappa_s guard exceeded");
    if (u == v || !g.alive(u) || !g.alive(v)) throw std::invalid_argument("bad endpoints");
    if (g.has_edge(u, v)) throw std::invalid_argument("kappa_s needs non-adjacent endpoints");

    std::vector<Vertex> others;
    for (Vertex x : g.vertices())
        if (x != u && x != v) others.push_back(x);

    auto has_short_path = [&](std::uint32_t removed) {
        // BFS over <= s hops avoiding removed vertices.
        std::vector<int> depth(g.vertex_count(), -1);
        auto is_removed = [&](Vertex x) {
            for (size_t i = 0; i < others.size(); ++i)
                if (others[i] == x) return (removed >> i) & 1u;
            return std::uint32_t{0};
        };
        std::queue<Vertex> q;
        depth[u] = 0;
        q.push(u);
        while (!q.empty()) {
            Vertex x = q.front();
            q.pop();
            if (depth[x] == s) continue;
            for (auto [y, w] : g.neighbors(x)) {
                if (depth[y] != -1 || is_removed(y)) continue;
                if (y == v) return true;
                depth[y] = depth[x] + 1;
                q.push(y);
            }
        }
        return false;
    };

    for (size_t size = 0; size <= others.size(); ++size) {
        // All subsets of `others` of this size.
        std::vector<int> idx(size);
        auto try_subsets = [&](auto&& self, size_t from, size_t chosen) -> bool {
            if (chosen == size) {
                std::uint32_t mask = 0;
                for (size_t i = 0; i < size; ++i) mask |= 1u << idx[i];
                return !has_short_path(mask);
            }
            for (size_t i = from; i < others.size(); ++i) {
                idx[chosen] = static_cast<int>(i);
                if (self(self, i + 1, chosen + 1)) return true;
            }
            return false;
        };
        if (try_subsets(try_subsets, 0, 0)) return static_cast<int>(size);
    }
    return static_cast<int>(others.size());
}

// ---------------------------------------------------------------------------
// Stretch verification

struct PairStretch {
    Vertex u, v;
    Cost dg, dh;
};

struct StretchReport {
    int p = 1;
    Rational alpha{1};
    Cost beta{0};
    std::vector<PairStretch> pairs;
    std::vector<size_t> violations;  // indices into pairs

    // Worst dh/dg over pairs with finite dg; infinite when some dh is
    // infinite against a finite dg.
    Rational worst_ratio{1};
    std::optional<std::pair<Vertex, Vertex>> worst_pair;
    bool worst_infinite = false;

    // Smallest extra beta that would make every pair pass at this alpha.
    Cost additive_slack{0};

    bool ok() const { return violations.empty(); }

    void write_csv(std::ostream& os) const {
        os << "u,v,delta_g,delta_h,ratio\n";
        for (const auto& pr : pairs) {
            os << pr.u << "," << pr.v << "," << pr.dg.str() << "," << pr.dh.str() << ",";
            if (pr.dg.is_infinite())
                os << "inf";
            else if (pr.dh.is_infinite())
                os << "inf";
            else
                os << static_cast<double>(pr.dh.value) / static_cast<double>(pr.dg.value);
            os << "\n";
        }
    }
};

/// All-pairs exact check of delta^p_H <= alpha * delta^p_G + beta.
/// Violations are data, not errors.
inline StretchReport verify_stretch(const WeightedGraph& g, const Subgraph& h, int p,
                                    Rational alpha, Cost beta) {
    StretchReport rep;
    rep.p = p;
    rep.alpha = alpha;
    rep.beta = beta;
    WeightedGraph hg = h.graph();
    MultipathSolver solver_g(g);
    MultipathSolver solver_h(hg);
    auto verts = g.vertices();
    for (size_t i = 0; i < verts.size(); ++i) {
        for (size_t j = i + 1; j < verts.size(); ++j) {
            Vertex u = verts[i], v = verts[j];
            Cost dg = solver_g.query(p, u, v, false).cost;
            Cost dh = solver_h.query(p, u, v, false).cost;
            rep.pairs.push_back({u, v, dg, dh});
            size_t idx = rep.pairs.size() - 1;
            if (!within_stretch(dh, alpha, dg, beta)) rep.violations.push_back(idx);
            if (dg.is_infinite()) continue;
            if (dh.is_infinite()) {
                if (!rep.worst_infinite) {
                    rep.worst_infinite = true;
                    rep.worst_pair = {u, v};
                }
                continue;
            }
            Rational ratio(dh.value, std::max(1LL, dg.value));
            if (!rep.worst_infinite && (!rep.worst_pair || ratio > rep.worst_ratio)) {
                rep.worst_ratio = ratio;
                rep.worst_pair = {u, v};
            }
            // Slack needed at this alpha: dh - alpha*dg, rounded up.
            __int128 deficit = static_cast<__int128>(dh.value) * alpha.den -
                               static_cast<__int128>(alpha.num) * dg.value;
            if (deficit > 0) {
                long long need = static_cast<long long>((deficit + alpha.den - 1) / alpha.den);
                if (Cost(need) > rep.additive_slack) rep.additive_slack = Cost(need);
            }
        }
    }
    if (rep.worst_infinite) rep.additive_slack = Cost::infinity();
    return rep;
}

}  // namespace mps

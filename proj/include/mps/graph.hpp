#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stack>
#include <string>
#include <utility>
#include <vector>

#include "mps/cost.hpp"
#include "mps/rng.hpp"

namespace mps {

using Vertex = int;
using EdgeKey = std::pair<Vertex, Vertex>;  // normalized: first < second
using EdgeSet = std::set<EdgeKey>;

inline EdgeKey edge_key(Vertex u, Vertex v) {
    return u < v ? EdgeKey{u, v} : EdgeKey{v, u};
}

struct WEdge {
    Vertex u;
    Vertex v;
    Weight w;
};

/// Undirected simple graph with strictly positive integer weights.
///
/// Vertex ids are stable: removing vertices tombstones them instead of
/// re-indexing, so references held across construction rounds stay valid.
/// Graphs are treated as immutable once built; mutating operations return
/// new values.
class WeightedGraph {
public:
    WeightedGraph() = default;

    explicit WeightedGraph(int n) : n_(n), alive_(n, 1), adj_(n) {
        if (n < 0) throw std::invalid_argument("negative vertex count");
    }

    void add_edge(Vertex u, Vertex v, Weight w) {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
        if (w <= 0) throw std::invalid_argument("non-positive weight on edge " +
                                                std::to_string(u) + "-" + std::to_string(v));
        if (has_edge(u, v)) throw std::invalid_argument("duplicate edge " +
                                                        std::to_string(u) + "-" + std::to_string(v));
        insert_adj(u, v, w);
        insert_adj(v, u, w);
        ++m_;
        max_w_ = std::max(max_w_, w);
    }

    // Parallel edges collapse to the minimum weight. Used by generators whose
    // raw output may not be simple; a simple graph always comes out.
    void add_edge_collapse(Vertex u, Vertex v, Weight w) {
        if (u == v) return;
        if (auto existing = find_weight(u, v)) {
            if (w < *existing) set_weight(u, v, w);
            recompute_max_weight();
            return;
        }
        add_edge(u, v, w);
    }

    int vertex_count() const { return n_; }

    int alive_count() const {
        int c = 0;
        for (char a : alive_) c += a;
        return c;
    }

    bool alive(Vertex v) const { return v >= 0 && v < n_ && alive_[v]; }

    std::vector<Vertex> vertices() const {
        std::vector<Vertex> out;
        out.reserve(n_);
        for (Vertex v = 0; v < n_; ++v)
            if (alive_[v]) out.push_back(v);
        return out;
    }

    long long edge_count() const { return m_; }

    /// Maximum edge weight W; 0 for an edgeless graph.
    Weight max_weight() const { return max_w_; }

    bool has_edge(Vertex u, Vertex v) const { return find_weight(u, v).has_value(); }

    Weight edge_weight(Vertex u, Vertex v) const {
        auto w = find_weight(u, v);
        if (!w) throw std::invalid_argument("no edge " + std::to_string(u) + "-" + std::to_string(v));
        return *w;
    }

    const std::vector<std::pair<Vertex, Weight>>& neighbors(Vertex u) const {
        check_vertex(u);
        return adj_[u];
    }

    std::vector<WEdge> edges() const {
        std::vector<WEdge> out;
        out.reserve(static_cast<size_t>(m_));
        for (Vertex u = 0; u < n_; ++u)
            for (auto [v, w] : adj_[u])
                if (u < v) out.push_back({u, v, w});
        return out;
    }

    /// Deletes S and all incident edges; ids of the surviving vertices are
    /// unchanged (tombstoning).
    WeightedGraph remove_vertices(const std::vector<Vertex>& s) const {
        std::vector<char> dead(n_, 0);
        for (Vertex v : s) {
            check_vertex(v);
            dead[v] = 1;
        }
        WeightedGraph out(n_);
        for (Vertex v = 0; v < n_; ++v) out.alive_[v] = alive_[v] && !dead[v];
        for (Vertex u = 0; u < n_; ++u) {
            if (!out.alive_[u]) continue;
            for (auto [v, w] : adj_[u])
                if (u < v && out.alive_[v]) {
                    out.insert_adj(u, v, w);
                    out.insert_adj(v, u, w);
                    ++out.m_;
                }
        }
        out.recompute_max_weight();
        return out;
    }

    bool operator==(const WeightedGraph& other) const {
        return n_ == other.n_ && alive_ == other.alive_ && adj_ == other.adj_;
    }

private:
    void check_vertex(Vertex v) const {
        if (v < 0 || v >= n_) throw std::invalid_argument("vertex " + std::to_string(v) + " out of range");
        if (!alive_[v]) throw std::invalid_argument("vertex " + std::to_string(v) + " was removed");
    }

    void insert_adj(Vertex u, Vertex v, Weight w) {
        auto& row = adj_[u];
        auto it = std::lower_bound(row.begin(), row.end(), v,
                                   [](const auto& e, Vertex x) { return e.first < x; });
        row.insert(it, {v, w});
    }

    std::optional<Weight> find_weight(Vertex u, Vertex v) const {
        if (u < 0 || u >= n_ || v < 0 || v >= n_) return std::nullopt;
        const auto& row = adj_[u];
        auto it = std::lower_bound(row.begin(), row.end(), v,
                                   [](const auto& e, Vertex x) { return e.first < x; });
        if (it != row.end() && it->first == v) return it->second;
        return std::nullopt;
    }

    void set_weight(Vertex u, Vertex v, Weight w) {
        for (auto& e : adj_[u])
            if (e.first == v) e.second = w;
        for (auto& e : adj_[v])
            if (e.first == u) e.second = w;
    }

    void recompute_max_weight() {
        max_w_ = 0;
        for (Vertex u = 0; u < n_; ++u)
            for (auto [v, w] : adj_[u])
                if (u < v) max_w_ = std::max(max_w_, w);
    }

    int n_ = 0;
    long long m_ = 0;
    Weight max_w_ = 0;
    std::vector<char> alive_;
    std::vector<std::vector<std::pair<Vertex, Weight>>> adj_;
};

/// Edge subset of a parent graph. All parent vertices are retained and
/// weights are inherited unchanged.
class Subgraph {
public:
    explicit Subgraph(const WeightedGraph& parent) : parent_(&parent) {}

    Subgraph(const WeightedGraph& parent, EdgeSet edges) : parent_(&parent), edges_(std::move(edges)) {
        for (const auto& [u, v] : edges_)
            parent.edge_weight(u, v);  // must exist
    }

    const WeightedGraph& parent() const { return *parent_; }
    const EdgeSet& edge_set() const { return edges_; }
    size_t edge_count() const { return edges_.size(); }
    bool contains(Vertex u, Vertex v) const { return edges_.count(edge_key(u, v)) > 0; }

    void add_edge(Vertex u, Vertex v) {
        parent_->edge_weight(u, v);
        edges_.insert(edge_key(u, v));
    }

    void add_edges(const EdgeSet& es) {
        for (const auto& [u, v] : es) add_edge(u, v);
    }

    /// Materializes the subgraph as a standalone WeightedGraph over the same
    /// vertex universe (same tombstones as the parent).
    WeightedGraph graph() const {
        std::vector<Vertex> dead;
        for (Vertex v = 0; v < parent_->vertex_count(); ++v)
            if (!parent_->alive(v)) dead.push_back(v);
        WeightedGraph out(parent_->vertex_count());
        out = out.remove_vertices(dead);
        for (const auto& [u, v] : edges_) out.add_edge(u, v, parent_->edge_weight(u, v));
        return out;
    }

    static Subgraph whole(const WeightedGraph& g) {
        Subgraph s(g);
        for (const auto& e : g.edges()) s.add_edge(e.u, e.v);
        return s;
    }

private:
    const WeightedGraph* parent_;
    EdgeSet edges_;
};

// ---------------------------------------------------------------------------
// Structural queries

inline std::vector<Vertex> neighbor_set(const WeightedGraph& g, Vertex u) {
    std::vector<Vertex> out;
    out.reserve(g.neighbors(u).size());
    for (auto [v, w] : g.neighbors(u)) out.push_back(v);
    return out;
}

/// 2-vertex-connected component containing the edge uv, or nullopt when uv is
/// a cut-edge (an edge on no cycle).
inline std::optional<Subgraph> bicomponent_of(const WeightedGraph& g, Vertex u, Vertex v) {
    g.edge_weight(u, v);
    const int n = g.vertex_count();
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<std::pair<Vertex, Vertex>> estack;
    std::optional<EdgeSet> found;
    int timer = 0;

    // Iterative Hopcroft-Tarjan; pops a component when an articulation point
    // closes it and keeps the one holding uv.
    struct Frame {
        Vertex vert;
        Vertex parent;
        size_t edge_idx;
    };
    auto wanted = edge_key(u, v);
    for (Vertex root : g.vertices()) {
        if (disc[root] != -1 || found) continue;
        std::vector<Frame> stack{{root, -1, 0}};
        disc[root] = low[root] = timer++;
        while (!stack.empty() && !found) {
            Frame& f = stack.back();
            const auto& row = g.neighbors(f.vert);
            if (f.edge_idx < row.size()) {
                Vertex to = row[f.edge_idx].first;
                ++f.edge_idx;
                if (to == f.parent) continue;
                if (disc[to] == -1) {
                    estack.push_back({f.vert, to});
                    disc[to] = low[to] = timer++;
                    stack.push_back({to, f.vert, 0});
                } else if (disc[to] < disc[f.vert]) {
                    estack.push_back({f.vert, to});
                    low[f.vert] = std::min(low[f.vert], disc[to]);
                }
            } else {
                Vertex child = f.vert;
                stack.pop_back();
                if (stack.empty()) break;
                Vertex par = stack.back().vert;
                low[par] = std::min(low[par], low[child]);
                if (low[child] >= disc[par]) {
                    EdgeSet comp;
                    while (!estack.empty()) {
                        auto [a, b] = estack.back();
                        if (disc[a] < disc[child] && a != par) break;
                        estack.pop_back();
                        comp.insert(edge_key(a, b));
                        if (a == par && b == child) break;
                    }
                    if (comp.count(wanted)) {
                        found = std::move(comp);
                    }
                }
            }
        }
    }
    if (!found || found->size() <= 1) return std::nullopt;  // bridge: no cycle through uv
    return Subgraph(g, *found);
}

// ---------------------------------------------------------------------------
// File format: optional "# n=<n>" header, then "u v w" lines. '#' starts a
// comment. Without a header the vertex count is max id + 1.

inline WeightedGraph load_graph(std::istream& in) {
    std::string line;
    int declared_n = -1;
    std::vector<WEdge> edges;
    Vertex max_id = -1;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        std::string body = hash == std::string::npos ? line : line.substr(0, hash);
        if (hash != std::string::npos && declared_n < 0) {
            std::string comment = line.substr(hash + 1);
            auto pos = comment.find("n=");
            if (pos != std::string::npos) {
                try {
                    declared_n = std::stoi(comment.substr(pos + 2));
                } catch (...) {
                    throw ParseError("bad header on line " + std::to_string(lineno));
                }
            }
        }
        std::istringstream ss(body);
        Vertex a, b;
        long long w;
        if (!(ss >> a)) continue;  // blank or comment-only line
        if (!(ss >> b >> w)) throw ParseError("malformed edge on line " + std::to_string(lineno));
        std::string rest;
        if (ss >> rest) throw ParseError("trailing tokens on line " + std::to_string(lineno));
        edges.push_back({a, b, w});
        max_id = std::max({max_id, a, b});
    }
    int n = declared_n >= 0 ? declared_n : max_id + 1;
    if (max_id >= n) throw ParseError("vertex id " + std::to_string(max_id) + " outside declared n=" + std::to_string(n));
    WeightedGraph g(n);
    for (const auto& e : edges) g.add_edge(e.u, e.v, e.w);
    return g;
}

inline WeightedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_graph(in);
}

inline void save_graph(const WeightedGraph& g, std::ostream& out,
                       const std::vector<std::string>& comments = {}) {
    out << "# n=" << g.vertex_count() << "\n";
    for (const auto& c : comments) out << "# " << c << "\n";
    for (const auto& e : g.edges()) out << e.u << " " << e.v << " " << e.w << "\n";
}

inline void save_graph(const WeightedGraph& g, const std::string& path,
                       const std::vector<std::string>& comments = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    save_graph(g, out, comments);
}

inline void save_subgraph(const Subgraph& h, std::ostream& out,
                          const std::vector<std::string>& comments = {}) {
    const auto& g = h.parent();
    out << "# n=" << g.vertex_count() << "\n";
    for (const auto& c : comments) out << "# " << c << "\n";
    for (const auto& [u, v] : h.edge_set()) out << u << " " << v << " " << g.edge_weight(u, v) << "\n";
}

inline void save_subgraph(const Subgraph& h, const std::string& path,
                          const std::vector<std::string>& comments = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    save_subgraph(h, out, comments);
}

// ---------------------------------------------------------------------------
// Generators

struct RandomGraphSpec {
    int n = 0;
    double edge_prob = 0.0;
    Weight w_min = 1;
    Weight w_max = 1;
    std::uint64_t seed = 0;
};

/// G(n, p) with uniform integer weights. A pure function of its parameters:
/// each unordered pair draws from its own substream, so results do not depend
/// on iteration order.
inline WeightedGraph gen_random(const RandomGraphSpec& spec) {
    if (spec.n < 0 || spec.edge_prob < 0.0 || spec.edge_prob > 1.0 || spec.w_min < 1 ||
        spec.w_min > spec.w_max)
        throw std::invalid_argument("bad random graph spec");
    WeightedGraph g(spec.n);
    for (Vertex u = 0; u < spec.n; ++u) {
        for (Vertex v = u + 1; v < spec.n; ++v) {
            const auto key = rng::derive(spec.seed, rng::kSaltEdge, static_cast<std::uint64_t>(u),
                                         static_cast<std::uint64_t>(v));
            if (rng::to_unit(key) < spec.edge_prob) {
                rng::Stream ws(rng::derive(spec.seed, rng::kSaltWeight, static_cast<std::uint64_t>(u),
                                           static_cast<std::uint64_t>(v)));
                g.add_edge(u, v, ws.next_int(spec.w_min, spec.w_max));
            }
        }
    }
    return g;
}

struct Fig1Fixture {
    WeightedGraph g;
    EdgeSet h_edges;  // all edges of g except uv
    Vertex u, v;
    Weight scale;     // all weights are scale x their nominal value
    long long s;      // nominal stretch parameter

    Subgraph h() const { return Subgraph(g, h_edges); }
};

/// Worst-case fixture showing that fault-tolerant spanners need not be good
/// multipath spanners: a cycle of n+1 vertices (edge uv of nominal weight 1,
/// the other n cycle edges of weight s/n) plus n-1 chords of weight s.
///
/// Each chord x_{j-1} x_{j+1} hops over one interior vertex x_j, which makes
/// H = G - uv a 1-fault-tolerant 2s-spanner (removing any z leaves a u-v path
/// of cost exactly 2s(1-1/n)) while the cheapest pair of disjoint u-v paths
/// in H must traverse the chords and costs about s*n.
///
/// Weights are scaled by 2n so that s/n stays integral.
inline Fig1Fixture gen_fig1_fixture(int n, long long s) {
    if (n < 4) throw std::invalid_argument("fig1 fixture needs n >= 4");
    if (s <= 1 || s >= n) throw std::invalid_argument("fig1 fixture needs 1 < s < n");
    const Weight scale = 2LL * n;
    const int cycle_len = n + 1;  // vertices 0..n
    WeightedGraph g(cycle_len);
    const Vertex u = 0, v = 1;
    g.add_edge(u, v, scale);  // nominal weight 1
    for (int i = 1; i < n; ++i) g.add_edge(i, i + 1, 2 * s);        // nominal s/n
    g.add_edge(n, 0, 2 * s);                                        // nominal s/n
    for (int j = 2; j <= n; ++j) {
        Vertex a = j - 1;
        Vertex b = (j + 1) % cycle_len;
        g.add_edge(a, b, scale * s);                                // nominal s
    }
    EdgeSet hs;
    for (const auto& e : g.edges()) hs.insert(edge_key(e.u, e.v));
    hs.erase(edge_key(u, v));
    return Fig1Fixture{std::move(g), std::move(hs), u, v, scale, s};
}

}  // namespace mps

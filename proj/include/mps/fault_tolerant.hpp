#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mps/graph.hpp"
#include "mps/hop_spanner.hpp"
#include "mps/metrics.hpp"

// Generic randomized fault-tolerant wrapper: repeat q times, sample away a
// large random vertex subset, run the inner spanner algorithm on the rest and
// keep the union. Exhaustive small-instance verification lives here too.

namespace mps {

/// Inner spanner algorithm handed to the wrapper. `run` must accept any
/// vertex-induced (tombstoned) subgraph.
struct InnerSpanner {
    std::string id;
    std::function<EdgeSet(const WeightedGraph&, std::uint64_t seed)> run;
};

inline InnerSpanner inner_greedy(int k) {
    return {"greedy-hop/k=" + std::to_string(k),
            [k](const WeightedGraph& g, std::uint64_t) { return greedy_hop_spanner(g, k).edge_set(); }};
}

inline InnerSpanner inner_cluster(int k, double c) {
    return {"cluster-hop/k=" + std::to_string(k),
            [k, c](const WeightedGraph& g, std::uint64_t seed) {
                return cluster_hop_spanner(g, k, c, seed).edge_set();
            }};
}

struct FtParams {
    int r = 0;          // fault budget
    double c = 1.0;     // repeat constant; q = max(1, ceil(c*(r+1)^3*ln n))
    std::uint64_t seed = 0;
};

// q = max(1, ceil(c*(r+1)^3*ln n)). r = 0 degenerates to a single run: the
// sampling probability is zero, so repetitions would be identical copies.
inline int ft_iteration_count(int n, int r, double c) {
    if (n <= 1 || r == 0) return 1;
    double q = c * std::pow(static_cast<double>(r + 1), 3) * std::log(static_cast<double>(n));
    return std::max(1, static_cast<int>(std::ceil(q)));
}

// Membership of v in the removal set S of iteration j; a pure function of the
// run seed so the distributed wrapper can replay it per node.
inline bool ft_in_sample(std::uint64_t seed, Vertex v, int iteration, int r) {
    if (r == 0) return false;
    const double p_remove = 1.0 - 1.0 / static_cast<double>(r + 1);
    return rng::to_unit(rng::derive(seed, rng::kSaltFtSample, static_cast<std::uint64_t>(v),
                                    static_cast<std::uint64_t>(iteration))) < p_remove;
}

inline std::uint64_t ft_inner_seed(std::uint64_t seed, int iteration) {
    return rng::derive(seed, rng::kSaltFtInner, static_cast<std::uint64_t>(iteration));
}

/// Wrapper with an explicit iteration count; the public entry computes q from
/// the repeat constant. Iteration j draws its sample from substream (seed, j),
/// so runs with larger q extend smaller ones (prefix property).
inline Subgraph ft_spanner_iterations(const WeightedGraph& g, int r, int iterations,
                                      std::uint64_t seed, const InnerSpanner& inner) {
    if (r < 0) throw std::invalid_argument("fault budget must be >= 0");
    Subgraph h(g);
    for (int j = 0; j < iterations; ++j) {
        std::vector<Vertex> removed;
        for (Vertex v : g.vertices())
            if (ft_in_sample(seed, v, j, r)) removed.push_back(v);
        WeightedGraph sub = g.remove_vertices(removed);
        h.add_edges(inner.run(sub, ft_inner_seed(seed, j)));
    }
    return h;
}

inline Subgraph ft_spanner(const WeightedGraph& g, const FtParams& params, const InnerSpanner& inner) {
    const int q = ft_iteration_count(g.vertex_count(), params.r, params.c);
    return ft_spanner_iterations(g, params.r, q, params.seed, inner);
}

// ---------------------------------------------------------------------------
// Exhaustive verification of the r-fault-tolerance property:
// for every fault set F with |F| <= r and every pair u,v outside F,
// d_{H\F}(u,v) <= s * d_{G\F}(u,v).

struct FtCounterexample {
    std::vector<Vertex> faults;
    Vertex u, v;
    Cost dg, dh;
};

struct FtCheck {
    bool ok = true;
    std::optional<FtCounterexample> counterexample;
};

inline constexpr int kFtGuardN = 14;
inline constexpr int kFtGuardR = 2;

inline FtCheck verify_fault_tolerance(const WeightedGraph& g, const Subgraph& h, int r, Rational s,
                                      int guard_n = kFtGuardN, int guard_r = kFtGuardR) {
    if (g.alive_count() > guard_n || r > guard_r)
        throw GuardError("exhaustive fault-tolerance check guarded at n <= " +
                         std::to_string(guard_n) + ", r <= " + std::to_string(guard_r));
    WeightedGraph hg = h.graph();
    auto verts = g.vertices();

    std::vector<Vertex> faults;
    auto check_fault_set = [&]() -> std::optional<FtCounterexample> {
        WeightedGraph gf = g.remove_vertices(faults);
        WeightedGraph hf = hg.remove_vertices(faults);
        for (Vertex u : gf.vertices()) {
            auto dg = dijkstra_all(gf, u);
            auto dh = dijkstra_all(hf, u);
            for (Vertex v : gf.vertices()) {
                if (v <= u) continue;
                if (!within_stretch(dh[v], s, dg[v], Cost(0)))
                    return FtCounterexample{faults, u, v, dg[v], dh[v]};
            }
        }
        return std::nullopt;
    };

    // Enumerate fault sets of size 0..r.
    std::optional<FtCounterexample> bad;
    auto rec = [&](auto&& self, size_t from, int left) -> void {
        if (bad) return;
        bad = check_fault_set();
        if (bad || left == 0) return;
        for (size_t i = from; i < verts.size() && !bad; ++i) {
            faults.push_back(verts[i]);
            self(self, i + 1, left - 1);
            faults.pop_back();
        }
    };
    rec(rec, 0, r);
    if (bad) return {false, bad};
    return {};
}

}  // namespace mps

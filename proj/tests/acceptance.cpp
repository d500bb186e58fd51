// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities. Tolerances are exact integer or rational
// comparisons throughout; randomized constructions state the constants they
// run with.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "doctest.h"
#include "mps/bipath.hpp"
#include "mps/fault_tolerant.hpp"
#include "mps/graph.hpp"
#include "mps/hop_spanner.hpp"
#include "mps/local_sim.hpp"
#include "mps/metrics.hpp"
#include "mps/pipeline.hpp"

using namespace mps;

namespace {

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %02d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
}

WeightedGraph cycle_graph(int n) {
    WeightedGraph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, 1);
    return g;
}

WeightedGraph petersen_graph() {
    WeightedGraph g(10);
    for (int i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5, 1);          // outer cycle
        g.add_edge(i, i + 5, 1);                // spokes
        g.add_edge(5 + i, 5 + (i + 2) % 5, 1);  // pentagram
    }
    return g;
}

// Pipeline configuration stated by criteria 5 and 6. The wrapper constant is
// lowered to 0.75 and the inputs are dense so that the output is a proper
// subgraph: hundreds of edges are dropped and must be covered by multipaths.
PipelineParams criterion5_params(std::uint64_t seed) {
    PipelineParams params;
    params.p = 2;
    params.k = 2;
    params.cluster_c = 2.0;
    params.ft_c = 0.75;
    params.seed = seed;
    return params;
}

double criterion5_density(int n) { return n <= 60 ? 0.65 : 0.55; }

struct SpstInstance {
    WeightedGraph component;
    Vertex u, v;
};

// Random 2-connected instances: bicomponents of G(n,p) draws with at least
// eight vertices, root edge chosen lexicographically.
std::vector<SpstInstance> spst_instances(int want) {
    std::vector<SpstInstance> out;
    for (std::uint64_t seed = 1; static_cast<int>(out.size()) < want; ++seed) {
        int n = 20 + static_cast<int>(seed % 5) * 10;  // 20..60
        double p = n <= 30 ? 0.22 : 0.12;
        auto g = gen_random({n, p, 1, 9, seed * 977});
        for (const auto& e : g.edges()) {
            auto comp = bicomponent_of(g, e.u, e.v);
            if (!comp) continue;
            std::set<Vertex> verts;
            for (const auto& [a, b] : comp->edge_set()) {
                verts.insert(a);
                verts.insert(b);
            }
            if (verts.size() < 8) continue;
            out.push_back({comp->graph(), e.u, e.v});
            break;
        }
    }
    return out;
}

struct BipathInput {
    WeightedGraph g;
    Weight w_max;
};

// 20 inputs across both weight regimes of the (2, 24W) criterion.
std::vector<BipathInput> bipath_inputs() {
    std::vector<BipathInput> runs;
    int idx = 0;
    for (Weight wmax : {1, 10}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            int n = 60 + static_cast<int>(seed % 4) * 30;  // 60..150
            double p = n <= 90 ? 0.5 : 0.35;
            auto g = gen_random({n, p, 1, wmax, seed * 331 + idx});
            Weight w = g.max_weight();
            runs.push_back({std::move(g), w});
            ++idx;
        }
    }
    return runs;
}

}  // namespace

TEST_SUITE_BEGIN("acceptance");

TEST_CASE("01: multipath flow equals the exhaustive oracle") {
    int graphs = 0;
    long long pairs_checked = 0;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 50 && ok; ++seed) {
        for (double density : {0.3, 0.55}) {
            int n = 5 + static_cast<int>(seed % 4);  // 5..8
            auto g = gen_random({n, density, 1, 12, seed * 7919 + (density < 0.4 ? 0 : 1)});
            ++graphs;
            MultipathSolver solver(g);
            for (Vertex u = 0; u < n && ok; ++u) {
                for (Vertex v = u + 1; v < n && ok; ++v) {
                    for (int p : {1, 2, 3}) {
                        ++pairs_checked;
                        if (solver.query(p, u, v, false).cost !=
                            multipath_cost_bruteforce(g, p, u, v))
                            ok = false;
                    }
                }
            }
        }
    }
    report(1, ok && graphs >= 100,
           "flow == brute force on " + std::to_string(graphs) + " graphs, " +
               std::to_string(pairs_checked) + " (pair,p) checks, exact");
    CHECK(ok);
    CHECK(graphs >= 100);
}

TEST_CASE("02: greedy hop spanner girth, size, and hop contract") {
    bool ok = true;
    std::string sizes;
    for (int k : {2, 3}) {
        for (int n : {100, 200, 400}) {
            double density = n == 100 ? 0.15 : (n == 200 ? 0.08 : 0.04);
            auto g = gen_random({n, density, 1, 50, static_cast<std::uint64_t>(n * 10 + k)});
            auto h = greedy_hop_spanner(g, k);

            auto girth = shortest_cycle_length(h.graph());
            bool girth_ok = !girth || *girth > 2 * k;

            __int128 mk = 1, nk1 = 1;
            for (int i = 0; i < k; ++i) mk *= static_cast<long long>(h.edge_count());
            for (int i = 0; i < k + 1; ++i) nk1 *= n;
            bool size_ok = mk < nk1;

            bool hop_ok = is_b_hop_spanner(g, h, 2 * k - 1, Rational(2 * k - 1)).ok;
            ok = ok && girth_ok && size_ok && hop_ok;
            sizes += " n=" + std::to_string(n) + ",k=" + std::to_string(k) + ":" +
                     std::to_string(h.edge_count());
        }
    }
    report(2, ok, "girth > 2k, |E| < n^(1+1/k), (2k-1)-hop all pass;" + sizes);
    CHECK(ok);
}

TEST_CASE("03: cluster hop spanner contract over seeds, size recorded") {
    bool ok = true;
    double worst_constant = 0;
    for (int k : {2, 3}) {
        for (int n : {100, 400}) {
            double density = n == 100 ? 0.15 : 0.05;
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                auto g = gen_random({n, density, 1, 40, static_cast<std::uint64_t>(n) * 100 + seed});
                auto h = cluster_hop_spanner(g, k, 2.0, seed);
                if (!is_b_hop_spanner(g, h, 2 * k - 1, Rational(2 * k - 1)).ok) ok = false;
                double bound = k * std::pow(n, 1.0 + 1.0 / k) *
                               std::pow(std::log(static_cast<double>(n)), 1.0 - 1.0 / k);
                worst_constant = std::max(worst_constant,
                                          static_cast<double>(h.edge_count()) / bound);
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "40/40 runs (2k-1)-hop at s=2k-1; size <= %.3f x k n^(1+1/k) ln^(1-1/k) n",
                  worst_constant);
    report(3, ok, buf);
    CHECK(ok);
}

TEST_CASE("04: exhaustive fault tolerance of the wrapped greedy spanner") {
    bool ok = true;
    int graphs = 0;
    const double c = 4.0;
    for (int r : {1, 2}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            int n = 10 + static_cast<int>(seed % 3);  // 10..12
            auto g = gen_random({n, 0.45, 1, 9, seed * 271 + r});
            auto h = ft_spanner(g, FtParams{r, c, seed}, inner_greedy(2));
            auto chk = verify_fault_tolerance(g, h, r, Rational(3));
            if (!chk.ok) ok = false;
            ++graphs;
        }
    }
    report(4, ok && graphs >= 20,
           std::to_string(graphs) + " graphs, r in {1,2}, s=3, c=4: all fault sets pass");
    CHECK(ok);
    CHECK(graphs >= 20);
}

TEST_CASE("05: pipeline p=k=2 meets alpha = 18 exactly") {
    bool ok = true;
    long long violations = 0;
    double worst = 0;
    double size_constant = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        for (int gi = 0; gi < 5; ++gi) {
            int n = 40 + gi * 20;  // 40..120
            auto g = gen_random({n, criterion5_density(n), 1, 100, seed * 53 + gi});
            auto res = multipath_spanner(g, criterion5_params(seed));
            auto rep = verify_multipath_stretch(g, res.h, 2, Rational(18));
            violations += static_cast<long long>(rep.violations.size());
            if (!rep.ok()) ok = false;
            if (!rep.worst_infinite && rep.worst_pair) worst = std::max(worst, rep.worst_ratio.approx());
            double bound = 2 * std::pow(2.0, 2 - 0.5) * std::pow(n, 1.5) *
                           std::pow(std::log(static_cast<double>(n)), 2 - 0.5);
            size_constant = std::max(size_constant, static_cast<double>(res.h.edge_count()) / bound);
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "25 runs (ft_c=0.75), %lld violating pairs, worst ratio %.3f <= 18; "
                  "size <= %.3f x k p^(3/2) n^(3/2) ln^(3/2) n",
                  violations, worst, size_constant);
    report(5, ok, buf);
    CHECK(ok);
}

TEST_CASE("06: dropped edges keep a cheap 2-multipath (per-edge bound)") {
    bool ok = true;
    long long dropped = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        for (int gi = 0; gi < 5; ++gi) {
            int n = 40 + gi * 20;
            auto g = gen_random({n, criterion5_density(n), 1, 100, seed * 53 + gi});
            auto res = multipath_spanner(g, criterion5_params(seed));
            auto hg = res.h.graph();
            MultipathSolver solver(hg);
            for (const auto& e : g.edges()) {
                if (res.h.contains(e.u, e.v)) continue;
                ++dropped;
                auto dh = solver.query(2, e.u, e.v, false).cost;
                if (!within_stretch(dh, Rational(18), Cost(e.w), Cost(0))) ok = false;
            }
        }
    }
    report(6, ok,
           std::to_string(dropped) + " dropped edges all satisfy delta2_H(u,v) <= 18 w(uv)");
    CHECK(ok);
}

TEST_CASE("07: shortest 2-path spanning trees are exact and small") {
    auto instances = spst_instances(50);
    bool exact_ok = true, size_ok = true;
    size_t max_ratio_num = 0;
    for (const auto& inst : instances) {
        auto t = spst2(inst.component, inst.u, inst.v);
        if (!t.size_bound_met ||
            t.tree_edges.size() > 4 * static_cast<size_t>(t.component_size))
            size_ok = false;
        max_ratio_num = std::max(max_ratio_num, t.tree_edges.size());

        auto tree_graph = Subgraph(inst.component, t.tree_edges).graph();
        EdgeCycleSolver in_comp(inst.component, inst.u, inst.v);
        EdgeCycleSolver in_tree(tree_graph, inst.u, inst.v);
        for (const auto& [w, c] : t.cycle_cost) {
            if (c != in_comp.query(w)) exact_ok = false;
            if (c != in_tree.query(w)) exact_ok = false;
        }
    }
    bool ok = exact_ok && size_ok && instances.size() >= 50;
    report(7, ok,
           std::to_string(instances.size()) +
               " 2-connected instances: delta2_T == flow oracle everywhere, |T| <= 4 nu");
    CHECK(exact_ok);
    CHECK(size_ok);
    CHECK(instances.size() >= 50);
}

TEST_CASE("08: bipath spanner is a 2-multipath (2, 24W)-spanner") {
    auto runs = bipath_inputs();
    bool uniform_ok = true;
    long long hetero_violations = 0;
    long long frozen_violations = 0;  // the alternative SPST/BFS source reading
    double size_constant = 0;
    int count = 0, frozen_count = 0;
    for (auto& run : runs) {
        auto [h, trace] = bipath_spanner(run.g);
        auto rep = verify_stretch(run.g, h, 2, Rational(2), Cost(24 * run.w_max));
        ++count;
        size_constant =
            std::max(size_constant, static_cast<double>(h.edge_count()) /
                                        std::pow(run.g.vertex_count(), 1.5));
        if (run.w_max == 1) {
            if (!rep.ok()) uniform_ok = false;
        } else {
            hetero_violations += static_cast<long long>(rep.violations.size());
        }
        // variant with SPST^2 and BFS trees taken from the frozen input graph,
        // reported alongside the default reading
        if (count % 4 == 1) {
            BipathOptions frozen;
            frozen.spst_on_frozen = true;
            frozen.bfs_on_frozen = true;
            auto [hf, tf] = bipath_spanner(run.g, frozen);
            auto repf = verify_stretch(run.g, hf, 2, Rational(2), Cost(24 * run.w_max));
            frozen_violations += static_cast<long long>(repf.violations.size());
            ++frozen_count;
        }
    }
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "%d runs (W in {1,10}): uniform runs clean, heterogeneous violations=%lld, "
                  "|E(H)| <= %.3f x n^(3/2); frozen-source variant: %lld violations on %d runs",
                  count, hetero_violations, size_constant, frozen_violations, frozen_count);
    bool ok = uniform_ok && hetero_violations == 0 && count >= 20;
    report(8, ok, buf);
    CHECK(uniform_ok);
    // reported distinctly per the construction's open question: heterogeneous
    // weights must also be clean at this scale
    CHECK(hetero_violations == 0);
    CHECK(count >= 20);
}

TEST_CASE("09: sparsity certificate on residuals and high-girth graphs") {
    bool ok = true;
    int residuals = 0;
    for (auto& run : bipath_inputs()) {
        auto [h, trace] = bipath_spanner(run.g);
        auto rep = residual_sparsity_certificate(trace.residual, 2);
        if (!rep.ok()) ok = false;
        ++residuals;
    }
    // graphs with no short cycles pass vacuously
    for (int k : {2, 3}) {
        if (!residual_sparsity_certificate(cycle_graph(12), k).ok()) ok = false;
        if (!residual_sparsity_certificate(cycle_graph(31), k).ok()) ok = false;
    }
    if (!residual_sparsity_certificate(petersen_graph(), 2).ok()) ok = false;
    report(9, ok,
           std::to_string(residuals) + " bipath residuals pass k=2; girth > 2k fixtures pass");
    CHECK(ok);
}

TEST_CASE("10: triangle-like property of 2-path spanning trees") {
    auto instances = spst_instances(50);
    bool ok = true;
    long long pairs = 0;
    for (const auto& inst : instances) {
        auto t = spst2(inst.component, inst.u, inst.v);
        MultipathSolver solver(inst.component);
        std::vector<Vertex> inner;
        for (const auto& [w, c] : t.cycle_cost)
            if (w != inst.u && w != inst.v) inner.push_back(w);
        for (size_t i = 0; i < inner.size() && ok; ++i) {
            for (size_t j = i + 1; j < inner.size(); ++j) {
                ++pairs;
                auto dab = solver.query(2, inner[i], inner[j], false).cost;
                Cost bound = t.cycle_cost.at(inner[i]) + t.cycle_cost.at(inner[j]);
                if (bound.is_infinite()) {
                    ok = false;
                    break;
                }
                if (!(dab <= Cost(bound.value - t.w_uv))) {
                    ok = false;
                    break;
                }
            }
        }
    }
    report(10, ok,
           std::to_string(pairs) + " (a,b) pairs satisfy delta2(a,b) <= "
                                   "delta2_T(uv,a) + delta2_T(uv,b) - w(uv)");
    CHECK(ok);
}

TEST_CASE("11: the worst-case fixture separates fault tolerance from multipath stretch") {
    bool ok = true;
    std::string detail;
    for (int n : {8, 16, 32}) {
        long long s = n / 2;
        auto fx = gen_fig1_fixture(n, s);
        auto h = fx.h();
        auto ft = verify_fault_tolerance(fx.g, h, 1, Rational(2 * s), n + 1, 2);
        auto rep = verify_stretch(fx.g, h, 2, Rational(1), Cost(0));
        bool ratio_ok = !rep.worst_infinite && rep.worst_ratio >= Rational(n, 2);
        if (!ft.ok || !ratio_ok) ok = false;
        detail += " n=" + std::to_string(n) + ":ratio=" +
                  std::to_string(rep.worst_ratio.approx()).substr(0, 5);
    }
    report(11, ok, "1-fault-tolerant 2s-spanner yet 2-multipath ratio >= n/2;" + detail);
    CHECK(ok);
}

TEST_CASE("12: LOCAL simulation round budgets and sequential equivalence") {
    bool ok = true;
    int runs = 0;
    for (int k : {1, 2, 3}) {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            auto g = gen_random({60, 0.2, 1, 20, seed * 917 + k});
            auto res = run_protocol(g, protocol_cluster_spanner(k, 2.0), 3 * k, seed);
            ++runs;
            if (res.trace.budget_exceeded || res.trace.rounds_used > 3 * k) ok = false;
            if (res.spanner.edge_set() != cluster_hop_spanner(g, k, 2.0, seed).edge_set())
                ok = false;

            // the wrapper adds zero rounds and keeps per-round message counts
            auto wrapped = run_protocol(
                g, protocol_ft_wrapper(protocol_cluster_spanner(k, 2.0), 1, 0.25), 3 * k, seed);
            if (wrapped.trace.rounds_used != res.trace.rounds_used) ok = false;
            if (wrapped.trace.per_round.size() != res.trace.per_round.size()) ok = false;
            for (size_t i = 0; i < res.trace.per_round.size() && ok; ++i)
                if (wrapped.trace.per_round[i].messages != res.trace.per_round[i].messages)
                    ok = false;
            auto seq = ft_spanner(g, FtParams{1, 0.25, seed}, inner_cluster(k, 2.0));
            if (wrapped.spanner.edge_set() != seq.edge_set()) ok = false;
        }
    }
    report(12, ok,
           std::to_string(runs) + " configurations: rounds <= 3k, wrapper adds 0 rounds, "
                                  "distributed == sequential bit-exact");
    CHECK(ok);
}

TEST_CASE("13: phi table") {
    bool ok = compute_phi(3, 2) == 18 && compute_phi(3, 5) == 45 && compute_phi(5, 2) == 140;
    report(13, ok, "phi(3,2)=18 phi(3,5)=45 phi(5,2)=140, exact");
    CHECK(ok);
}

TEST_SUITE_END();

#include "mps/pipeline.hpp"

#include "doctest.h"
#include "mps/graph.hpp"

using namespace mps;

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("phi values from the stretch formula") {
    CHECK(compute_phi(3, 2) == 18);
    CHECK(compute_phi(3, 5) == 45);
    CHECK(compute_phi(5, 2) == 140);
    CHECK_THROWS_AS(compute_phi(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(compute_phi(1, 1), std::invalid_argument);
}

TEST_CASE("phi is monotone non-decreasing in p for fixed s") {
    for (int s : {3, 5, 7}) {
        long long prev = 0;
        for (int p = 1; p <= 6; ++p) {
            long long cur = compute_phi(s, p);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("p=1, k=1 keeps the whole graph") {
    auto g = gen_random({12, 0.4, 1, 9, 3});
    PipelineParams params;
    params.p = 1;
    params.k = 1;
    params.seed = 5;
    auto res = multipath_spanner(g, params);
    CHECK(res.h.edge_count() == static_cast<size_t>(g.edge_count()));
    CHECK(res.declared_stretch == Rational(1));
}

TEST_CASE("k=1 with p>1 is rejected: no declared stretch exists") {
    auto g = gen_random({8, 0.5, 1, 5, 1});
    PipelineParams params;
    params.p = 2;
    params.k = 1;
    CHECK_THROWS_AS(multipath_spanner(g, params), std::invalid_argument);
}

TEST_CASE("p=1 pipeline is a classical (2k-1)-spanner") {
    for (int k : {2, 3}) {
        auto g = gen_random({24, 0.3, 1, 30, 7});
        PipelineParams params;
        params.p = 1;
        params.k = k;
        params.seed = 11;
        auto res = multipath_spanner(g, params);
        auto rep = verify_stretch(g, res.h, 1, Rational(2 * k - 1), Cost(0));
        CAPTURE(k);
        CHECK(rep.ok());
    }
}

TEST_CASE("p=2, k=2 pipeline meets alpha=18 on small random graphs") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto g = gen_random({24, 0.3, 1, 100, seed * 7});
        PipelineParams params;
        params.p = 2;
        params.k = 2;
        params.seed = seed;
        auto res = multipath_spanner(g, params);
        CHECK(res.declared_stretch == Rational(18));
        auto rep = verify_multipath_stretch(g, res.h, 2, Rational(18));
        CAPTURE(seed);
        CHECK(rep.ok());

        // per-edge form: every dropped edge has a cheap 2-multipath in H
        auto hg = res.h.graph();
        for (const auto& e : g.edges()) {
            if (res.h.contains(e.u, e.v)) continue;
            auto dh = multipath_cost(hg, 2, e.u, e.v).cost;
            CHECK(within_stretch(dh, Rational(18), Cost(e.w), Cost(0)));
        }
    }
}

TEST_CASE("pipeline output contains the first iteration's inner spanner") {
    auto g = gen_random({18, 0.4, 1, 9, 21});
    PipelineParams params;
    params.p = 2;
    params.k = 2;
    params.seed = 9;
    auto res = multipath_spanner(g, params);
    std::vector<Vertex> removed;
    for (Vertex v : g.vertices())
        if (ft_in_sample(params.seed, v, 0, 1)) removed.push_back(v);
    auto sub = g.remove_vertices(removed);
    auto first = inner_cluster(params.k, params.cluster_c).run(sub, ft_inner_seed(params.seed, 0));
    for (const auto& e : first) CHECK(res.h.edge_set().count(e) == 1);
}

TEST_CASE("verifier flags a missing bridge as an infinite violation") {
    WeightedGraph g(4);
    g.add_edge(0, 1, 1);
    g.add_edge(1, 2, 5);  // bridge
    g.add_edge(2, 3, 1);
    Subgraph h(g);
    h.add_edge(0, 1);
    h.add_edge(2, 3);
    auto rep = verify_multipath_stretch(g, h, 1, Rational(1000));
    CHECK_FALSE(rep.ok());
    CHECK(rep.worst_infinite);
}

TEST_SUITE_END();

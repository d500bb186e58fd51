// Command-line front end: graph generation, spanner construction,
// verification, LOCAL-model simulation, and benchmark tables. Every command
// is reproducible byte-for-byte given identical flags and seeds.
//
// Exit codes: 0 success/verified, 1 verification failure, 2 usage error,
// 3 oracle guard exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mps/bipath.hpp"
#include "mps/fault_tolerant.hpp"
#include "mps/graph.hpp"
#include "mps/hop_spanner.hpp"
#include "mps/local_sim.hpp"
#include "mps/metrics.hpp"
#include "mps/pipeline.hpp"

using nlohmann::json;
using namespace mps;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

int guard_n_override(int fallback) {
    if (const char* env = std::getenv("MPS_GUARD_N")) {
        try {
            return std::max(fallback, std::stoi(env));
        } catch (...) {
        }
    }
    return fallback;
}

Subgraph load_subgraph_of(const WeightedGraph& g, const std::string& path) {
    WeightedGraph hg = load_graph(path);
    Subgraph h(g);
    for (const auto& e : hg.edges()) {
        if (!g.has_edge(e.u, e.v) || g.edge_weight(e.u, e.v) != e.w)
            throw std::invalid_argument("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                                        " of " + path + " is not an edge of the base graph");
        h.add_edge(e.u, e.v);
    }
    return h;
}

void write_json(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

std::string ratio_str(const StretchReport& rep) {
    if (rep.worst_infinite) return "inf";
    return std::to_string(rep.worst_ratio.approx());
}

// ---------------------------------------------------------------------------

int cmd_gen(const std::string& fixture, int n, double p, long long wmin, long long wmax,
            long long s, std::uint64_t seed, const std::string& out) {
    if (fixture == "fig1") {
        auto fx = gen_fig1_fixture(n, s);
        save_graph(fx.g, out + "_G.el", {"fixture=fig1 n=" + std::to_string(n) +
                                         " s=" + std::to_string(s) +
                                         " scale=" + std::to_string(fx.scale)});
        save_subgraph(fx.h(), out + "_H.el", {"fixture=fig1 spanner (G minus uv)"});
        json rec{{"u", fx.u},       {"v", fx.v}, {"weight_uv", fx.g.edge_weight(fx.u, fx.v)},
                 {"scale", fx.scale}, {"n", n},    {"s", s}};
        write_json(rec, out + "_uv.json");
        return kExitOk;
    }
    if (!fixture.empty()) throw CLI::ValidationError("unknown fixture: " + fixture);
    auto g = gen_random({n, p, wmin, wmax, seed});
    save_graph(g, out, {"gen n=" + std::to_string(n) + " p=" + std::to_string(p) +
                        " wmin=" + std::to_string(wmin) + " wmax=" + std::to_string(wmax) +
                        " seed=" + std::to_string(seed)});
    return kExitOk;
}

int cmd_build(const std::string& algo, const std::string& input, const std::string& out,
              const std::string& summary_path, const std::string& trace_path, int k, int p, int r,
              double c, double cluster_c, std::uint64_t seed, bool verify_after) {
    WeightedGraph g = load_graph(input);
    json summary{{"algo", algo},       {"n", g.vertex_count()}, {"m_G", g.edge_count()},
                 {"seed", seed},       {"input", input}};

    std::optional<Subgraph> h;
    std::string provenance = "algo=" + algo + " seed=" + std::to_string(seed);

    if (algo == "greedy-hop") {
        h = greedy_hop_spanner(g, k);
        summary["k"] = k;
        summary["b_hop"] = 2 * k - 1;
        provenance += " k=" + std::to_string(k);
    } else if (algo == "cluster-hop") {
        h = cluster_hop_spanner(g, k, cluster_c, seed);
        summary["k"] = k;
        summary["c"] = cluster_c;
        summary["b_hop"] = 2 * k - 1;
        provenance += " k=" + std::to_string(k) + " c=" + std::to_string(cluster_c);
    } else if (algo == "ft") {
        auto inner = inner_cluster(k, cluster_c);
        h = ft_spanner(g, FtParams{r, c, seed}, inner);
        summary["k"] = k;
        summary["r"] = r;
        summary["c"] = c;
        summary["inner"] = inner.id;
        summary["iterations"] = ft_iteration_count(g.vertex_count(), r, c);
        provenance += " k=" + std::to_string(k) + " r=" + std::to_string(r) +
                      " c=" + std::to_string(c) + " inner=" + inner.id;
    } else if (algo == "pipeline") {
        PipelineParams params;
        params.p = p;
        params.k = k;
        params.cluster_c = cluster_c;
        params.ft_c = c;
        params.seed = seed;
        auto res = multipath_spanner(g, params);
        summary["p"] = p;
        summary["k"] = k;
        summary["alpha_declared"] = res.declared_stretch.num;
        summary["iterations"] = res.iterations;
        if (verify_after) {
            auto rep = verify_multipath_stretch(g, res.h, p, res.declared_stretch);
            summary["worst_ratio"] = rep.worst_infinite ? -1.0 : rep.worst_ratio.approx();
            summary["violations"] = rep.violations.size();
        }
        provenance += " p=" + std::to_string(p) + " k=" + std::to_string(k) +
                      " alpha=" + res.declared_stretch.str();
        h = std::move(res.h);
    } else if (algo == "bipath") {
        auto [hh, trace] = bipath_spanner(g);
        summary["iterations"] = trace.iterations.size();
        summary["residual_edges"] = trace.residual_edges;
        summary["W"] = g.max_weight();
        summary["beta_declared"] = 24 * g.max_weight();
        if (!trace_path.empty()) {
            std::ofstream tf(trace_path);
            int i = 0;
            for (const auto& it : trace.iterations) {
                json rec{{"iter", i++},
                         {"edge", {it.root.first, it.root.second}},
                         {"ball_size", it.ball_size},
                         {"removed", it.removed},
                         {"edges_added", it.edges_added}};
                tf << rec.dump() << "\n";
            }
        }
        h = std::move(hh);
    } else {
        throw CLI::ValidationError("unknown algorithm: " + algo);
    }

    summary["m_H"] = h->edge_count();
    save_subgraph(*h, out, {provenance});
    if (!summary_path.empty()) write_json(summary, summary_path);
    return kExitOk;
}

int cmd_verify(const std::string& kind, const std::string& g_path, const std::string& h_path,
               const std::string& report_path, int p, const std::string& alpha_text,
               long long beta, int b, const std::string& s_text, int r, int k) {
    WeightedGraph g = load_graph(g_path);
    Subgraph h = h_path.empty() ? Subgraph::whole(g) : load_subgraph_of(g, h_path);

    if (kind == "multipath" || kind == "stretch") {
        Rational alpha = Rational::parse(alpha_text);
        auto rep = verify_stretch(g, h, p, alpha, Cost(beta));
        if (!report_path.empty()) {
            std::ofstream rf(report_path);
            rep.write_csv(rf);
        }
        std::cout << "pairs=" << rep.pairs.size() << " violations=" << rep.violations.size()
                  << " worst_ratio=" << ratio_str(rep) << "\n";
        return rep.ok() ? kExitOk : kExitVerifyFailed;
    }
    if (kind == "hop") {
        Rational s = Rational::parse(s_text);
        auto chk = is_b_hop_spanner(g, h, b, s);
        if (!report_path.empty()) {
            std::ofstream rf(report_path);
            rf << "ok,counterexample\n"
               << (chk.ok ? "1," : "0,")
               << (chk.counterexample
                       ? std::to_string(chk.counterexample->first) + "-" +
                             std::to_string(chk.counterexample->second)
                       : "")
               << "\n";
        }
        if (!chk.ok)
            std::cout << "hop check failed at edge " << chk.counterexample->first << "-"
                      << chk.counterexample->second << "\n";
        else
            std::cout << "hop check passed (b=" << b << ", s=" << s.str() << ")\n";
        return chk.ok ? kExitOk : kExitVerifyFailed;
    }
    if (kind == "ft") {
        Rational s = Rational::parse(s_text);
        auto chk = verify_fault_tolerance(g, h, r, s, guard_n_override(kFtGuardN),
                                          guard_n_override(kFtGuardR));
        if (!chk.ok) {
            std::cout << "fault-tolerance violated: F={";
            for (size_t i = 0; i < chk.counterexample->faults.size(); ++i)
                std::cout << (i ? "," : "") << chk.counterexample->faults[i];
            std::cout << "} pair " << chk.counterexample->u << "-" << chk.counterexample->v << "\n";
        } else {
            std::cout << "fault tolerance verified (r=" << r << ", s=" << s.str() << ")\n";
        }
        return chk.ok ? kExitOk : kExitVerifyFailed;
    }
    if (kind == "cert") {
        auto rep = residual_sparsity_certificate(g, k);
        std::cout << "hypothesis=" << (rep.hypothesis_holds ? "holds" : "violated")
                  << " edges=" << rep.edge_count << " bound=" << rep.bound << "\n";
        if (!rep.hypothesis_holds)
            std::cout << "witness edge " << rep.witness->first << "-" << rep.witness->second << "\n";
        return rep.ok() ? kExitOk : kExitVerifyFailed;
    }
    throw CLI::ValidationError("unknown verification kind: " + kind);
}

int cmd_sim(const std::string& protocol, const std::string& input, const std::string& out,
            const std::string& trace_path, int k, int p, double c, double ft_c, int max_rounds,
            std::uint64_t seed) {
    WeightedGraph g = load_graph(input);
    Protocol proto = protocol_cluster_spanner(k, c);
    int budget = max_rounds > 0 ? max_rounds : 3 * k;
    if (protocol == "cluster") {
        // as constructed
    } else if (protocol == "ft-cluster") {
        proto = protocol_ft_wrapper(proto, p - 1, ft_c);
    } else {
        throw CLI::ValidationError("unknown protocol: " + protocol);
    }
    auto res = run_protocol(g, proto, budget, seed);
    if (!out.empty())
        save_subgraph(res.spanner, out,
                      {"protocol=" + protocol + " k=" + std::to_string(k) +
                       " seed=" + std::to_string(seed) +
                       " rounds=" + std::to_string(res.trace.rounds_used)});
    if (!trace_path.empty()) {
        std::ofstream tf(trace_path);
        res.trace.write_csv(tf);
    }
    std::cout << "rounds=" << res.trace.rounds_used << " edges=" << res.spanner.edge_count()
              << (res.trace.budget_exceeded ? " (budget exceeded)" : "") << "\n";
    return res.trace.budget_exceeded ? kExitVerifyFailed : kExitOk;
}

int cmd_bench(const std::string& suite, const std::vector<int>& sizes,
              const std::vector<std::uint64_t>& seeds, int k, double p, long long wmax,
              const std::string& out) {
    std::ofstream of(out);
    if (!of) throw std::runtime_error("cannot write " + out);
    if (suite == "size") {
        of << "n,m_H,bound\n";
        for (int n : sizes) {
            for (auto seed : seeds) {
                auto g = gen_random({n, p, 1, wmax, seed});
                auto h = greedy_hop_spanner(g, k);
                of << n << "," << h.edge_count() << ","
                   << std::pow(static_cast<double>(n), 1.0 + 1.0 / k) << "\n";
            }
        }
        return kExitOk;
    }
    if (suite == "stretch") {
        of << "n,seed,u,v,delta_g,delta_h,ratio\n";
        for (int n : sizes) {
            for (auto seed : seeds) {
                auto g = gen_random({n, p, 1, wmax, seed});
                auto [h, trace] = bipath_spanner(g);
                auto rep = verify_stretch(g, h, 2, Rational(2), Cost(24 * g.max_weight()));
                for (const auto& pr : rep.pairs) {
                    of << n << "," << seed << "," << pr.u << "," << pr.v << "," << pr.dg.str()
                       << "," << pr.dh.str() << ",";
                    if (pr.dg.is_infinite() || pr.dh.is_infinite())
                        of << "inf";
                    else
                        of << static_cast<double>(pr.dh.value) / pr.dg.value;
                    of << "\n";
                }
            }
        }
        return kExitOk;
    }
    throw CLI::ValidationError("unknown bench suite: " + suite);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multipath spanner toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph or a named fixture");
    std::string fixture, gen_out = "graph.el";
    int gen_n = 10;
    double gen_p = 0.5;
    long long wmin = 1, wmax = 1, fig_s = 2;
    std::uint64_t gen_seed = 0;
    gen->add_option("--fixture", fixture, "named fixture (fig1)");
    gen->add_option("--n", gen_n, "vertex count");
    gen->add_option("--p", gen_p, "edge probability");
    gen->add_option("--wmin", wmin, "minimum weight");
    gen->add_option("--wmax", wmax, "maximum weight");
    gen->add_option("--s", fig_s, "fixture stretch parameter");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("-o,--out", gen_out, "output path (or prefix for fixtures)");

    // build
    auto* build = app.add_subcommand("build", "construct a spanner");
    std::string algo, build_in, build_out = "spanner.el", summary_path, trace_path;
    int b_k = 2, b_p = 2, b_r = 1;
    double b_c = 1.0, b_cluster_c = 2.0;
    std::uint64_t b_seed = 0;
    bool b_verify = false;
    build->add_option("--algo", algo, "greedy-hop|cluster-hop|ft|pipeline|bipath")->required();
    build->add_flag("--verify", b_verify, "run the stretch verifier and record worst_ratio");
    build->add_option("--k", b_k, "hop parameter (s = 2k-1)");
    build->add_option("--p", b_p, "multipath order");
    build->add_option("--r", b_r, "fault budget");
    build->add_option("--c", b_c, "wrapper repeat constant");
    build->add_option("--cluster-c", b_cluster_c, "cluster sampling constant");
    build->add_option("--seed", b_seed, "random seed");
    build->add_option("input", build_in, "input edge list")->required();
    build->add_option("-o,--out", build_out, "spanner output path");
    build->add_option("--summary", summary_path, "summary JSON path");
    build->add_option("--trace", trace_path, "trace JSONL path (bipath)");

    // verify
    auto* verify = app.add_subcommand("verify", "check a spanner property");
    std::string kind, v_g, v_h, report_path, alpha_text = "1", s_text = "1";
    int v_p = 2, v_b = 3, v_r = 1, v_k = 2;
    long long v_beta = 0;
    verify->add_option("--kind", kind, "multipath|stretch|hop|ft|cert")->required();
    verify->add_option("--p", v_p, "multipath order");
    verify->add_option("--alpha", alpha_text, "multiplicative stretch (rational ok)");
    verify->add_option("--beta", v_beta, "additive stretch");
    verify->add_option("--b", v_b, "hop budget");
    verify->add_option("--s", s_text, "stretch factor");
    verify->add_option("--r", v_r, "fault budget");
    verify->add_option("--k", v_k, "certificate parameter");
    verify->add_option("-o,--report", report_path, "CSV report path");
    verify->add_option("graph", v_g, "base graph")->required();
    verify->add_option("spanner", v_h, "spanner edge list (defaults to the base graph)");

    // sim
    auto* sim = app.add_subcommand("sim", "run a LOCAL-model protocol");
    std::string protocol, sim_in, sim_out, sim_trace;
    int s_k = 2, s_p = 2, s_max_rounds = 0;
    double s_c = 2.0, s_ft_c = 1.0;
    std::uint64_t s_seed = 0;
    sim->add_option("--protocol", protocol, "cluster|ft-cluster")->required();
    sim->add_option("--k", s_k, "hop parameter");
    sim->add_option("--p", s_p, "multipath order (ft wrapper uses r = p-1)");
    sim->add_option("--c", s_c, "cluster sampling constant");
    sim->add_option("--ft-c", s_ft_c, "wrapper repeat constant");
    sim->add_option("--max-rounds", s_max_rounds, "round budget (default 3k)");
    sim->add_option("--seed", s_seed, "random seed");
    sim->add_option("input", sim_in, "input edge list")->required();
    sim->add_option("-o,--out", sim_out, "spanner output path");
    sim->add_option("--trace", sim_trace, "round trace CSV path");

    // bench
    auto* bench = app.add_subcommand("bench", "emit benchmark tables");
    std::string suite, bench_out = "bench.csv";
    std::vector<int> bench_sizes{100};
    std::vector<std::uint64_t> bench_seeds{1};
    int bench_k = 2;
    double bench_p = 0.1;
    long long bench_wmax = 10;
    bench->add_option("--suite", suite, "size|stretch")->required();
    bench->add_option("--sizes", bench_sizes, "vertex counts")->delimiter(',');
    bench->add_option("--seeds", bench_seeds, "seeds")->delimiter(',');
    bench->add_option("--k", bench_k, "hop parameter");
    bench->add_option("--p", bench_p, "edge probability");
    bench->add_option("--wmax", bench_wmax, "maximum weight");
    bench->add_option("-o,--out", bench_out, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(fixture, gen_n, gen_p, wmin, wmax, fig_s, gen_seed, gen_out);
        if (build->parsed())
            return cmd_build(algo, build_in, build_out, summary_path, trace_path, b_k, b_p, b_r,
                             b_c, b_cluster_c, b_seed, b_verify);
        if (verify->parsed())
            return cmd_verify(kind, v_g, v_h, report_path, v_p, alpha_text, v_beta, v_b, s_text,
                              v_r, v_k);
        if (sim->parsed())
            return cmd_sim(protocol, sim_in, sim_out, sim_trace, s_k, s_p, s_c, s_ft_c,
                           s_max_rounds, s_seed);
        if (bench->parsed())
            return cmd_bench(suite, bench_sizes, bench_seeds, bench_k, bench_p, bench_wmax,
                             bench_out);
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

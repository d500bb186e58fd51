#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mps/graph.hpp"

// End-to-end checks of the command-line tool, driven through std::system.

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("mps_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    std::string cmd = std::string(MPS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("gen is byte-reproducible") {
    TempDir tmp;
    auto a = tmp.file("a.el"), b = tmp.file("b.el");
    CHECK(run("gen --n 50 --p 0.2 --wmin 1 --wmax 10 --seed 7 -o " + a) == 0);
    CHECK(run("gen --n 50 --p 0.2 --wmin 1 --wmax 10 --seed 7 -o " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
}

TEST_CASE("gen fig1 emits the fixture triple") {
    TempDir tmp;
    auto prefix = tmp.file("fx");
    CHECK(run("gen --fixture fig1 --n 16 --s 4 -o " + prefix) == 0);
    CHECK(fs::exists(prefix + "_G.el"));
    CHECK(fs::exists(prefix + "_H.el"));
    CHECK(fs::exists(prefix + "_uv.json"));
    auto g = mps::load_graph(prefix + "_G.el");
    CHECK(g.vertex_count() == 17);
}

TEST_CASE("build greedy-hop then verify hop passes") {
    TempDir tmp;
    auto g = tmp.file("g.el"), h = tmp.file("h.el"), sum = tmp.file("s.json");
    CHECK(run("gen --n 40 --p 0.25 --wmin 1 --wmax 9 --seed 3 -o " + g) == 0);
    CHECK(run("build --algo greedy-hop --k 2 " + g + " -o " + h + " --summary " + sum) == 0);
    CHECK(run("verify --kind hop --b 3 --s 3 " + g + " " + h) == 0);
    CHECK(slurp(sum).find("\"m_H\"") != std::string::npos);
}

TEST_CASE("pipeline build declares alpha=18 and verifies") {
    TempDir tmp;
    auto g = tmp.file("g.el"), h = tmp.file("h.el"), sum = tmp.file("s.json");
    CHECK(run("gen --n 20 --p 0.3 --wmin 1 --wmax 50 --seed 5 -o " + g) == 0);
    CHECK(run("build --algo pipeline --p 2 --k 2 --seed 3 --verify " + g + " -o " + h +
              " --summary " + sum) == 0);
    CHECK(slurp(sum).find("\"alpha_declared\": 18") != std::string::npos);
    CHECK(slurp(sum).find("\"worst_ratio\"") != std::string::npos);
    CHECK(run("verify --kind multipath --p 2 --alpha 18 " + g + " " + h) == 0);
}

TEST_CASE("fig1 spanner fails a multipath check below its real stretch") {
    TempDir tmp;
    auto prefix = tmp.file("fx");
    CHECK(run("gen --fixture fig1 --n 32 --s 8 -o " + prefix) == 0);
    CHECK(run("verify --kind multipath --p 2 --alpha 17.9 " + prefix + "_G.el " + prefix +
              "_H.el") == 1);
}

TEST_CASE("bipath build writes a trace and verifies at (2, 24W)") {
    TempDir tmp;
    auto g = tmp.file("g.el"), h = tmp.file("h.el"), tr = tmp.file("t.jsonl");
    CHECK(run("gen --n 26 --p 0.5 --wmin 1 --wmax 2 --seed 2 -o " + g) == 0);
    CHECK(run("build --algo bipath " + g + " -o " + h + " --trace " + tr) == 0);
    auto trace = slurp(tr);
    CHECK(trace.find("\"ball_size\"") != std::string::npos);  // one JSON record per iteration
    CHECK(run("verify --kind multipath --p 2 --alpha 2 --beta 48 " + g + " " + h) == 0);
}

TEST_CASE("build output carries a provenance comment") {
    TempDir tmp;
    auto g = tmp.file("g.el"), h = tmp.file("h.el");
    CHECK(run("gen --n 24 --p 0.3 --wmin 1 --wmax 9 --seed 8 -o " + g) == 0);
    CHECK(run("build --algo cluster-hop --k 2 --seed 5 " + g + " -o " + h) == 0);
    auto text = slurp(h);
    CHECK(text.find("# algo=cluster-hop") != std::string::npos);
    CHECK(text.find("seed=5") != std::string::npos);
    // the spanner file loads back as a subgraph of g
    CHECK(run("verify --kind hop --b 3 --s 3 " + g + " " + h) == 0);
}

TEST_CASE("bench tables are deterministic with the documented headers") {
    TempDir tmp;
    auto a = tmp.file("a.csv"), b = tmp.file("b.csv"), st = tmp.file("st.csv");
    CHECK(run("bench --suite size --k 2 --sizes 40,60 --seeds 1,2 --p 0.2 -o " + a) == 0);
    CHECK(run("bench --suite size --k 2 --sizes 40,60 --seeds 1,2 --p 0.2 -o " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("n,m_H,bound") == 0);
    CHECK(run("bench --suite stretch --sizes 20 --seeds 3 --p 0.5 --wmax 2 -o " + st) == 0);
    CHECK(slurp(st).find("n,seed,u,v,delta_g,delta_h,ratio") == 0);
    CHECK(run("bench --suite bogus -o " + a) == 2);
}

TEST_CASE("sim respects budgets and matches the sequential constructions") {
    TempDir tmp;
    auto g = tmp.file("g.el"), h = tmp.file("h.el"), tr = tmp.file("t.csv");
    CHECK(run("gen --n 30 --p 0.25 --wmin 1 --wmax 9 --seed 1 -o " + g) == 0);
    CHECK(run("sim --protocol cluster --k 2 --seed 1 " + g + " -o " + h + " --trace " + tr) == 0);
    CHECK(slurp(tr).find("round,messages,total_payload_units") == 0);
    CHECK(run("sim --protocol ft-cluster --p 2 --k 2 --seed 1 " + g) == 0);
}

TEST_CASE("usage and guard exit codes") {
    TempDir tmp;
    auto g = tmp.file("g.el");
    CHECK(run("gen --n 16 --p 0.4 --wmin 1 --wmax 5 --seed 9 -o " + g) == 0);
    SUBCASE("invalid protocol id") {
        CHECK(run("sim --protocol bogus --k 2 --seed 1 " + g) == 2);
    }
    SUBCASE("unknown flags") {
        CHECK(run("gen --frobnicate 3") == 2);
    }
    SUBCASE("exhaustive ft verification guards oversized inputs") {
        CHECK(run("verify --kind ft --r 1 --s 3 " + g + " " + g) == 3);
        std::string cmd = "MPS_GUARD_N=20 " + std::string(MPS_CLI_PATH) +
                          " verify --kind ft --r 1 --s 3 " + g + " " + g + " >/dev/null 2>&1";
        CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    }
}

TEST_SUITE_END();

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/stat.h>
#include <sys/wait.h>

#include "clks/config.hpp"
#include "clks/csv.hpp"
#include "clks/runner.hpp"

using namespace clks;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void make_dir(const std::string& d) { ::mkdir(d.c_str(), 0755); }

int run_cli(const std::string& args) {
    std::string cmd = std::string(CLKS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int st = std::system(cmd.c_str());
    REQUIRE(st != -1);
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("config defaults and wall parsing") {
    RunConfig cfg = parse_config("{}", Subcommand::VerifyKernel);
    CHECK(cfg.seed == 0);
    CHECK(cfg.threads == 1);
    CHECK(cfg.domain->name == "ball");

    RunConfig full = parse_config(R"({
        "seed": 9, "threads": 2,
        "domain": {"type": "ellipsoid", "params": {"a": 2.0, "b": 1.0, "c": 1.0}},
        "wall": {"T_w": {"type": "patchwise", "params": {"axis": "z", "T_plus": 1.2,
                 "T_minus": 0.8}}, "r_perp": 0.5, "r_par": 0.75}
    })", Subcommand::VerifyKernel);
    CHECK(full.seed == 9);
    CHECK(full.wall.T_M == doctest::Approx(1.2));
    CHECK(full.wall.T_m == doctest::Approx(0.8));
    CHECK(full.domain->bounding_radius == doctest::Approx(2.0));
}

TEST_CASE("unknown keys are rejected at every level") {
    CHECK_THROWS_AS(parse_config(R"({"bogus": 1})", Subcommand::VerifyKernel), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"domain": {"type": "ball", "extra": 1}})",
                                 Subcommand::VerifyKernel),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(
                        R"({"wall": {"T_w": 1.0, "r_perp": 1.0, "r_par": 1.0, "x": 0}})",
                        Subcommand::VerifyKernel),
                    ConfigError);
    // Subcommand payloads do not leak across commands.
    CHECK_THROWS_AS(parse_config(R"({"n_particles": 10})", Subcommand::VerifyKernel),
                    ConfigError);
}

TEST_CASE("validation failures") {
    CHECK_THROWS_AS(parse_config("{", Subcommand::VerifyKernel), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"threads": 0})", Subcommand::VerifyKernel), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"domain": {"type": "torus"}})", Subcommand::VerifyKernel),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"wall": {"T_w": -1.0, "r_perp": 1.0, "r_par": 1.0}})",
                     Subcommand::VerifyKernel),
        ConfigError);
    // simulate needs exactly one of n_bounces / horizon.
    CHECK_THROWS_AS(parse_config(R"({"n_bounces": 5, "horizon": 1.0})", Subcommand::Simulate),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("{}", Subcommand::Simulate), ConfigError);
    CHECK_NOTHROW(parse_config(R"({"n_bounces": 5})", Subcommand::Simulate));
    // Reserved mode: rejected rather than silently ignored.
    CHECK_THROWS_AS(
        parse_config(R"({"n_bounces": 5, "with_collisions": true})", Subcommand::Simulate),
        ConfigError);
}

TEST_CASE("polynomial domain from config") {
    RunConfig cfg = parse_config(R"({
        "domain": {"type": "polynomial", "params": {
            "terms": [{"coeff": 1, "px": 2}, {"coeff": 1, "py": 2}, {"coeff": 1, "pz": 2},
                      {"coeff": -1}],
            "convexity_lower_bound": 2.0, "bounding_radius": 1.0}}
    })", Subcommand::VerifyKernel);
    CHECK(cfg.domain->xi({1, 0, 0}) == doctest::Approx(0.0));
    CHECK(cfg.domain->xi({0.5, 0, 0}) < 0.0);
}

TEST_CASE("runner emits CSV with header and summary trailer, deterministic per seed") {
    make_dir("cli_out_a");
    make_dir("cli_out_b");
    RunConfig cfg = parse_config(
        R"({"n_norm_configs": 2, "n_recip_pairs": 20, "n_sampler": 5000, "seed": 5})",
        Subcommand::VerifyKernel);
    cfg.out_dir = "cli_out_a";
    CHECK(run(cfg) == 0);
    cfg.out_dir = "cli_out_b";
    CHECK(run(cfg) == 0);

    std::string a = slurp("cli_out_a/kernel_report.csv");
    std::string b = slurp("cli_out_b/kernel_report.csv");
    CHECK(a == b);  // byte-identical for a fixed (seed, threads)
    CHECK(a.rfind("# pass=") != std::string::npos);
    CHECK(a.substr(0, a.find('\n')) == "check_id,params,value,target,tol,pass");
    CHECK(a.find("fail=0") != std::string::npos);
}

TEST_CASE("trace runner output is reproducible and carries per-step rows") {
    make_dir("cli_out_t1");
    make_dir("cli_out_t2");
    RunConfig cfg = parse_config(R"({"samples": 50, "k": 4, "t": 3.0, "seed": 11})",
                                 Subcommand::Trace);
    cfg.out_dir = "cli_out_t1";
    CHECK(run(cfg) == 0);
    cfg.out_dir = "cli_out_t2";
    CHECK(run(cfg) == 0);
    CHECK(slurp("cli_out_t1/trace.csv") == slurp("cli_out_t2/trace.csv"));
    std::string t = slurp("cli_out_t1/trace.csv");
    CHECK(t.substr(0, t.find('\n')) ==
          "trace,j,t,x0,x1,x2,v0,v1,v2,in_grazing_set,log_weight");
    CHECK(t.find("survival k=1") != std::string::npos);
}

TEST_CASE("simulate runner writes moments, tallies and the binary dump") {
    make_dir("cli_out_s");
    RunConfig cfg = parse_config(
        R"({"n_particles": 500, "n_bounces": 5, "seed": 3})", Subcommand::Simulate);
    cfg.out_dir = "cli_out_s";
    CHECK(run(cfg) == 0);
    std::string m = slurp("cli_out_s/moments.csv");
    CHECK(m.find("mass_conserved=1") != std::string::npos);
    std::string w = slurp("cli_out_s/walltally.csv");
    CHECK(w.find("# pass=") != std::string::npos);
    std::string dump = slurp("cli_out_s/final_state.bin");
    CHECK(dump.size() == 16 + 500 * 48);
    CHECK(dump.substr(0, 4) == "CLKS");
}

TEST_CASE("simulate output is reproducible for a fixed seed and worker count") {
    for (const char* dir : {"cli_out_w1", "cli_out_w2", "cli_out_w2b"}) make_dir(dir);
    RunConfig cfg = parse_config(
        R"({"n_particles": 400, "n_bounces": 4, "seed": 12, "threads": 2})",
        Subcommand::Simulate);
    cfg.out_dir = "cli_out_w2";
    CHECK(run(cfg) == 0);
    cfg.out_dir = "cli_out_w2b";
    CHECK(run(cfg) == 0);
    CHECK(slurp("cli_out_w2/final_state.bin") == slurp("cli_out_w2b/final_state.bin"));
    CHECK(slurp("cli_out_w2/moments.csv") == slurp("cli_out_w2b/moments.csv"));

    cfg.threads = 1;
    cfg.out_dir = "cli_out_w1";
    CHECK(run(cfg) == 0);
    // A different worker count legitimately changes the stream partition.
    CHECK(slurp("cli_out_w1/final_state.bin") != slurp("cli_out_w2/final_state.bin"));
}

TEST_CASE("simulate observables selection controls the emitted files") {
    make_dir("cli_out_obs");
    RunConfig cfg = parse_config(
        R"({"n_particles": 100, "n_bounces": 2, "observables": ["walltally"]})",
        Subcommand::Simulate);
    cfg.out_dir = "cli_out_obs";
    CHECK(run(cfg) == 0);
    std::ifstream mom("cli_out_obs/moments.csv");
    CHECK_FALSE(mom.good());
    std::ifstream tal("cli_out_obs/walltally.csv");
    CHECK(tal.good());
}

TEST_CASE("cli binary: exit codes for good runs, bad configs, io failures") {
    {
        std::ofstream bad("bad_config.json");
        bad << "{ not json";
    }
    CHECK(run_cli("verify-lemmas --config bad_config.json") == 2);
    {
        std::ofstream unknown("unknown_key.json");
        unknown << R"({"nope": 1})";
    }
    CHECK(run_cli("verify-lemmas --config unknown_key.json") == 2);
    CHECK(run_cli("trace --config does_not_exist.json") == 3);
    make_dir("cli_out_bin");
    CHECK(run_cli("trace --samples 10 --k 2 --seed 1 --out cli_out_bin") == 0);
    std::remove("bad_config.json");
    std::remove("unknown_key.json");
}

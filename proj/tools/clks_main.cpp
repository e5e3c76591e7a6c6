// clks: library + CLI for Cercignani-Lampis gas-surface scattering.
// Subcommands: verify-kernel, verify-lemmas, trace, simulate.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "clks/config.hpp"
#include "clks/csv.hpp"
#include "clks/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw clks::IoError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cercignani-Lampis scattering kernel toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    std::string out_dir;
    app.add_option("--config", config_path, "JSON configuration file")->expected(1);
    app.add_option("--seed", seed, "random seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--threads", threads, "worker count");
    app.add_option("--out", out_dir, "output directory");

    app.add_subcommand("verify-kernel", "normalization / reciprocity / sampler checks");
    auto* vl = app.add_subcommand("verify-lemmas", "numeric lemma checks (CSV report)");
    auto* tr = app.add_subcommand("trace", "backward boundary cycles (CSV per step)");
    auto* sim = app.add_subcommand("simulate", "free-molecular particle simulation");

    long tr_samples = 0;
    int tr_k = 0;
    double tr_delta = 0;
    tr->add_option("--samples", tr_samples, "number of traces");
    tr->add_option("--k", tr_k, "maximum bounce count");
    tr->add_option("--delta", tr_delta, "grazing-set delta");

    CLI11_PARSE(app, argc, argv);

    clks::Subcommand cmd = clks::Subcommand::VerifyKernel;
    if (vl->parsed()) cmd = clks::Subcommand::VerifyLemmas;
    if (tr->parsed()) cmd = clks::Subcommand::Trace;
    if (sim->parsed()) cmd = clks::Subcommand::Simulate;

    clks::RunConfig cfg;
    try {
        std::string text = "{}";
        if (!config_path.empty()) text = read_file(config_path);
        cfg = clks::parse_config(text, cmd);
    } catch (const clks::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    }
    if (seed_set) cfg.seed = seed;
    if (threads > 0) cfg.threads = threads;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (tr->parsed()) {
        if (tr_samples > 0) cfg.samples = tr_samples;
        if (tr_k > 0) cfg.k = tr_k;
        if (tr_delta > 0) cfg.delta = tr_delta;
    }

    try {
        return clks::run(cfg);
    } catch (const clks::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 3;
    } catch (const clks::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

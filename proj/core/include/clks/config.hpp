#pragma once

// JSON run configuration: schema-validated before any computation; unknown
// keys are rejected.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "clks/geometry.hpp"
#include "clks/linalg.hpp"
#include "clks/wall.hpp"

namespace clks {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Subcommand { VerifyKernel, VerifyLemmas, Trace, Simulate };

struct RunConfig {
    Subcommand cmd = Subcommand::VerifyKernel;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = ".";

    std::shared_ptr<const ConvexDomain> domain;
    WallModel wall = WallModel::make(TemperatureField::constant(1.0), 1.0, 1.0);

    // verify-kernel
    int n_norm_configs = 20;
    long n_recip_pairs = 1000;
    long n_sampler = 200000;

    // verify-lemmas
    int lemma_grid = 3;      // per-axis grid for the identity lemmas
    long nln_samples = 20000;
    double weight_eps = 0;   // kinetic-distance cutoff scale; 0 = 1% of the C2 norm

    // trace
    long samples = 1000;
    int k = 6;
    double delta = 0.1;
    double t = 1.0;
    Vec3 x0{0.5, 0.0, 0.0};
    Vec3 v0{1.0, 0.3, 0.0};
    double lambda = 1.0;
    double t_star = 1e-2;
    double c_exponent = 1.0 / 15.0;
    double exp_last = 2.0;  // cycle-measure velocity-bracket exponents
    double exp_mid = 4.0;

    // simulate
    long n_particles = 10000;
    int n_bounces = 0;       // exactly one of n_bounces / horizon is set
    double horizon = 0;
    double T_init = 1.0;
    int n_snapshots = 10;
    bool with_collisions = false;  // hard-sphere DSMC is out of the default path
    bool write_moments = true;     // "observables" selection
    bool write_walltally = true;
    bool write_final_state = true;
};

// Parses and validates the JSON text. `cmd` selects which payload keys apply.
RunConfig parse_config(const std::string& json_text, Subcommand cmd);

std::shared_ptr<const ConvexDomain> parse_domain_json(const std::string& json_text);

}  // namespace clks

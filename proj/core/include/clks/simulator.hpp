#pragma once

// Forward free-molecular particle simulation in a convex domain with C-L
// walls: event-driven flight to the wall, exact resampling there, and
// observables for conservation, null flux and equilibrium.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "clks/clkernel.hpp"
#include "clks/geometry.hpp"
#include "clks/rng.hpp"
#include "clks/wall.hpp"

namespace clks {

struct ParticleEnsemble {
    std::vector<Vec3> pos;
    std::vector<Vec3> vel;
    std::vector<double> weight;
    double clock = 0;

    std::size_t size() const { return pos.size(); }
    double total_weight() const;
};

struct WallTally {
    struct Patch {
        double incident = 0, emitted = 0;      // particle counts (weighted)
        double energy_in = 0, energy_out = 0;  // (1/2)|v|^2 sums
        double energy_sq_in = 0, energy_sq_out = 0;
        double momentum_normal = 0;            // n.(v_in - v_out) sums
        long events = 0;
    };
    std::array<Patch, 2> patch;
    double window = 0;      // elapsed simulated time covered by the tally
    long stuck_events = 0;  // grazing resample retries that hit the cap
};

ParticleEnsemble init_ensemble(const ConvexDomain& dom, std::size_t n, double T_init,
                               RandomStream& rng);

// Monte Carlo domain volume (rejection ratio times box volume).
double estimate_volume(const ConvexDomain& dom, long n, RandomStream& rng);

// Advance every particle to absolute time `horizon` (exact free flight,
// C-L resampling at each wall contact).
void advance_to_time(const ConvexDomain& dom, const WallModel& wall,
                     ParticleEnsemble& ens, double horizon, WallTally* tally,
                     RandomStream& rng);

// Advance each particle through exactly n_bounces wall events. If
// outgoing_speeds is non-null, the post-bounce |v| of every bounce past
// `record_after` is appended.
void advance_bounces(const ConvexDomain& dom, const WallModel& wall,
                     ParticleEnsemble& ens, int n_bounces, WallTally* tally,
                     RandomStream& rng, std::vector<double>* outgoing_speeds = nullptr,
                     int record_after = 0);

struct Moments {
    double count = 0;       // total statistical weight
    double density = 0;     // weight / volume
    Vec3 bulk_velocity;
    double temperature = 0; // mean |v - u|^2 / 3
};
Moments compute_moments(const ParticleEnsemble& ens, double volume);

struct EquilibriumReport {
    double p_flux = 0;      // chi^2 p-value of post-bounce speeds vs the
                            // flux-weighted Maxwellian law s^3 e^{-s^2/2T}/(2T^2)
    double p_snapshot = 0;  // chi^2 p-value of a common-time snapshot vs the
                            // Maxwell speed law ~ s^2 e^{-s^2/2T}
    double chi2_flux = 0, chi2_snapshot = 0;
    bool mass_conserved = false;
    long stuck_events = 0;
};

EquilibriumReport equilibrium_test(const ConvexDomain& dom, const WallModel& wall,
                                   std::size_t n_particles, int n_bounces,
                                   RandomStream& rng);

struct NullFluxReport {
    // Per patch: particle-flux balance is exact by construction; energy flux
    // is (out - in)/window with a Monte Carlo standard error.
    struct Patch {
        double particle_flux = 0;  // (emitted - incident)/window, identically 0
        double energy_flux = 0;
        double energy_flux_se = 0;
        double pressure = 0;       // normal momentum transfer per window, report only
        long events = 0;
    };
    std::array<Patch, 2> patch;
};
NullFluxReport null_flux_tally(const WallTally& tally);

// Final-state dump, little-endian: magic "CLKS", version u32, N u64, N x 6 f64.
void dump_ensemble(const std::string& path, const ParticleEnsemble& ens);
ParticleEnsemble load_ensemble(const std::string& path);

// CDFs used by the equilibrium chi^2 bins.
double maxwell_speed_cdf(double s, double T);        // ~ s^2 e^{-s^2/2T}
double flux_maxwell_speed_cdf(double s, double T);   // ~ s^3 e^{-s^2/2T}

}  // namespace clks

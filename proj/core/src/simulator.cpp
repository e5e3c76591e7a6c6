#include "clks/simulator.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "clks/stats.hpp"

static_assert(std::endian::native == std::endian::little,
              "ensemble dump assumes a little-endian host");

namespace clks {

double ParticleEnsemble::total_weight() const {
    double s = 0;
    for (double w : weight) s += w;
    return s;
}

ParticleEnsemble init_ensemble(const ConvexDomain& dom, std::size_t n, double T_init,
                               RandomStream& rng) {
    ParticleEnsemble ens;
    ens.pos.reserve(n);
    ens.vel.reserve(n);
    ens.weight.assign(n, 1.0);
    const double R = dom.bounding_radius;
    while (ens.pos.size() < n) {
        Vec3 x{rng.uniform(-R, R), rng.uniform(-R, R), rng.uniform(-R, R)};
        if (dom.xi(x) < 0) ens.pos.push_back(x);
    }
    double sig = std::sqrt(T_init);
    for (std::size_t i = 0; i < n; ++i) ens.vel.push_back(rng.normal3() * sig);
    return ens;
}

double estimate_volume(const ConvexDomain& dom, long n, RandomStream& rng) {
    const double R = dom.bounding_radius;
    long in = 0;
    for (long i = 0; i < n; ++i) {
        Vec3 x{rng.uniform(-R, R), rng.uniform(-R, R), rng.uniform(-R, R)};
        if (dom.xi(x) < 0) ++in;
    }
    return 8.0 * R * R * R * static_cast<double>(in) / static_cast<double>(n);
}

namespace {

struct BounceOutcome {
    Vec3 v_out;
    bool stuck = false;
};

// Resample at a wall contact; retries grazing draws (spec'd cap of 3 before a
// fresh attempt is logged as a stuck event).
BounceOutcome resample_at_wall(const WallModel& wall, const Vec3& x_hit, const Vec3& n,
                               const Vec3& v_in, RandomStream& rng) {
    BounceOutcome out;
    for (int attempt = 0; attempt < 100; ++attempt) {
        Vec3 v = sample_outgoing(wall, x_hit, n, v_in, rng);
        if (dot(n, v) < -kGrazeTol * norm(v)) {
            out.v_out = v;
            out.stuck = attempt >= 3;
            return out;
        }
    }
    throw std::runtime_error("resample_at_wall: could not re-enter the domain");
}

void tally_event(WallTally* tally, const WallModel& wall, const Vec3& x_hit,
                 const Vec3& n, const Vec3& v_in, const Vec3& v_out, double w) {
    if (!tally) return;
    auto& p = tally->patch[wall.patch(x_hit)];
    p.momentum_normal += w * (dot(n, v_in) - dot(n, v_out));
    double ein = 0.5 * w * norm2(v_in), eout = 0.5 * w * norm2(v_out);
    p.incident += w;
    p.emitted += w;
    p.energy_in += ein;
    p.energy_out += eout;
    p.energy_sq_in += ein * ein;
    p.energy_sq_out += eout * eout;
    p.events += 1;
}

}  // namespace

void advance_to_time(const ConvexDomain& dom, const WallModel& wall,
                     ParticleEnsemble& ens, double horizon, WallTally* tally,
                     RandomStream& rng) {
    double span = horizon - ens.clock;
    if (span < 0) throw std::invalid_argument("advance_to_time: horizon in the past");
    for (std::size_t i = 0; i < ens.size(); ++i) {
        double remaining = span;
        Vec3 x = ens.pos[i], v = ens.vel[i];
        while (true) {
            // Forward flight time to the wall = backward exit time along -v.
            ExitRecord exit = backward_exit(dom, x, -v);
            if (exit.t_b >= remaining) {
                x = x + v * remaining;
                break;
            }
            remaining -= exit.t_b;
            x = exit.x_b;
            BounceOutcome out = resample_at_wall(wall, x, exit.n_xb, v, rng);
            tally_event(tally, wall, x, exit.n_xb, v, out.v_out, ens.weight[i]);
            if (out.stuck && tally) ++tally->stuck_events;
            v = out.v_out;
        }
        ens.pos[i] = x;
        ens.vel[i] = v;
    }
    ens.clock = horizon;
    // Window counts summed particle time, so fluxes are per unit of it in
    // both advance modes.
    if (tally) tally->window += span * static_cast<double>(ens.size());
}

void advance_bounces(const ConvexDomain& dom, const WallModel& wall,
                     ParticleEnsemble& ens, int n_bounces, WallTally* tally,
                     RandomStream& rng, std::vector<double>* outgoing_speeds,
                     int record_after) {
    for (std::size_t i = 0; i < ens.size(); ++i) {
        Vec3 x = ens.pos[i], v = ens.vel[i];
        for (int b = 0; b < n_bounces; ++b) {
            ExitRecord exit = backward_exit(dom, x, -v);
            if (tally) tally->window += exit.t_b;
            x = exit.x_b;
            BounceOutcome out = resample_at_wall(wall, x, exit.n_xb, v, rng);
            tally_event(tally, wall, x, exit.n_xb, v, out.v_out, ens.weight[i]);
            if (out.stuck && tally) ++tally->stuck_events;
            v = out.v_out;
            if (outgoing_speeds && b >= record_after) outgoing_speeds->push_back(norm(v));
        }
        // Leave the particle just off the wall along its outgoing velocity.
        ens.pos[i] = x;
        ens.vel[i] = v;
    }
}

Moments compute_moments(const ParticleEnsemble& ens, double volume) {
    Moments m;
    if (ens.size() == 0) return m;
    Vec3 u{};
    double wsum = 0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        u += ens.vel[i] * ens.weight[i];
        wsum += ens.weight[i];
    }
    u = u / wsum;
    double e = 0;
    for (std::size_t i = 0; i < ens.size(); ++i) e += ens.weight[i] * norm2(ens.vel[i] - u);
    m.count = wsum;
    m.density = volume > 0 ? wsum / volume : 0;
    m.bulk_velocity = u;
    m.temperature = e / (3.0 * wsum);
    return m;
}

double maxwell_speed_cdf(double s, double T) {
    if (s <= 0) return 0;
    double z = s / std::sqrt(2.0 * T);
    return std::erf(z) - std::sqrt(2.0 / M_PI) * s / std::sqrt(T) * std::exp(-z * z);
}

double flux_maxwell_speed_cdf(double s, double T) {
    if (s <= 0) return 0;
    double q = s * s / (2.0 * T);
    return 1.0 - std::exp(-q) * (1.0 + q);
}

namespace {

// Equal-probability bin edges of a scalar CDF by bisection.
std::vector<double> equal_prob_edges(int K, double T, double (*cdf)(double, double)) {
    std::vector<double> edges(K + 1);
    edges[0] = 0;
    edges[K] = 1e30;
    for (int k = 1; k < K; ++k) {
        double target = static_cast<double>(k) / K, lo = 0, hi = 50 * std::sqrt(T);
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (cdf(mid, T) < target ? lo : hi) = mid;
        }
        edges[k] = 0.5 * (lo + hi);
    }
    return edges;
}

double chi2_speed_test(const std::vector<double>& speeds, double T,
                       double (*cdf)(double, double), double* chi2_out) {
    const int K = 32;
    std::vector<double> edges = equal_prob_edges(K, T, cdf);
    std::vector<std::size_t> counts(K, 0);
    for (double s : speeds) {
        int lo = 0, hi = K;
        while (hi - lo > 1) {
            int mid = (lo + hi) / 2;
            (s >= edges[mid] ? lo : hi) = mid;
        }
        ++counts[lo];
    }
    std::vector<double> probs(K, 1.0 / K);
    return chi2_test(counts, probs, chi2_out);
}

}  // namespace

EquilibriumReport equilibrium_test(const ConvexDomain& dom, const WallModel& wall,
                                   std::size_t n_particles, int n_bounces,
                                   RandomStream& rng) {
    EquilibriumReport rep;
    if (wall.Tw.kind != TemperatureField::Kind::Constant)
        throw std::invalid_argument("equilibrium_test: uniform T_w required");
    const double T = wall.Tw.base;

    // Relaxation route: start hot, burn in half the bounces, test the
    // post-bounce speeds against the flux-weighted Maxwellian law.
    ParticleEnsemble ens = init_ensemble(dom, n_particles, 1.5 * T, rng);
    double w0 = ens.total_weight();
    std::size_t n0 = ens.size();
    WallTally tally;
    std::vector<double> speeds;
    speeds.reserve(n_particles * static_cast<std::size_t>((n_bounces + 1) / 2));
    advance_bounces(dom, wall, ens, n_bounces, &tally, rng, &speeds, n_bounces / 2);
    rep.p_flux = chi2_speed_test(speeds, T, flux_maxwell_speed_cdf, &rep.chi2_flux);
    rep.mass_conserved = ens.size() == n0 && std::fabs(ens.total_weight() - w0) == 0.0;
    rep.stuck_events = tally.stuck_events;

    // Invariance route: start from the stationary state, evolve through many
    // wall events to a common time, snapshot against the Maxwell speed law.
    ParticleEnsemble ens2 = init_ensemble(dom, n_particles, T, rng);
    double mean_free = dom.bounding_radius / std::sqrt(T);
    advance_to_time(dom, wall, ens2, 0.5 * n_bounces * mean_free, nullptr, rng);
    std::vector<double> snap(ens2.size());
    for (std::size_t i = 0; i < ens2.size(); ++i) snap[i] = norm(ens2.vel[i]);
    rep.p_snapshot = chi2_speed_test(snap, T, maxwell_speed_cdf, &rep.chi2_snapshot);
    return rep;
}

NullFluxReport null_flux_tally(const WallTally& tally) {
    NullFluxReport rep;
    for (int p = 0; p < 2; ++p) {
        const auto& src = tally.patch[p];
        auto& dst = rep.patch[p];
        dst.events = src.events;
        if (tally.window <= 0 || src.events == 0) continue;
        dst.particle_flux = (src.emitted - src.incident) / tally.window;
        double net = src.energy_out - src.energy_in;
        dst.energy_flux = net / tally.window;
        // Per-event variance of (e_out - e_in) from the accumulated squares
        // (cross term dropped; conservative for anticorrelated in/out).
        double n = static_cast<double>(src.events);
        double m_out = src.energy_out / n, m_in = src.energy_in / n;
        double v_out = std::max(0.0, src.energy_sq_out / n - m_out * m_out);
        double v_in = std::max(0.0, src.energy_sq_in / n - m_in * m_in);
        dst.energy_flux_se = std::sqrt((v_out + v_in) * n) / tally.window;
        dst.pressure = src.momentum_normal / tally.window;
        dst.events = src.events;
    }
    return rep;
}

void dump_ensemble(const std::string& path, const ParticleEnsemble& ens) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("dump_ensemble: cannot open " + path);
    const char magic[4] = {'C', 'L', 'K', 'S'};
    std::uint32_t version = 1;
    std::uint64_t n = ens.size();
    std::fwrite(magic, 1, 4, f);
    std::fwrite(&version, sizeof version, 1, f);
    std::fwrite(&n, sizeof n, 1, f);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        double rec[6] = {ens.pos[i].x, ens.pos[i].y, ens.pos[i].z,
                         ens.vel[i].x, ens.vel[i].y, ens.vel[i].z};
        std::fwrite(rec, sizeof(double), 6, f);
    }
    std::fclose(f);
}

ParticleEnsemble load_ensemble(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("load_ensemble: cannot open " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t n = 0;
    if (std::fread(magic, 1, 4, f) != 4 || magic[0] != 'C' || magic[1] != 'L' ||
        magic[2] != 'K' || magic[3] != 'S') {
        std::fclose(f);
        throw std::runtime_error("load_ensemble: bad magic");
    }
    if (std::fread(&version, sizeof version, 1, f) != 1 || version != 1) {
        std::fclose(f);
        throw std::runtime_error("load_ensemble: unsupported version");
    }
    if (std::fread(&n, sizeof n, 1, f) != 1) {
        std::fclose(f);
        throw std::runtime_error("load_ensemble: truncated header");
    }
    ParticleEnsemble ens;
    ens.pos.resize(n);
    ens.vel.resize(n);
    ens.weight.assign(n, 1.0);
    for (std::uint64_t i = 0; i < n; ++i) {
        double rec[6];
        if (std::fread(rec, sizeof(double), 6, f) != 6) {
            std::fclose(f);
            throw std::runtime_error("load_ensemble: truncated record");
        }
        ens.pos[i] = {rec[0], rec[1], rec[2]};
        ens.vel[i] = {rec[3], rec[4], rec[5]};
    }
    std::fclose(f);
    return ens;
}

}  // namespace clks

#include "clks/runner.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <thread>

#include "clks/clkernel.hpp"
#include "clks/collision.hpp"
#include "clks/csv.hpp"
#include "clks/cycles.hpp"
#include "clks/lemma.hpp"
#include "clks/quadrature.hpp"
#include "clks/simulator.hpp"
#include "clks/stats.hpp"

namespace clks {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return cfg.out_dir.empty() ? name : cfg.out_dir + "/" + name;
}

void emit_lemma(CsvWriter& csv, const LemmaReport& r) {
    csv.row({r.lemma_id, json_cell(r.params), format_double(r.lhs), format_double(r.rhs),
             format_double(r.margin), format_double(r.quad_error), r.pass ? "1" : "0",
             r.asserted ? "1" : "0"});
    if (r.asserted) csv.note_result(r.pass);
}

// Incoming velocity n.u > 0 with |u| <= cap.
Vec3 random_incoming(const Vec3& n, RandomStream& rng, double cap = 8.0) {
    Vec3 e1, e2;
    tangent_basis(n, e1, e2);
    for (;;) {
        Vec3 u = e1 * (1.5 * rng.normal()) + e2 * (1.5 * rng.normal()) +
                 n * rng.uniform(0.05, 3.0);
        if (norm(u) <= cap) return u;
    }
}

}  // namespace

int run_verify_kernel(const RunConfig& cfg) {
    CsvWriter csv(out_path(cfg, "kernel_report.csv"),
                  {"check_id", "params", "value", "target", "tol", "pass"});
    RandomStream rng(cfg.seed, 0, 0);
    const Vec3 n{0, 0, 1};
    const Vec3 x{0, 0, 0};

    for (int i = 0; i < cfg.n_norm_configs; ++i) {
        double T = rng.uniform(0.5, 2.0);
        double rp = rng.uniform(0.05, 1.0);
        double rl = rng.uniform(0.05, 1.95);
        WallModel wall = WallModel::make(TemperatureField::constant(T), rp, rl);
        Vec3 u = random_incoming(n, rng);
        NormalizationResult q = normalization_quadrature(wall, x, n, u);
        bool pass = std::fabs(q.value - 1.0) <= 1e-4;
        csv.row({"normalization",
                 json_cell({{"T", T}, {"r_perp", rp}, {"r_par", rl}, {"u_norm", norm(u)}}),
                 format_double(q.value), "1", "0.0001", pass ? "1" : "0"});
        csv.note_result(pass);
    }

    double max_resid = 0;
    for (long i = 0; i < cfg.n_recip_pairs; ++i) {
        double T = rng.uniform(0.5, 2.0);
        double rp = rng.uniform(0.05, 1.0);
        double rl = rng.uniform(0.05, 1.95);
        WallModel wall = WallModel::make(TemperatureField::constant(T), rp, rl);
        Vec3 u = random_incoming(n, rng);
        Vec3 v = -random_incoming(n, rng);
        double r = std::fabs(reciprocity_residual(wall, x, n, u, v));
        max_resid = std::max(max_resid, r);
    }
    {
        bool pass = max_resid < 1e-10;
        csv.row({"reciprocity_max_residual", json_cell({{"pairs", double(cfg.n_recip_pairs)}}),
                 format_double(max_resid), "0", "1e-10", pass ? "1" : "0"});
        csv.note_result(pass);
    }

    {
        // Sampler vs density: KS on |v_perp| against the quadrature Rice CDF,
        // tangential mean within 3 standard errors of (1-r_par) u_par.
        double T = 1.3, rp = 0.6, rl = 0.8;
        WallModel wall = WallModel::make(TemperatureField::constant(T), rp, rl);
        Vec3 u{1.1, -0.4, 1.7};  // n.u = 1.7 > 0
        VelocityDecomposition du = decompose(u, n);
        RiceCdf cdf(std::sqrt(1.0 - rp) * du.v_perp, T * rp);
        std::vector<double> sperp(cfg.n_sampler);
        MomentAccumulator t1, t2;
        Vec3 e1, e2;
        tangent_basis(n, e1, e2);
        for (long i = 0; i < cfg.n_sampler; ++i) {
            Vec3 v = sample_outgoing(wall, x, n, u, rng);
            sperp[i] = std::fabs(dot(v, n));
            t1.add(dot(v, e1));
            t2.add(dot(v, e2));
        }
        std::sort(sperp.begin(), sperp.end());
        std::vector<double> cdfv(sperp.size());
        for (std::size_t i = 0; i < sperp.size(); ++i) cdfv[i] = cdf(sperp[i]);
        double ks = ks_statistic(cdfv);
        // 0.01 is the acceptance-scale threshold; below ~2.6e4 samples the
        // 1%-significance Kolmogorov critical value takes over.
        double ks_tol = std::max(0.01, 1.628 / std::sqrt(double(cfg.n_sampler)));
        bool pass_ks = ks < ks_tol;
        csv.row({"sampler_ks_perp", json_cell({{"n", double(cfg.n_sampler)}}),
                 format_double(ks), "0", format_double(ks_tol), pass_ks ? "1" : "0"});
        csv.note_result(pass_ks);

        double z1 = std::fabs(t1.mean() - (1.0 - rl) * dot(du.v_par, e1)) /
                    std::max(t1.std_error(), 1e-300);
        double z2 = std::fabs(t2.mean() - (1.0 - rl) * dot(du.v_par, e2)) /
                    std::max(t2.std_error(), 1e-300);
        bool pass_mean = z1 <= 3.0 && z2 <= 3.0;
        csv.row({"sampler_tangential_mean", json_cell({{"z1", z1}, {"z2", z2}}),
                 format_double(std::max(z1, z2)), "0", "3", pass_mean ? "1" : "0"});
        csv.note_result(pass_mean);
    }
    csv.close();
    return csv.fails() == 0 ? 0 : 1;
}

int run_verify_lemmas(const RunConfig& cfg) {
    CsvWriter csv(out_path(cfg, "lemma_report.csv"),
                  {"lemma_id", "params", "lhs", "rhs", "margin", "quad_error", "pass",
                   "asserted"});
    const int g = std::max(2, cfg.lemma_grid);

    for (int ib = 0; ib < g; ++ib)
        for (int ia = 0; ia < g; ++ia)
            for (int ie = 0; ie < g; ++ie) {
                double b = 0.6 * std::pow(2.0, ib);
                double a = b * (0.4 * ia / (g - 1));
                double eps = b * (0.05 + 0.15 * ie / (g - 1));
                double w[2] = {1.0, 0.5};
                emit_lemma(csv, lemma_abc_check(a, b, eps, w));
                for (LemmaReport& r : lemma_abc_tail_check(a, b, eps, w, 0.2))
                    emit_lemma(csv, r);
                emit_lemma(csv, lemma_perp_check(a, b, eps, 1.0, true));
                emit_lemma(csv, lemma_perp_check(a, b, eps, 1.0, false));
                for (LemmaReport& r : lemma_perp_tail_check(a, b, eps, 1.0, 0.2))
                    emit_lemma(csv, r);
            }
    emit_lemma(csv, lemma_i0_smallness_check(1.0, 0.7, 1.0, 0.1));

    // The polynomial bound at c = 1/15 holds on a t-window whose lower edge
    // sits near 1.3e-3 (the critical velocity v ~ sqrt(2/t^c - 1) violates it
    // below that); asserted rows stay inside the window, the outside region is
    // emitted as documentation.
    for (double t : {3e-3, 5e-3, 1e-2, 1e-4, 1e-3})
        for (double lam : {1.0, 2.0}) {
            std::vector<double> vg;
            for (int i = 0; i <= 80; ++i) vg.push_back(20.0 * i / 80.0);
            ExtraTermReport rep = extra_term_check(t, 1.0 / 15.0, lam, vg);
            for (LemmaReport& r : rep.reports) {
                r.asserted = (r.lemma_id == "extra_term_poly_bound") && t >= 3e-3;
                emit_lemma(csv, r);
            }
        }

    for (int gap : {0, 1, 2, 4, 8, 16, 32, 64}) {
        int l = gap + 1, i = 1;
        CoefficientBundle b = temperature_recursion(cfg.wall, l, i);
        LemmaReport r = identity_report("t_recursion_vs_closed_form", b.T_li, b.T_li_closed,
                                        1e-12 * std::fabs(b.T_li_closed), 1e-12);
        r.params = {{"l", double(l)}, {"i", double(i)}};
        emit_lemma(csv, r);
        bool positive = b.T_li > 0 && b.C_TM > 0 && b.C_TMTm > 0 && b.calC > 0 &&
                        b.calC_n > 0 && b.A_lp > 0;
        LemmaReport rp;
        rp.lemma_id = "coefficient_bundle_positive";
        rp.params = {{"l", double(l)}, {"C_TM", b.C_TM}, {"C_TMTm", b.C_TMTm},
                     {"calC", b.calC}};
        rp.lhs = positive ? 1 : 0;
        rp.rhs = 1;
        rp.pass = positive;
        emit_lemma(csv, rp);
    }

    for (double ts : {0.0, 1e-3, 0.5}) {
        NegativityReport nr = exponent_negativity(cfg.wall, 4, ts);
        LemmaReport r;
        r.lemma_id = "exponent_negativity";
        r.params = {{"t_star", ts}, {"threshold", nr.t_star_threshold}};
        r.lhs = nr.value;
        r.rhs = 0;
        r.margin = -nr.value;
        r.pass = nr.holds;
        r.asserted = (ts == 0.0);  // the limit case must hold; others documented
        emit_lemma(csv, r);
    }

    {
        L1CheckResult l1 = k_rho_l1_check(1.0);
        LemmaReport r = identity_report("k_rho_l1", l1.l1, l1.l1_expected, l1.quad_error);
        r.params = {{"rho", 1.0}};
        emit_lemma(csv, r);
        LemmaReport r2 = identity_report("k_rho_l1_over_r", l1.l1_over_r,
                                         l1.l1_over_r_expected, l1.quad_error);
        r2.params = {{"rho", 1.0}};
        emit_lemma(csv, r2);
        LemmaReport r3;
        r3.lemma_id = "k_theta_weight_exchange_fitted";
        double c = k_theta_fitted_constant(1.0, 0.5, 1.0, 4.0);
        r3.lhs = c;
        r3.rhs = 0;
        r3.pass = std::isfinite(c);
        r3.asserted = false;
        r3.params = {{"rho", 1.0}, {"rho_tilde", 0.5}, {"theta_tilde", 1.0}, {"v_max", 4.0}};
        emit_lemma(csv, r3);
    }

    {
        RandomStream rng(cfg.seed, 0, 7);
        BallDomain ball(1.0);
        NlnReport nr = nln_ratio(ball, {0.2, 0.1, 0.0}, {0.8, 0.2, 0.1}, 0.05, 0.5, 1.0,
                                 cfg.nln_samples, rng, -1.0, cfg.weight_eps);
        LemmaReport r;
        r.lemma_id = "nln_ratio_fitted";
        r.lhs = nr.ratio;
        r.rhs = 0;
        r.quad_error = nr.std_error;
        r.pass = std::isfinite(nr.ratio) && nr.ratio > 0;
        r.asserted = false;
        r.params = {{"t", 0.05}, {"rho", 0.5}, {"se", nr.std_error},
                    {"high_variance", nr.high_variance ? 1.0 : 0.0}};
        emit_lemma(csv, r);
    }

    csv.close();
    return csv.fails() == 0 ? 0 : 1;
}

int run_trace(const RunConfig& cfg) {
    CsvWriter csv(out_path(cfg, "trace.csv"),
                  {"trace", "j", "t", "x0", "x1", "x2", "v0", "v1", "v2",
                   "in_grazing_set", "log_weight"});
    RandomStream rng(cfg.seed, 0, 0);
    const ConvexDomain& dom = *cfg.domain;
    long graze_tripped = 0, total_steps = 0;
    for (long i = 0; i < cfg.samples; ++i) {
        CycleTrace tr = sample_cycle(dom, cfg.wall, cfg.t, cfg.x0, cfg.v0, cfg.k, rng,
                                     cfg.lambda, cfg.exp_mid);
        if (tr.grazing_tripped) ++graze_tripped;
        for (const CycleStep& s : tr.steps) {
            Vec3 n = outward_normal(dom, s.x);
            csv.row({std::to_string(i), std::to_string(s.j), format_double(s.t),
                     format_double(s.x.x), format_double(s.x.y), format_double(s.x.z),
                     format_double(s.v.x), format_double(s.v.y), format_double(s.v.z),
                     grazing_classify(s.v, n, cfg.delta) ? "1" : "0",
                     format_double(s.log_weight)});
            ++total_steps;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "traces=%ld steps=%ld grazing_tripped=%ld", cfg.samples,
                  total_steps, graze_tripped);
    csv.comment(buf);
    std::vector<SurvivalPoint> curve =
        survival_curve(dom, cfg.wall, cfg.t, cfg.x0, cfg.v0, cfg.k, cfg.samples, rng);
    for (int k = 1; k <= cfg.k; ++k) {
        std::snprintf(buf, sizeof buf, "survival k=%d p=%s se=%s", k,
                      format_double(curve[k - 1].estimate).c_str(),
                      format_double(curve[k - 1].std_error).c_str());
        csv.comment(buf);
    }
    csv.note_result(true);  // trace emission has no asserted checks
    csv.close();
    return 0;
}

int run_simulate(const RunConfig& cfg) {
    const ConvexDomain& dom = *cfg.domain;
    RandomStream init_rng(cfg.seed, 0, 0);
    double volume = estimate_volume(dom, 200000, init_rng);

    // Deterministic partition across workers; each worker owns a stream.
    int workers = std::max(1, cfg.threads);
    std::vector<ParticleEnsemble> parts(workers);
    {
        long per = cfg.n_particles / workers, extra = cfg.n_particles % workers;
        for (int w = 0; w < workers; ++w) {
            RandomStream r(cfg.seed, static_cast<std::uint64_t>(w), 1);
            parts[w] = init_ensemble(dom, static_cast<std::size_t>(per + (w < extra ? 1 : 0)),
                                     cfg.T_init, r);
        }
    }
    std::vector<WallTally> tallies(workers);

    std::unique_ptr<CsvWriter> moments_csv;
    if (cfg.write_moments)
        moments_csv = std::make_unique<CsvWriter>(
            out_path(cfg, "moments.csv"),
            std::vector<std::string>{"time", "count", "density", "ux", "uy", "uz",
                                     "temperature"});
    auto snapshot = [&](double tm) {
        if (!moments_csv) return;
        ParticleEnsemble all;
        for (const auto& p : parts) {
            all.pos.insert(all.pos.end(), p.pos.begin(), p.pos.end());
            all.vel.insert(all.vel.end(), p.vel.begin(), p.vel.end());
            all.weight.insert(all.weight.end(), p.weight.begin(), p.weight.end());
        }
        Moments m = compute_moments(all, volume);
        moments_csv->row({format_double(tm), format_double(m.count),
                          format_double(m.density), format_double(m.bulk_velocity.x),
                          format_double(m.bulk_velocity.y), format_double(m.bulk_velocity.z),
                          format_double(m.temperature)});
    };

    double w_before = 0;
    for (const auto& p : parts) w_before += p.total_weight();

    auto run_workers = [&](const std::function<void(int)>& job) {
        if (workers == 1) {
            job(0);
            return;
        }
        std::vector<std::thread> ts;
        for (int w = 0; w < workers; ++w) ts.emplace_back(job, w);
        for (auto& t : ts) t.join();
    };

    // One persistent stream per worker; its position advances with the
    // particle history, so output is identical for fixed (seed, threads).
    std::vector<RandomStream> streams;
    for (int w = 0; w < workers; ++w)
        streams.emplace_back(cfg.seed, static_cast<std::uint64_t>(w), 2);

    if (cfg.horizon > 0) {
        snapshot(0.0);
        for (int s = 1; s <= cfg.n_snapshots; ++s) {
            double tm = cfg.horizon * s / cfg.n_snapshots;
            run_workers([&](int w) {
                advance_to_time(dom, cfg.wall, parts[w], tm, &tallies[w], streams[w]);
            });
            snapshot(tm);
        }
    } else {
        snapshot(0.0);
        run_workers([&](int w) {
            advance_bounces(dom, cfg.wall, parts[w], cfg.n_bounces, &tallies[w], streams[w]);
        });
        // In bounce mode the time column of the final row holds the bounce count.
        snapshot(static_cast<double>(cfg.n_bounces));
    }

    double w_after = 0;
    std::size_t n_after = 0;
    for (const auto& p : parts) {
        w_after += p.total_weight();
        n_after += p.size();
    }
    bool mass_ok = n_after == static_cast<std::size_t>(cfg.n_particles) &&
                   w_after == w_before;
    long fails = mass_ok ? 0 : 1;
    if (moments_csv) {
        moments_csv->note_result(mass_ok);
        moments_csv->comment(std::string("mass_conserved=") + (mass_ok ? "1" : "0"));
        moments_csv->close();
    }

    WallTally merged;
    for (const auto& t : tallies) {
        for (int p = 0; p < 2; ++p) {
            merged.patch[p].incident += t.patch[p].incident;
            merged.patch[p].emitted += t.patch[p].emitted;
            merged.patch[p].energy_in += t.patch[p].energy_in;
            merged.patch[p].energy_out += t.patch[p].energy_out;
            merged.patch[p].energy_sq_in += t.patch[p].energy_sq_in;
            merged.patch[p].energy_sq_out += t.patch[p].energy_sq_out;
            merged.patch[p].momentum_normal += t.patch[p].momentum_normal;
            merged.patch[p].events += t.patch[p].events;
        }
        merged.window = std::max(merged.window, t.window);
        merged.stuck_events += t.stuck_events;
    }
    if (cfg.write_walltally) {
        CsvWriter tally_csv(out_path(cfg, "walltally.csv"),
                            {"patch", "events", "incident", "emitted", "particle_flux",
                             "energy_in", "energy_out", "energy_flux", "energy_flux_se",
                             "pressure"});
        NullFluxReport nf = null_flux_tally(merged);
        for (int p = 0; p < 2; ++p) {
            if (merged.patch[p].events == 0 && p == 1) continue;
            bool balanced = merged.patch[p].incident == merged.patch[p].emitted;
            tally_csv.row({std::to_string(p), std::to_string(merged.patch[p].events),
                           format_double(merged.patch[p].incident),
                           format_double(merged.patch[p].emitted),
                           format_double(nf.patch[p].particle_flux),
                           format_double(merged.patch[p].energy_in),
                           format_double(merged.patch[p].energy_out),
                           format_double(nf.patch[p].energy_flux),
                           format_double(nf.patch[p].energy_flux_se),
                           format_double(nf.patch[p].pressure)});
            tally_csv.note_result(balanced);
        }
        char buf[80];
        std::snprintf(buf, sizeof buf, "stuck_events=%ld", merged.stuck_events);
        tally_csv.comment(buf);
        tally_csv.close();
        fails += tally_csv.fails();
    }

    if (cfg.write_final_state) {
        ParticleEnsemble all;
        for (const auto& p : parts) {
            all.pos.insert(all.pos.end(), p.pos.begin(), p.pos.end());
            all.vel.insert(all.vel.end(), p.vel.begin(), p.vel.end());
            all.weight.insert(all.weight.end(), p.weight.begin(), p.weight.end());
        }
        dump_ensemble(out_path(cfg, "final_state.bin"), all);
    }

    return fails == 0 ? 0 : 1;
}

int run(const RunConfig& cfg) {
    switch (cfg.cmd) {
        case Subcommand::VerifyKernel: return run_verify_kernel(cfg);
        case Subcommand::VerifyLemmas: return run_verify_lemmas(cfg);
        case Subcommand::Trace: return run_trace(cfg);
        case Subcommand::Simulate: return run_simulate(cfg);
    }
    return 2;
}

}  // namespace clks

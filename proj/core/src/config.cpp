#include "clks/config.hpp"

#include <set>

#include "json.hpp"

namespace clks {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double need_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    if (!obj[key].is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
    return obj[key].get<double>();
}

double opt_number(const json& obj, const std::string& key, double def) {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number()) throw ConfigError("'" + key + "' must be a number");
    return obj[key].get<double>();
}

int parse_axis(const json& j, const std::string& where) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "x") return 0;
        if (s == "y") return 1;
        if (s == "z") return 2;
        throw ConfigError(where + ": axis must be x, y or z");
    }
    if (j.is_number_integer()) {
        int a = j.get<int>();
        if (a < 0 || a > 2) throw ConfigError(where + ": axis must be 0, 1 or 2");
        return a;
    }
    throw ConfigError(where + ": bad axis");
}

std::shared_ptr<const ConvexDomain> parse_domain(const json& d) {
    reject_unknown(d, {"type", "params"}, "domain");
    if (!d.contains("type") || !d["type"].is_string())
        throw ConfigError("domain: missing type");
    std::string type = d["type"].get<std::string>();
    json params = d.value("params", json::object());
    if (type == "ball") {
        reject_unknown(params, {"radius", "scale"}, "domain.params");
        return std::make_shared<BallDomain>(opt_number(params, "radius", 1.0),
                                            opt_number(params, "scale", 1.0));
    }
    if (type == "ellipsoid") {
        reject_unknown(params, {"a", "b", "c"}, "domain.params");
        return std::make_shared<EllipsoidDomain>(Vec3{need_number(params, "a", "ellipsoid"),
                                                      need_number(params, "b", "ellipsoid"),
                                                      need_number(params, "c", "ellipsoid")});
    }
    if (type == "polynomial") {
        reject_unknown(params, {"terms", "convexity_lower_bound", "bounding_radius"},
                       "domain.params");
        if (!params.contains("terms") || !params["terms"].is_array())
            throw ConfigError("domain.params: polynomial needs a 'terms' array");
        std::vector<PolynomialDomain::Term> terms;
        for (const auto& t : params["terms"]) {
            reject_unknown(t, {"coeff", "px", "py", "pz"}, "polynomial term");
            PolynomialDomain::Term term;
            term.coeff = need_number(t, "coeff", "polynomial term");
            term.px = static_cast<int>(opt_number(t, "px", 0));
            term.py = static_cast<int>(opt_number(t, "py", 0));
            term.pz = static_cast<int>(opt_number(t, "pz", 0));
            terms.push_back(term);
        }
        return std::make_shared<PolynomialDomain>(terms,
                                                  opt_number(params, "convexity_lower_bound", 0),
                                                  opt_number(params, "bounding_radius", 0));
    }
    throw ConfigError("domain: unknown type '" + type + "'");
}

WallModel parse_wall(const json& w, double extent) {
    reject_unknown(w, {"T_w", "r_perp", "r_par"}, "wall");
    double r_perp = need_number(w, "r_perp", "wall");
    double r_par = need_number(w, "r_par", "wall");
    if (!w.contains("T_w")) throw ConfigError("wall: missing T_w");
    const json& tw = w["T_w"];
    TemperatureField field;
    if (tw.is_number()) {
        field = TemperatureField::constant(tw.get<double>());
    } else if (tw.is_object()) {
        reject_unknown(tw, {"type", "params"}, "wall.T_w");
        std::string type = tw.value("type", "");
        json params = tw.value("params", json::object());
        if (type == "patchwise") {
            reject_unknown(params, {"axis", "T_plus", "T_minus"}, "wall.T_w.params");
            field = TemperatureField::patchwise(parse_axis(params.value("axis", json("z")), "T_w"),
                                                need_number(params, "T_plus", "T_w"),
                                                need_number(params, "T_minus", "T_w"));
        } else if (type == "smooth") {
            reject_unknown(params, {"axis", "base", "amp"}, "wall.T_w.params");
            field = TemperatureField::smooth(parse_axis(params.value("axis", json("z")), "T_w"),
                                             need_number(params, "base", "T_w"),
                                             need_number(params, "amp", "T_w"), extent);
        } else {
            throw ConfigError("wall.T_w: unknown type '" + type + "'");
        }
    } else {
        throw ConfigError("wall.T_w: expected a number or an object");
    }
    field.extent = extent;
    try {
        return WallModel::make(field, r_perp, r_par);
    } catch (const WallError& e) {
        throw ConfigError(std::string("wall: ") + e.what());
    }
}

}  // namespace

std::shared_ptr<const ConvexDomain> parse_domain_json(const std::string& text) {
    json j = json::parse(text);
    return parse_domain(j);
}

RunConfig parse_config(const std::string& text, Subcommand cmd) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    std::set<std::string> allowed = {"domain", "wall", "seed", "threads", "out_dir"};
    switch (cmd) {
        case Subcommand::VerifyKernel:
            allowed.insert({"n_norm_configs", "n_recip_pairs", "n_sampler"});
            break;
        case Subcommand::VerifyLemmas:
            allowed.insert({"lemma_grid", "nln_samples", "weight_eps"});
            break;
        case Subcommand::Trace:
            allowed.insert({"samples", "k", "delta", "t", "x0", "v0", "lambda", "t_star",
                            "c", "exp_last", "exp_mid"});
            break;
        case Subcommand::Simulate:
            allowed.insert({"n_particles", "n_bounces", "horizon", "T_init", "n_snapshots",
                            "with_collisions", "observables"});
            break;
    }
    reject_unknown(j, allowed, "config");

    RunConfig cfg;
    cfg.cmd = cmd;
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            throw ConfigError("config: seed must be an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    cfg.threads = static_cast<int>(opt_number(j, "threads", 1));
    if (cfg.threads < 1) throw ConfigError("config: threads >= 1");
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();

    cfg.domain = j.contains("domain") ? parse_domain(j["domain"])
                                      : std::make_shared<BallDomain>(1.0);
    if (j.contains("wall"))
        cfg.wall = parse_wall(j["wall"], cfg.domain->bounding_radius);

    auto vec3 = [&](const char* key, Vec3 def) {
        if (!j.contains(key)) return def;
        const json& a = j[key];
        if (!a.is_array() || a.size() != 3) throw ConfigError(std::string(key) + ": need [x,y,z]");
        return Vec3{a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
    };

    switch (cmd) {
        case Subcommand::VerifyKernel:
            cfg.n_norm_configs = static_cast<int>(opt_number(j, "n_norm_configs", 20));
            cfg.n_recip_pairs = static_cast<long>(opt_number(j, "n_recip_pairs", 1000));
            cfg.n_sampler = static_cast<long>(opt_number(j, "n_sampler", 200000));
            break;
        case Subcommand::VerifyLemmas:
            cfg.lemma_grid = static_cast<int>(opt_number(j, "lemma_grid", 3));
            cfg.nln_samples = static_cast<long>(opt_number(j, "nln_samples", 20000));
            cfg.weight_eps = opt_number(j, "weight_eps", 0.0);
            break;
        case Subcommand::Trace:
            cfg.samples = static_cast<long>(opt_number(j, "samples", 1000));
            cfg.k = static_cast<int>(opt_number(j, "k", 6));
            cfg.delta = opt_number(j, "delta", 0.1);
            cfg.t = opt_number(j, "t", 1.0);
            cfg.x0 = vec3("x0", cfg.x0);
            cfg.v0 = vec3("v0", cfg.v0);
            cfg.lambda = opt_number(j, "lambda", 1.0);
            cfg.t_star = opt_number(j, "t_star", 1e-2);
            cfg.c_exponent = opt_number(j, "c", 1.0 / 15.0);
            cfg.exp_last = opt_number(j, "exp_last", 2.0);
            cfg.exp_mid = opt_number(j, "exp_mid", 4.0);
            break;
        case Subcommand::Simulate: {
            cfg.n_particles = static_cast<long>(opt_number(j, "n_particles", 10000));
            cfg.n_bounces = static_cast<int>(opt_number(j, "n_bounces", 0));
            cfg.horizon = opt_number(j, "horizon", 0);
            if ((cfg.n_bounces > 0) == (cfg.horizon > 0))
                throw ConfigError("simulate: set exactly one of n_bounces / horizon");
            cfg.T_init = opt_number(j, "T_init", 1.0);
            cfg.n_snapshots = static_cast<int>(opt_number(j, "n_snapshots", 10));
            if (j.contains("with_collisions")) {
                if (!j["with_collisions"].is_boolean())
                    throw ConfigError("simulate: with_collisions must be a boolean");
                cfg.with_collisions = j["with_collisions"].get<bool>();
                if (cfg.with_collisions)
                    throw ConfigError(
                        "simulate: with_collisions is reserved; only the free-molecular "
                        "mode is supported");
            }
            if (j.contains("observables")) {
                if (!j["observables"].is_array())
                    throw ConfigError("simulate: observables must be an array");
                cfg.write_moments = cfg.write_walltally = cfg.write_final_state = false;
                for (const auto& o : j["observables"]) {
                    std::string s = o.get<std::string>();
                    if (s == "moments")
                        cfg.write_moments = true;
                    else if (s == "walltally")
                        cfg.write_walltally = true;
                    else if (s == "final_state")
                        cfg.write_final_state = true;
                    else
                        throw ConfigError("simulate: unknown observable '" + s + "'");
                }
            }
            break;
        }
    }
    return cfg;
}

}  // namespace clks

// Command-line front end: parse an INI config, run one subcommand, emit
// CSV/JSON artifacts. Exit codes: 0 success, 1 error, 2 inconclusive
// asymptotic verdict.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nlcsbp/boundary.hpp"
#include "nlcsbp/config.hpp"
#include "nlcsbp/errors.hpp"
#include "nlcsbp/hitting.hpp"
#include "nlcsbp/limitlaw.hpp"
#include "nlcsbp/report.hpp"
#include "nlcsbp/simulate.hpp"

namespace {

using namespace nlcsbp;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::Fails: return "Fails";
        default: return "Inconclusive";
    }
}

Json verdict_json(const HypothesisVerdict& hv, const char* name) {
    Json j;
    j["hypothesis"] = name;
    j["verdict"] = verdict_name(hv.verdict);
    j["reason"] = hv.reason;
    Json diags = Json::array();
    for (const auto& d : hv.diagnostics) {
        Json dj;
        dj["name"] = d.name;
        dj["grid"] = d.grid;
        dj["values"] = d.values;
        diags.push_back(dj);
    }
    j["diagnostics"] = diags;
    return j;
}

PathConfig path_config(const RunConfig& cfg) {
    PathConfig pc;
    pc.dt = cfg.run.dt;
    pc.eps_jump = cfg.run.eps_jump;
    pc.horizon = cfg.run.horizon;
    pc.barrier_refine = cfg.run.barrier_refine;
    pc.seed = cfg.run.seed;
    pc.laplace_lambdas = cfg.run.lambdas;
    return pc;
}

Json summary_json(const McSummary& s) {
    Json j;
    j["n_reps"] = s.n_reps;
    j["x0"] = s.x0;
    j["mean"] = s.mean;
    j["variance"] = s.variance;
    j["std_error"] = s.std_error;
    j["variance_se"] = s.variance_se;
    j["richardson_shift"] = s.richardson_shift;
    j["horizon_exceeded"] = s.horizon_exceeded;
    Json lap = Json::array();
    for (const auto& lp : s.laplace)
        lap.push_back({{"lambda", lp.lambda}, {"estimate", lp.estimate}, {"se", lp.se}});
    j["laplace"] = lap;
    return j;
}

struct Emitter {
    std::string out_dir;
    std::string format;  // json | csv | both

    std::string path(const std::string& name) const {
        return out_dir.empty() ? name : out_dir + "/" + name;
    }
    void json(const Json& j, const std::string& name) const {
        if (format == "csv") return;
        write_file(path(name), j.dump(2) + "\n");
    }
    void csv(const CsvTable& t, const std::string& name) const {
        if (format == "json") return;
        write_file(path(name), t.to_string());
    }
};

int cmd_classify(const RunConfig& cfg, const Emitter& em) {
    auto mech = cfg.mechanism();
    auto rate = cfg.rate_function();
    Json j = base_report(cfg, "classify");
    const char* cls = mech.classify() == MechanismClass::Supercritical
                          ? "supercritical"
                          : (mech.classify() == MechanismClass::Critical
                                 ? "critical"
                                 : "subcritical");
    j["results"]["class"] = cls;
    int code = 0;
    try {
        auto v = entrance_test(mech, rate);
        j["results"]["is_entrance"] = v.is_entrance;
        j["results"]["integral_value"] =
            std::isfinite(v.integral_value) ? Json(v.integral_value) : Json("inf");
        j["results"]["criterion_used"] =
            v.criterion_used == EntranceVerdict::Criterion::FullIntegral
                ? "full_integral"
                : (v.criterion_used == EntranceVerdict::Criterion::SubcriticalShortcut
                       ? "subcritical_shortcut"
                       : "supercritical_rule");
        std::cout << "classify: " << cls
                  << (v.is_entrance ? ", entrance" : ", not an entrance") << "\n";
    } catch (const InconclusiveTail& e) {
        j["results"]["is_entrance"] = "inconclusive";
        j["results"]["reason"] = e.what();
        std::cout << "classify: " << cls << ", entrance test inconclusive\n";
        code = 2;
    }
    em.json(j, "classify.json");
    return code;
}

int cmd_scale(const RunConfig& cfg, const Emitter& em) {
    auto mech = cfg.mechanism();
    ScaleFunction::Options opts;
    opts.tol = cfg.run.tol;
    auto sf = ScaleFunction::build(mech, opts);
    auto xs = geometric_grid(cfg.run.x_lo, cfg.run.x_hi, cfg.run.n_x);
    auto qs = geometric_grid(0.1, 10.0, 16);
    auto val = sf.validate(qs, xs);

    CsvTable t;
    t.header = {"x", "W", "Delta", "lower_bound", "upper_bound"};
    double winf = sf.limit();
    for (double x : xs) {
        double w = sf(x);
        double delta = std::isfinite(winf) ? winf - w
                                           : std::numeric_limits<double>::quiet_NaN();
        double envelope = x * mech.psi(1.0 / x);
        t.add_row({x, w, delta, val.c1 / envelope, val.c2 / envelope});
    }
    em.csv(t, "scale.csv");

    Json j = base_report(cfg, "scale");
    const char* method_name =
        sf.method() == ScaleFunction::Method::PureDrift       ? "pure_drift"
        : sf.method() == ScaleFunction::Method::BrownianDrift ? "brownian_drift"
        : sf.method() == ScaleFunction::Method::Stable        ? "stable"
                                                              : "numeric_inversion";
    j["results"]["method"] = method_name;
    j["results"]["w_limit"] = std::isfinite(winf) ? Json(winf) : Json("inf");
    j["results"]["max_laplace_residual"] = val.max_laplace_residual;
    j["results"]["monotonicity_violations"] = val.monotonicity_violations;
    j["results"]["c1"] = val.c1;
    j["results"]["c2"] = val.c2;
    j["results"]["ratio_finite"] = val.ratio_finite;
    j["results"]["tol"] = cfg.run.tol;
    j["results"]["x_grid"] = {{"lo", cfg.run.x_lo}, {"hi", cfg.run.x_hi},
                              {"points", cfg.run.n_x}};
    em.json(j, "scale.json");
    std::cout << "scale: residual " << format_sig(val.max_laplace_residual)
              << ", sandwich [" << format_sig(val.c1) << ", " << format_sig(val.c2)
              << "]\n";
    return 0;
}

int cmd_hitting(const RunConfig& cfg, const Emitter& em) {
    auto mech = cfg.mechanism();
    auto rate = cfg.rate_function();
    auto sf = build_scale(mech);
    double b = cfg.run.b, x = cfg.run.x;
    Json j = base_report(cfg, "hitting");
    int code = 0;
    try {
        auto mom = hit_moments(sf, rate, b, x, std::isinf(x));
        j["results"]["mean"] = mom.mean;
        j["results"]["second_moment"] = mom.second_moment;
        j["results"]["variance"] = mom.variance;
        if (mom.variance_cross_check >= 0.0)
            j["results"]["variance_cross_check"] = mom.variance_cross_check;
        auto table = WnTable::build(sf, Omega::reciprocal(rate));
        CsvTable t;
        t.header = {"lambda", "laplace"};
        Json lap = Json::array();
        for (double lam : cfg.run.lambdas) {
            double le = laplace_hit(table, b, lam, x);
            t.add_row({lam, le});
            lap.push_back({{"lambda", lam}, {"value", le}});
        }
        j["results"]["laplace"] = lap;
        try {
            auto am = asymptotic_mean(mech, rate, b);
            j["results"]["asymptotic_mean"] = am.value;
            j["results"]["asymptotic_regime"] = am.description;
        } catch (const NoRegime&) {
        }
        em.csv(t, "hitting.csv");
        std::cout << "hitting: m(" << format_sig(b) << ") from x="
                  << format_sig(x) << " is " << format_sig(mom.mean) << "\n";
    } catch (const SeriesDiverges& e) {
        j["error"] = {{"type", "SeriesDiverges"}, {"message", e.what()}};
        std::cout << "hitting: series diverges\n";
        code = 1;
    }
    em.json(j, "hitting.json");
    return code;
}

int cmd_limitlaw(const RunConfig& cfg, const Emitter& em) {
    Json j = base_report(cfg, "limitlaw");
    CsvTable t;
    t.header = {"s", "laplace"};
    Json lap = Json::array();
    if (cfg.run.law == "stable") {
        StableThetaLaw law(cfg.run.law_alpha, cfg.run.law_theta);
        for (double s : cfg.run.s_list) {
            double v = law.laplace(s);
            t.add_row({s, v});
            lap.push_back({{"s", s}, {"value", v}});
        }
        Json coeffs = Json::array();
        for (int n = 1; n <= 10; ++n) coeffs.push_back(law.coeff_a(n));
        j["results"]["coefficients_a"] = coeffs;
    } else if (cfg.run.law == "exp_rate") {
        ExpRateLimitLaw law(cfg.mechanism(), cfg.run.law_theta2);
        for (double s : cfg.run.s_list) {
            double v = law.laplace(s);
            t.add_row({s, v});
            lap.push_back({{"s", s}, {"value", v}});
        }
    } else {
        throw ValidationError("unknown limit law: " + cfg.run.law);
    }
    j["results"]["laplace"] = lap;
    em.csv(t, "limitlaw.csv");
    em.json(j, "limitlaw.json");
    std::cout << "limitlaw: " << cfg.run.law << " evaluated at "
              << cfg.run.s_list.size() << " points\n";
    return 0;
}

int cmd_simulate(const RunConfig& cfg, const Emitter& em) {
    auto mech = cfg.mechanism();
    auto rate = cfg.rate_function();
    PathConfig pc = path_config(cfg);
    Json j = base_report(cfg, "simulate");
    CsvTable t;
    t.header = {"replica", "T_b"};
    if (std::isfinite(cfg.run.x)) {
        auto s = sample_hit(mech, rate, cfg.run.x, cfg.run.b, cfg.run.reps, pc);
        for (std::size_t i = 0; i < s.samples.size(); ++i)
            t.add_row({static_cast<double>(i), s.samples[i]});
        j["results"]["summary"] = summary_json(s);
        std::cout << "simulate: mean T_b " << format_sig(s.mean) << " (se "
                  << format_sig(s.std_error) << ")\n";
    } else {
        auto rep = from_infinity_ladder(mech, rate, cfg.run.b, cfg.run.ladder,
                                        cfg.run.reps, pc);
        Json rungs = Json::array();
        for (const auto& s : rep.rungs) rungs.push_back(summary_json(s));
        j["results"]["ladder"] = rungs;
        j["results"]["converged"] = rep.converged;
        if (rep.converged) {
            j["results"]["surrogate_mean"] = rep.surrogate_mean;
            j["results"]["converged_index"] = rep.converged_index;
        }
        if (!rep.rungs.empty()) {
            const auto& s = rep.rungs.back();
            for (std::size_t i = 0; i < s.samples.size(); ++i)
                t.add_row({static_cast<double>(i), s.samples[i]});
        }
        std::cout << "simulate: ladder "
                  << (rep.converged ? "converged" : "not converged") << "\n";
    }
    em.csv(t, "simulate.csv");
    em.json(j, "simulate.json");
    return 0;
}

int cmd_speed(const RunConfig& cfg, const Emitter& em) {
    auto mech = cfg.mechanism();
    auto rate = cfg.rate_function();
    auto sf = build_scale(mech);
    PathConfig pc = path_config(cfg);
    double x0 = std::isfinite(cfg.run.x) ? cfg.run.x : 1000.0 * cfg.run.b;
    auto r = speed_report(mech, rate, sf, x0, cfg.run.b, cfg.run.n_paths, pc,
                          cfg.run.t_lo, cfg.run.t_hi, cfg.run.n_t);
    CsvTable t;
    t.header = {"t", "median_ratio", "q05", "q95"};
    for (std::size_t i = 0; i < r.t_grid.size(); ++i)
        t.add_row({r.t_grid[i], r.median_ratio[i], r.q05_ratio[i], r.q95_ratio[i]});
    em.csv(t, "speed.csv");
    Json j = base_report(cfg, "speed");
    j["results"]["critical"] = r.critical;
    j["results"]["note"] = r.note;
    j["results"]["t_grid"] = r.t_grid;
    j["results"]["target"] = r.target;
    j["results"]["median_ratio"] = r.median_ratio;
    j["results"]["q05_ratio"] = r.q05_ratio;
    j["results"]["q95_ratio"] = r.q95_ratio;
    j["results"]["median_inf_over_x"] = r.median_inf_over_x;
    j["results"]["sup_ratio_q95"] = r.sup_ratio_q95;
    j["results"]["frac_inf_close"] = r.frac_inf_close;
    j["results"]["truncated_paths"] = r.truncated_paths;
    em.json(j, "speed.json");
    std::cout << "speed: " << (r.critical ? "critical" : "subcritical")
              << " ratios over [" << format_sig(cfg.run.t_lo) << ", "
              << format_sig(cfg.run.t_hi) << "]\n";
    return 0;
}

int cmd_hypotheses(const RunConfig& cfg, const Emitter& em) {
    auto mech = cfg.mechanism();
    auto rate = cfg.rate_function();
    PhiFunction pf(rate, mech.gamma());
    Json j = base_report(cfg, "hypotheses");
    Json verdicts = Json::array();
    bool inconclusive = false;
    auto add = [&](const HypothesisVerdict& hv, const char* name) {
        verdicts.push_back(verdict_json(hv, name));
        if (hv.verdict == Verdict::Inconclusive) inconclusive = true;
        std::cout << name << ": " << verdict_name(hv.verdict) << "\n";
    };
    add(check_hypothesis(pf, Hypothesis::H1), "H1");
    add(check_hypothesis(pf, Hypothesis::H2), "H2");
    add(check_H3(rate), "H3");
    if (cfg.run.h4 != "none") {
        H4Spec spec;
        spec.p_form = cfg.run.h4 == "cramer" ? H4Spec::P::CramerLogLog
                                             : H4Spec::P::InvSqrt;
        spec.nu = cfg.run.h4_nu;
        spec.c = cfg.run.h4_c;
        spec.use_alt_iii = cfg.run.h4_alt;
        spec.vbar_C = cfg.run.vbar_c;
        spec.vbar_w = cfg.run.vbar_w;
        auto sf = build_scale(mech);
        add(check_H4(pf, sf, spec), "H4");
    }
    j["results"]["verdicts"] = verdicts;
    em.json(j, "hypotheses.json");
    return inconclusive ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerics and simulation for time-changed spectrally "
                 "positive branching processes"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format = "both";
    const char* env_out = std::getenv("NLCSBP_OUT_DIR");
    if (env_out) out_dir = env_out;

    const std::vector<std::string> names = {"classify", "scale",    "hitting",
                                            "limitlaw", "simulate", "speed",
                                            "hypotheses"};
    for (const auto& n : names) {
        auto* sub = app.add_subcommand(n);
        sub->add_option("--config", config_path, "INI config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", format, "artifact format: csv|json|both");
    }
    CLI11_PARSE(app, argc, argv);
    std::string sub = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = parse_config(read_file(config_path));
        validate_for(cfg, sub);
        cfg.run.subcommand = sub;
        Emitter em{out_dir, format};
        if (sub == "classify") return cmd_classify(cfg, em);
        if (sub == "scale") return cmd_scale(cfg, em);
        if (sub == "hitting") return cmd_hitting(cfg, em);
        if (sub == "limitlaw") return cmd_limitlaw(cfg, em);
        if (sub == "simulate") return cmd_simulate(cfg, em);
        if (sub == "speed") return cmd_speed(cfg, em);
        if (sub == "hypotheses") return cmd_hypotheses(cfg, em);
        std::cerr << "unknown subcommand\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

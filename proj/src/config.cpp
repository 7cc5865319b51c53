#include "nlcsbp/config.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "nlcsbp/errors.hpp"

namespace nlcsbp {
namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line) {
    if (v == "inf" || v == "+inf") return kInf;
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) parse_fail(line, "trailing text in number '" + v + "'");
        return d;
    } catch (const std::invalid_argument&) {
        parse_fail(line, "not a number: '" + v + "'");
    } catch (const std::out_of_range&) {
        parse_fail(line, "number out of range: '" + v + "'");
    }
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, line));
    }
    return out;
}

std::uint64_t parse_u64(const std::string& v, int line) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        parse_fail(line, "not a nonnegative integer: '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    parse_fail(line, "not a boolean: '" + v + "'");
}

std::string fmt(double v) {
    if (v == kInf) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt(v[i]);
    }
    return out;
}

}  // namespace

BranchingMechanism RunConfig::mechanism() const {
    const auto& m = mech;
    if (m.family == "linear") return BranchingMechanism(m.gamma, m.sigma2);
    if (m.family == "stable") return BranchingMechanism::stable(m.c, m.alpha);
    if (m.family == "stable_tail")
        return BranchingMechanism(m.gamma, m.sigma2,
                                  LevyMeasureSpec::stable_tail(m.alpha, m.c_pi));
    if (m.family == "compound_poisson_exp")
        return BranchingMechanism(
            m.gamma, m.sigma2,
            LevyMeasureSpec::compound_poisson_exp(m.rate, m.mean_jump));
    if (m.family == "tempered_stable")
        return BranchingMechanism(
            m.gamma, m.sigma2,
            LevyMeasureSpec::tempered_stable(m.alpha, m.c_pi, m.beta));
    throw ValidationError("unknown mechanism family: " + m.family);
}

RateFunction RunConfig::rate_function() const {
    const auto& r = rate;
    if (r.family == "power") return RateFunction::power(r.theta, r.k);
    if (r.family == "power_log") return RateFunction::power_log(r.theta, r.p);
    if (r.family == "exp_rate")
        return RateFunction::exp_rate(r.theta2,
                                      RateFunction::power(r.g_theta, r.g_k));
    if (r.family == "oscillating_valley")
        return RateFunction::oscillating_valley(r.theta, r.v, r.x0);
    if (r.family == "tabulated")
        return RateFunction::tabulated(r.grid, r.values, r.tail_exponent);
    throw ValidationError("unknown rate family: " + r.family);
}

std::string RunConfig::echo() const {
    std::string o;
    o += "[mechanism]\n";
    o += "family = " + mech.family + "\n";
    o += "gamma = " + fmt(mech.gamma) + "\n";
    o += "sigma2 = " + fmt(mech.sigma2) + "\n";
    o += "c = " + fmt(mech.c) + "\n";
    o += "alpha = " + fmt(mech.alpha) + "\n";
    o += "c_pi = " + fmt(mech.c_pi) + "\n";
    o += "rate = " + fmt(mech.rate) + "\n";
    o += "mean_jump = " + fmt(mech.mean_jump) + "\n";
    o += "beta = " + fmt(mech.beta) + "\n";
    o += "\n[rate]\n";
    o += "family = " + rate.family + "\n";
    o += "theta = " + fmt(rate.theta) + "\n";
    o += "k = " + fmt(rate.k) + "\n";
    o += "p = " + fmt(rate.p) + "\n";
    o += "theta2 = " + fmt(rate.theta2) + "\n";
    o += "g_theta = " + fmt(rate.g_theta) + "\n";
    o += "g_k = " + fmt(rate.g_k) + "\n";
    o += "v = " + fmt(rate.v) + "\n";
    o += "x0 = " + fmt(rate.x0) + "\n";
    if (!rate.grid.empty()) o += "grid = " + fmt(rate.grid) + "\n";
    if (!rate.values.empty()) o += "values = " + fmt(rate.values) + "\n";
    o += "tail_exponent = " + fmt(rate.tail_exponent) + "\n";
    o += "\n[run]\n";
    if (!run.subcommand.empty()) o += "subcommand = " + run.subcommand + "\n";
    o += "b = " + fmt(run.b) + "\n";
    o += "x = " + fmt(run.x) + "\n";
    o += "q = " + fmt(run.q) + "\n";
    o += "a = " + fmt(run.a) + "\n";
    o += "x_lo = " + fmt(run.x_lo) + "\n";
    o += "x_hi = " + fmt(run.x_hi) + "\n";
    o += "n_x = " + std::to_string(run.n_x) + "\n";
    o += "lambdas = " + fmt(run.lambdas) + "\n";
    o += "ladder = " + fmt(run.ladder) + "\n";
    o += "reps = " + std::to_string(run.reps) + "\n";
    o += "n_paths = " + std::to_string(run.n_paths) + "\n";
    o += "t_lo = " + fmt(run.t_lo) + "\n";
    o += "t_hi = " + fmt(run.t_hi) + "\n";
    o += "n_t = " + std::to_string(run.n_t) + "\n";
    o += "dt = " + fmt(run.dt) + "\n";
    o += "eps_jump = " + fmt(run.eps_jump) + "\n";
    o += "horizon = " + fmt(run.horizon) + "\n";
    o += "barrier_refine = " + std::to_string(run.barrier_refine) + "\n";
    o += "seed = " + std::to_string(run.seed) + "\n";
    o += "tol = " + fmt(run.tol) + "\n";
    o += "law = " + run.law + "\n";
    o += "law_alpha = " + fmt(run.law_alpha) + "\n";
    o += "law_theta = " + fmt(run.law_theta) + "\n";
    o += "law_theta2 = " + fmt(run.law_theta2) + "\n";
    o += "s_list = " + fmt(run.s_list) + "\n";
    o += "h4 = " + run.h4 + "\n";
    o += "h4_nu = " + fmt(run.h4_nu) + "\n";
    o += "h4_c = " + fmt(run.h4_c) + "\n";
    o += std::string("h4_alt = ") + (run.h4_alt ? "true" : "false") + "\n";
    o += "vbar_w = " + fmt(run.vbar_w) + "\n";
    o += "vbar_c = " + fmt(run.vbar_c) + "\n";
    return o;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(line_no, "unterminated section header");
            section = line.substr(1, line.size() - 2);
            if (section != "mechanism" && section != "rate" && section != "run")
                parse_fail(line_no, "unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(line_no, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (section.empty()) parse_fail(line_no, "key outside any section");
        if (key.empty() || val.empty()) parse_fail(line_no, "empty key or value");

        auto unknown = [&]() {
            parse_fail(line_no, "unknown field '" + key + "' in [" + section + "]");
        };
        if (section == "mechanism") {
            auto& m = cfg.mech;
            if (key == "family") m.family = val;
            else if (key == "gamma") m.gamma = parse_double(val, line_no);
            else if (key == "sigma2") m.sigma2 = parse_double(val, line_no);
            else if (key == "c") m.c = parse_double(val, line_no);
            else if (key == "alpha") m.alpha = parse_double(val, line_no);
            else if (key == "c_pi") m.c_pi = parse_double(val, line_no);
            else if (key == "rate") m.rate = parse_double(val, line_no);
            else if (key == "mean_jump") m.mean_jump = parse_double(val, line_no);
            else if (key == "beta") m.beta = parse_double(val, line_no);
            else unknown();
        } else if (section == "rate") {
            auto& r = cfg.rate;
            if (key == "family") r.family = val;
            else if (key == "theta") r.theta = parse_double(val, line_no);
            else if (key == "k") r.k = parse_double(val, line_no);
            else if (key == "p") r.p = parse_double(val, line_no);
            else if (key == "theta2") r.theta2 = parse_double(val, line_no);
            else if (key == "g_theta") r.g_theta = parse_double(val, line_no);
            else if (key == "g_k") r.g_k = parse_double(val, line_no);
            else if (key == "v") r.v = parse_double(val, line_no);
            else if (key == "x0") r.x0 = parse_double(val, line_no);
            else if (key == "grid") r.grid = parse_list(val, line_no);
            else if (key == "values") r.values = parse_list(val, line_no);
            else if (key == "tail_exponent") r.tail_exponent = parse_double(val, line_no);
            else unknown();
        } else {
            auto& r = cfg.run;
            if (key == "subcommand") r.subcommand = val;
            else if (key == "b") r.b = parse_double(val, line_no);
            else if (key == "x") r.x = parse_double(val, line_no);
            else if (key == "q") r.q = parse_double(val, line_no);
            else if (key == "a") r.a = parse_double(val, line_no);
            else if (key == "x_lo") r.x_lo = parse_double(val, line_no);
            else if (key == "x_hi") r.x_hi = parse_double(val, line_no);
            else if (key == "n_x") r.n_x = parse_u64(val, line_no);
            else if (key == "lambdas") r.lambdas = parse_list(val, line_no);
            else if (key == "ladder") r.ladder = parse_list(val, line_no);
            else if (key == "reps") r.reps = parse_u64(val, line_no);
            else if (key == "n_paths") r.n_paths = parse_u64(val, line_no);
            else if (key == "t_lo") r.t_lo = parse_double(val, line_no);
            else if (key == "t_hi") r.t_hi = parse_double(val, line_no);
            else if (key == "n_t") r.n_t = parse_u64(val, line_no);
            else if (key == "dt") r.dt = parse_double(val, line_no);
            else if (key == "eps_jump") r.eps_jump = parse_double(val, line_no);
            else if (key == "horizon") r.horizon = parse_double(val, line_no);
            else if (key == "barrier_refine")
                r.barrier_refine = static_cast<int>(parse_u64(val, line_no));
            else if (key == "seed") r.seed = parse_u64(val, line_no);
            else if (key == "tol") r.tol = parse_double(val, line_no);
            else if (key == "law") r.law = val;
            else if (key == "law_alpha") r.law_alpha = parse_double(val, line_no);
            else if (key == "law_theta") r.law_theta = parse_double(val, line_no);
            else if (key == "law_theta2") r.law_theta2 = parse_double(val, line_no);
            else if (key == "s_list") r.s_list = parse_list(val, line_no);
            else if (key == "h4") r.h4 = val;
            else if (key == "h4_nu") r.h4_nu = parse_double(val, line_no);
            else if (key == "h4_c") r.h4_c = parse_double(val, line_no);
            else if (key == "h4_alt") r.h4_alt = parse_bool(val, line_no);
            else if (key == "vbar_w") r.vbar_w = parse_double(val, line_no);
            else if (key == "vbar_c") r.vbar_c = parse_double(val, line_no);
            else unknown();
        }
    }

    // Cheap semantic checks; family-specific constraints are enforced by
    // the factories when the objects are built.
    if (cfg.mech.sigma2 < 0.0) throw ValidationError("sigma2 must be >= 0");
    if (cfg.rate.family != "exp_rate" && !(cfg.rate.theta > 0.0) &&
        cfg.rate.family != "tabulated")
        throw ValidationError("rate theta must be > 0");
    if (!(cfg.run.dt > 0.0)) throw ValidationError("dt must be > 0");
    if (cfg.run.barrier_refine < 1)
        throw ValidationError("barrier_refine must be >= 1");
    if (!cfg.run.subcommand.empty()) validate_for(cfg, cfg.run.subcommand);
    return cfg;
}

void validate_for(const RunConfig& cfg, const std::string& subcommand) {
    bool needs_entrance = subcommand == "speed" || subcommand == "simulate";
    double gamma = cfg.mech.family == "stable" ? 0.0 : cfg.mech.gamma;
    if (needs_entrance && gamma < 0.0)
        throw ValidationError(
            "supercritical mechanism: infinity is not an entrance boundary, '" +
            subcommand + "' cannot start from it");
    if (subcommand == "scale" && gamma < 0.0)
        throw ValidationError("scale inversion requires gamma >= 0");
}

}  // namespace nlcsbp

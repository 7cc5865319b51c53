#ifndef NLCSBP_CONFIG_HPP
#define NLCSBP_CONFIG_HPP

// Run configuration: INI-style text with [mechanism], [rate] and [run]
// sections, parsed into typed specs with every default filled in, and a
// canonical echo that round-trips through the parser unchanged.

#include <cstdint>
#include <string>
#include <vector>

#include "nlcsbp/mechanism.hpp"
#include "nlcsbp/rates.hpp"

namespace nlcsbp {

struct MechanismSpec {
    std::string family = "linear";  // linear | stable | stable_tail |
                                    // compound_poisson_exp | tempered_stable
    double gamma = 0.0;
    double sigma2 = 0.0;
    double c = 1.0;        // stable shortcut Psi = c l^alpha
    double alpha = 1.5;    // stable / stable_tail / tempered_stable
    double c_pi = 1.0;     // tail density constant
    double rate = 1.0;     // compound Poisson intensity
    double mean_jump = 1.0;
    double beta = 1.0;     // tempering
};

struct RateSpec {
    std::string family = "power";  // power | power_log | exp_rate |
                                   // oscillating_valley | tabulated
    double theta = 2.0;
    double k = 1.0;
    double p = 1.0;
    double theta2 = 1.0;
    double g_theta = 0.0;  // exp_rate prefactor g(x) = g_k x^g_theta
    double g_k = 1.0;
    double v = 0.5;
    double x0 = 10.0;
    std::vector<double> grid, values;
    double tail_exponent = 0.0;
};

struct RunSpec {
    std::string subcommand;
    double b = 1.0;
    double x = kInf;  // start level; "inf" accepted
    double q = 0.2, a = 5.0;             // occupation indicator omega
    double x_lo = 0.05, x_hi = 20.0;     // scale CSV grid
    std::size_t n_x = 64;
    std::vector<double> lambdas = {0.5, 1.0, 2.0};
    std::vector<double> ladder = {100.0, 1000.0};
    std::size_t reps = 10000;
    std::size_t n_paths = 200;
    double t_lo = 1e-2, t_hi = 1e-1;
    std::size_t n_t = 9;
    double dt = 1e-3;
    double eps_jump = 1e-3;
    double horizon = 1e12;
    int barrier_refine = 8;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    std::string law = "stable";  // limitlaw target: stable | exp_rate
    double law_alpha = 1.5, law_theta = 3.0, law_theta2 = 1.0;
    std::vector<double> s_list = {0.5, 1.0, 2.0};
    std::string h4 = "none";  // none | inv_sqrt | cramer
    double h4_nu = 1.0, h4_c = 2.0;
    bool h4_alt = false;
    double vbar_w = 0.0, vbar_c = 0.0;
};

struct RunConfig {
    MechanismSpec mech;
    RateSpec rate;
    RunSpec run;

    BranchingMechanism mechanism() const;
    RateFunction rate_function() const;
    /// Canonical text with all defaults explicit; parses back to itself.
    std::string echo() const;
};

RunConfig parse_config(const std::string& text);

/// Subcommand-specific semantic checks (e.g. a supercritical mechanism has
/// no entrance boundary, so `speed` refuses it).
void validate_for(const RunConfig& cfg, const std::string& subcommand);

}  // namespace nlcsbp

#endif

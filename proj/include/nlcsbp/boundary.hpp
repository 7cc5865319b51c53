#ifndef NLCSBP_BOUNDARY_HPP
#define NLCSBP_BOUNDARY_HPP

// Entrance-boundary classification at infinity: the integral test
//   int^inf dx / (x Psi(1/x) R(x)) < inf,
// with the subcritical shortcut int^inf dx/R(x) < inf and the rule that a
// supercritical mechanism never has an entrance boundary at infinity.

#include <cstddef>
#include <vector>

#include "nlcsbp/mechanism.hpp"
#include "nlcsbp/rates.hpp"

namespace nlcsbp {

struct EntranceVerdict {
    bool is_entrance = false;
    double integral_value = 0.0;  // +inf when divergent
    enum class Criterion {
        FullIntegral,
        SubcriticalShortcut,
        SupercriticalRule
    } criterion_used = Criterion::FullIntegral;
};

/// tol guards the borderline: a tabulated rate whose integrand tail slope
/// is within tol of -1 raises InconclusiveTail.
EntranceVerdict entrance_test(const BranchingMechanism& mech,
                              const RateFunction& rate, double tol = 0.05);

struct EmpiricalEntranceReport {
    bool plateau = false;
    double plateau_value = 0.0;
    double plateau_se = 0.0;
    bool matches_mean = false;  // only meaningful when m_b supplied
    std::vector<double> ladder_x, ladder_mean, ladder_se;
};

/// Ladder of Monte Carlo estimates of E_x[T_b] for increasing x; detects
/// a plateau and compares it to the analytic mean when provided.
EmpiricalEntranceReport entrance_test_empirical(
    const std::vector<double>& x_ladder, const std::vector<double>& means,
    const std::vector<double>& std_errors, double m_b = -1.0);

}  // namespace nlcsbp

#endif

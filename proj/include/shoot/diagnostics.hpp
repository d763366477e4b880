#pragma once

#include <string>
#include <vector>

#include "shoot/integrate.hpp"
#include "shoot/problem.hpp"
#include "shoot/structure.hpp"

namespace shoot {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // worst-case value observed
    double threshold = 0.0;  // pass criterion on value
    std::string detail;
};

struct DiagnosticsReport {
    std::vector<CheckResult> checks;

    bool all_pass() const;
    const CheckResult* find(const std::string& name) const;
    std::string to_table() const;
    std::string to_kv() const;  // machine-readable key = value lines
};

// Post-solution verification on the integration grid of a converged
// trajectory:
//   goh_symmetry          max asymmetry of C B on singular arcs   (<= 1e-8)
//   legendre_clebsch      min eigenvalue of -d(Phi_ddot)/du there (> 0)
//   hamiltonian_constant  max |H(t) - H(0)|                       (<= 1e-5 (1+|H(0)|))
//   bang_sign_pattern     Phi_i > 0 on lower arcs, < 0 on upper; margin
//   bang_bang_slope       |Phi_dot_i| at bang-bang switches       (> 0)
DiagnosticsReport check_solution(const ProblemDef& prob, const ControlStructure& structure,
                                 const TrajectoryRecord& trajectory);

// Thresholds used by check_solution.
inline constexpr double kGohSymmetryTol = 1e-8;
inline constexpr double kHamiltonianConstancyTol = 1e-5;

}  // namespace shoot

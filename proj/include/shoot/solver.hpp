#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shoot/problem.hpp"

namespace shoot {

using ResidualMap = std::function<Vec(const Vec&)>;

enum class FdScheme { Central, Forward };

struct FdOptions {
    FdScheme scheme = FdScheme::Central;
    double h_rel = 1e-7;  // per-coordinate step h_j = h_rel * (1 + |nu_j|)
};

// Finite-difference Jacobian of `map` at `nu`. Residual evaluation failures
// are rethrown as EvaluationError carrying the probe coordinate.
Mat fd_jacobian(const ResidualMap& map, const Vec& nu, const FdOptions& opts = {});

struct SvdDiagnostics {
    Vec singular_values;       // descending
    double condition_number;   // sigma_1 / sigma_r
};
SvdDiagnostics svd_diagnostics(const Mat& J);

enum class SolveStatus {
    Converged,
    MaxIterations,
    Diverged,
    JacobianRankDeficient,
    JacobianSingular,
    EvaluationFailed,
};

std::string to_string(SolveStatus s);

struct SolveSettings {
    double tol = 1e-12;
    int max_iter = 1000;
    FdOptions fd;
    double divergence_norm = 1e12;  // residual norm treated as divergence
    double kappa_max = 1e14;        // condition limit on the normal equations
    bool final_jacobian = true;     // compute J and its spectrum at the end
};

struct SolveReport {
    SolveStatus status = SolveStatus::Diverged;
    bool converged = false;
    int iterations = 0;
    std::vector<Vec> iterates;            // nu_0 .. nu_K
    std::vector<double> residual_norms;   // per iterate
    std::vector<double> step_norms;       // per accepted step
    Vec solution;
    double final_residual_norm = 0.0;
    Mat jacobian;                         // at the final iterate (optional)
    Vec singular_values;
    double condition_number = 0.0;
    std::vector<double> quadratic_ratios;  // e_{k+1}/e_k^2 w.r.t. the final iterate
    std::string message;

    std::string to_text() const;  // one line per iterate: k, |S|, |step|
};

// Gauss-Newton with unit steps on an overdetermined residual map: each step
// solves the normal equations through a rank-revealing decomposition of the
// Jacobian. Stops at tol or max_iter.
SolveReport gauss_newton(const ResidualMap& map, const Vec& nu0, const SolveSettings& settings = {});

// Basic Newton with unit steps on a square residual map.
SolveReport newton(const ResidualMap& map, const Vec& nu0, const SolveSettings& settings = {});

}  // namespace shoot

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "shoot/shooting.hpp"
#include "shoot/solver.hpp"

namespace shoot {

struct GridAxis {
    std::string label;
    double lo = 0.0, hi = 0.0;
    int count = 1;  // count == 1 places the single point at lo
};

// Cartesian grid of starting points, row-major over axes in codec order.
struct GridSpec {
    std::vector<GridAxis> axes;

    std::size_t total() const;
    std::vector<int> multi_index(std::size_t flat) const;
    Vec point(std::size_t flat) const;
    void validate() const;
};

enum class PointOutcome { ConvergedToReference, ConvergedElsewhere, Failed };
std::string to_string(PointOutcome o);

struct PointResult {
    std::size_t index = 0;
    PointOutcome outcome = PointOutcome::Failed;
    int iterations = 0;
    double final_residual = 0.0;
    double objective = 0.0;
    Vec solution;
};

struct BatchReport {
    GridSpec grid;
    std::vector<PointResult> points;  // ordered by flat grid index
    std::size_t n_converged_reference = 0;
    std::size_t n_converged_elsewhere = 0;
    std::size_t n_failed = 0;
    double success_rate = 0.0;        // converged-to-reference / grid size
    double wall_seconds = 0.0;
    double cpu_seconds = 0.0;         // summed per-point durations
    double best_residual = 0.0;       // smallest converged residual norm
    double reference_objective = 0.0; // objective at the best reference point
    std::map<int, int> iteration_histogram;
    int workers_used = 1;

    void write_csv(std::ostream& os) const;
    // One line with the campaign columns: CPU, Success, Convergence, Objective.
    std::string summary_line(const std::string& tag) const;
};

struct BatchOptions {
    int workers = 0;          // 0: SHOOT_WORKERS env or hardware concurrency
    double match_tol = -1.0;  // <0: 1e-6 * (1 + |reference|_inf)
    SolveSettings solve;      // final_jacobian is forced off per point
};

// Independent solves from every grid point; a point succeeds when the solve
// converges and lands within match_tol of the reference in the max norm.
// Failures (divergence, rank deficiency, integration blow-up) are data, not
// errors. Outcomes are keyed by grid index and do not depend on the worker
// count.
BatchReport run_grid(const ShootingSystem& system, const GridSpec& grid, const Vec& reference,
                     const BatchOptions& opts = {});

int default_worker_count();

}  // namespace shoot

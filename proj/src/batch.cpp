#include "shoot/batch.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <thread>

namespace shoot {

std::string to_string(PointOutcome o) {
    switch (o) {
        case PointOutcome::ConvergedToReference: return "converged_to_reference";
        case PointOutcome::ConvergedElsewhere: return "converged_elsewhere";
        case PointOutcome::Failed: return "failed";
    }
    return "?";
}

std::size_t GridSpec::total() const {
    std::size_t t = 1;
    for (const auto& a : axes) t *= static_cast<std::size_t>(a.count);
    return t;
}

std::vector<int> GridSpec::multi_index(std::size_t flat) const {
    std::vector<int> idx(axes.size(), 0);
    for (std::size_t d = axes.size(); d-- > 0;) {
        idx[d] = static_cast<int>(flat % static_cast<std::size_t>(axes[d].count));
        flat /= static_cast<std::size_t>(axes[d].count);
    }
    return idx;
}

Vec GridSpec::point(std::size_t flat) const {
    const std::vector<int> idx = multi_index(flat);
    Vec nu(static_cast<int>(axes.size()));
    for (std::size_t d = 0; d < axes.size(); ++d) {
        const auto& a = axes[d];
        nu[static_cast<int>(d)] =
            a.count == 1 ? a.lo : a.lo + (a.hi - a.lo) * idx[d] / (a.count - 1);
    }
    return nu;
}

void GridSpec::validate() const {
    if (axes.empty()) throw ConfigurationError("grid: no axes");
    for (const auto& a : axes) {
        if (a.count < 1) throw ConfigurationError("grid axis " + a.label + ": count must be >= 1");
        if (a.count == 1 && a.lo != a.hi)
            throw ConfigurationError("grid axis " + a.label + ": a single point needs lo == hi");
        if (a.count > 1 && !(a.lo < a.hi))
            throw ConfigurationError("grid axis " + a.label + ": lo must be < hi");
    }
}

int default_worker_count() {
    if (const char* env = std::getenv("SHOOT_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

BatchReport run_grid(const ShootingSystem& system, const GridSpec& grid, const Vec& reference,
                     const BatchOptions& opts) {
    grid.validate();
    if (static_cast<int>(grid.axes.size()) != system.codec().dim())
        throw ConfigurationError("grid dimension " + std::to_string(grid.axes.size()) +
                                 " does not match the unknown dimension " +
                                 std::to_string(system.codec().dim()));

    const double match_tol =
        opts.match_tol > 0.0 ? opts.match_tol : 1e-6 * (1.0 + reference.cwiseAbs().maxCoeff());
    SolveSettings settings = opts.solve;
    settings.final_jacobian = false;

    const std::size_t total = grid.total();
    BatchReport rep;
    rep.grid = grid;
    rep.points.resize(total);

    const int workers =
        std::max(1, std::min<int>(opts.workers > 0 ? opts.workers : default_worker_count(),
                                  static_cast<int>(total)));
    rep.workers_used = workers;

    std::atomic<std::size_t> next{0};
    std::vector<double> durations(total, 0.0);

    const bool square = system.formulation() == Formulation::Classical;

    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            const auto t0 = std::chrono::steady_clock::now();
            PointResult& out = rep.points[i];
            out.index = i;
            const Vec nu0 = grid.point(i);
            try {
                const SolveReport solve =
                    square ? newton(system, nu0, settings) : gauss_newton(system, nu0, settings);
                out.iterations = solve.iterations;
                out.final_residual = solve.final_residual_norm;
                if (solve.converged) {
                    out.solution = solve.solution;
                    out.objective = system.objective(solve.solution);
                    const double dist = (solve.solution - reference).cwiseAbs().maxCoeff();
                    out.outcome = dist <= match_tol ? PointOutcome::ConvergedToReference
                                                    : PointOutcome::ConvergedElsewhere;
                } else {
                    out.outcome = PointOutcome::Failed;
                }
            } catch (const std::exception&) {
                out.outcome = PointOutcome::Failed;
            }
            durations[i] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };

    const auto wall0 = std::chrono::steady_clock::now();
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

    rep.best_residual = std::numeric_limits<double>::quiet_NaN();
    rep.reference_objective = std::numeric_limits<double>::quiet_NaN();
    for (const auto& pt : rep.points) {
        rep.cpu_seconds += durations[pt.index];
        rep.iteration_histogram[pt.iterations] += 1;
        switch (pt.outcome) {
            case PointOutcome::ConvergedToReference:
                ++rep.n_converged_reference;
                if (!(pt.final_residual >= rep.best_residual)) {  // also catches NaN
                    rep.best_residual = pt.final_residual;
                    rep.reference_objective = pt.objective;
                }
                break;
            case PointOutcome::ConvergedElsewhere: ++rep.n_converged_elsewhere; break;
            case PointOutcome::Failed: ++rep.n_failed; break;
        }
    }
    rep.success_rate = static_cast<double>(rep.n_converged_reference) / static_cast<double>(total);
    return rep;
}

void BatchReport::write_csv(std::ostream& os) const {
    os << "index";
    for (const auto& a : grid.axes) os << ",i_" << a.label;
    os << ",outcome,iterations,final_residual\n";
    char buf[64];
    for (const auto& pt : points) {
        os << pt.index;
        for (int d : grid.multi_index(pt.index)) os << "," << d;
        std::snprintf(buf, sizeof buf, "%.17g", pt.final_residual);
        os << "," << to_string(pt.outcome) << "," << pt.iterations << "," << buf << "\n";
    }
}

std::string BatchReport::summary_line(const std::string& tag) const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-24s CPU %.1f s  Success %.2f %%  Convergence %.2e  Objective %.10g",
                  tag.c_str(), cpu_seconds, 100.0 * success_rate, best_residual, reference_objective);
    return buf;
}

}  // namespace shoot

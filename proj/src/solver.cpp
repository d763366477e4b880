#include "shoot/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace shoot {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max_iterations";
        case SolveStatus::Diverged: return "diverged";
        case SolveStatus::JacobianRankDeficient: return "jacobian_rank_deficient";
        case SolveStatus::JacobianSingular: return "jacobian_singular";
        case SolveStatus::EvaluationFailed: return "evaluation_failed";
    }
    return "?";
}

Mat fd_jacobian(const ResidualMap& map, const Vec& nu, const FdOptions& opts) {
    const int r = static_cast<int>(nu.size());
    Vec base;
    if (opts.scheme == FdScheme::Forward) {
        try {
            base = map(nu);
        } catch (const std::exception& e) {
            throw EvaluationError(std::string("residual evaluation failed at the base point: ") + e.what(), -1);
        }
    }
    Mat J;
    for (int j = 0; j < r; ++j) {
        const double h = opts.h_rel * (1.0 + std::abs(nu[j]));
        Vec col;
        try {
            if (opts.scheme == FdScheme::Central) {
                Vec np = nu, nm = nu;
                np[j] += h;
                nm[j] -= h;
                col = (map(np) - map(nm)) / (2.0 * h);
            } else {
                Vec np = nu;
                np[j] += h;
                col = (map(np) - base) / h;
            }
        } catch (const std::exception& e) {
            throw EvaluationError(
                "residual evaluation failed at finite-difference probe of coordinate " + std::to_string(j) +
                    ": " + e.what(),
                j);
        }
        if (J.size() == 0) J.resize(col.size(), r);
        J.col(j) = col;
    }
    return J;
}

SvdDiagnostics svd_diagnostics(const Mat& J) {
    Eigen::JacobiSVD<Mat> svd(J);
    SvdDiagnostics d;
    d.singular_values = svd.singularValues();
    const double smin = d.singular_values(d.singular_values.size() - 1);
    d.condition_number = smin > 0.0 ? d.singular_values(0) / smin
                                    : std::numeric_limits<double>::infinity();
    return d;
}

std::string SolveReport::to_text() const {
    std::ostringstream os;
    os << "status " << to_string(status) << " iterations " << iterations << "\n";
    char buf[128];
    for (std::size_t k = 0; k < residual_norms.size(); ++k) {
        const double step = k < step_norms.size() ? step_norms[k] : 0.0;
        std::snprintf(buf, sizeof buf, "%4zu  %.16e  %.16e\n", k, residual_norms[k], step);
        os << buf;
    }
    return os.str();
}

namespace {

void finish_report(SolveReport& rep, const ResidualMap& map, const SolveSettings& settings) {
    rep.solution = rep.iterates.back();
    rep.final_residual_norm = rep.residual_norms.back();
    rep.iterations = static_cast<int>(rep.iterates.size()) - 1;
    rep.converged = rep.status == SolveStatus::Converged;

    if (settings.final_jacobian &&
        (rep.status == SolveStatus::Converged || rep.status == SolveStatus::MaxIterations)) {
        try {
            rep.jacobian = fd_jacobian(map, rep.solution, settings.fd);
            const SvdDiagnostics d = svd_diagnostics(rep.jacobian);
            rep.singular_values = d.singular_values;
            rep.condition_number = d.condition_number;
        } catch (const std::exception&) {
            // leave the spectrum empty; the solve result stands
        }
    }

    // Convergence ratios e_{k+1}/e_k^2 measured against the final iterate.
    const Vec& last = rep.iterates.back();
    const double floor = 1e-14 * (1.0 + last.cwiseAbs().maxCoeff());
    std::vector<double> err;
    for (const Vec& it : rep.iterates) err.push_back((it - last).cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k + 1 < err.size(); ++k) {
        if (err[k] > floor && err[k + 1] > floor)
            rep.quadratic_ratios.push_back(err[k + 1] / (err[k] * err[k]));
    }
}

enum class StepKind { GaussNewton, Newton };

SolveReport iterate(const ResidualMap& map, const Vec& nu0, const SolveSettings& settings,
                    StepKind kind) {
    SolveReport rep;
    Vec nu = nu0;
    Vec S;
    try {
        S = map(nu);
    } catch (const std::exception& e) {
        rep.status = SolveStatus::Diverged;
        rep.message = e.what();
        rep.iterates.push_back(nu);
        rep.residual_norms.push_back(std::numeric_limits<double>::quiet_NaN());
        rep.solution = nu;
        rep.iterations = 0;
        rep.final_residual_norm = rep.residual_norms.back();
        return rep;
    }
    if (kind == StepKind::Newton && S.size() != nu.size()) {
        throw ConfigurationError("newton requires a square system (" + std::to_string(S.size()) +
                                 " equations, " + std::to_string(nu.size()) + " unknowns)");
    }
    if (kind == StepKind::GaussNewton && S.size() < nu.size()) {
        throw ConfigurationError("gauss_newton requires at least as many equations as unknowns");
    }

    rep.iterates.push_back(nu);
    rep.residual_norms.push_back(S.norm());

    for (int k = 0;; ++k) {
        const double norm = rep.residual_norms.back();
        if (!std::isfinite(norm) || norm > settings.divergence_norm) {
            rep.status = SolveStatus::Diverged;
            rep.message = "residual norm " + std::to_string(norm);
            break;
        }
        if (norm <= settings.tol) {
            rep.status = SolveStatus::Converged;
            break;
        }
        if (k >= settings.max_iter) {
            rep.status = SolveStatus::MaxIterations;
            rep.message = "residual norm above tolerance after max_iter iterations";
            break;
        }

        Mat J;
        try {
            J = fd_jacobian(map, nu, settings.fd);
        } catch (const std::exception& e) {
            rep.status = SolveStatus::EvaluationFailed;
            rep.message = e.what();
            break;
        }

        Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Vec& sv = svd.singularValues();
        const double smin = sv(sv.size() - 1);
        const double kappa = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
        if (kind == StepKind::GaussNewton) {
            // kappa(J' J) = kappa(J)^2
            if (!(kappa * kappa < settings.kappa_max)) {
                rep.status = SolveStatus::JacobianRankDeficient;
                rep.message = "normal-equations condition number " + std::to_string(kappa * kappa);
                break;
            }
        } else {
            if (!(kappa < settings.kappa_max)) {
                rep.status = SolveStatus::JacobianSingular;
                rep.message = "jacobian condition number " + std::to_string(kappa);
                break;
            }
        }

        // Unit step. For the overdetermined case this solves the normal
        // equations through the SVD of J itself.
        const Vec delta = svd.solve(-S);
        nu += delta;
        try {
            S = map(nu);
        } catch (const std::exception& e) {
            rep.iterates.push_back(nu);
            rep.residual_norms.push_back(std::numeric_limits<double>::quiet_NaN());
            rep.step_norms.push_back(delta.norm());
            rep.status = SolveStatus::Diverged;
            rep.message = e.what();
            rep.solution = nu;
            rep.iterations = static_cast<int>(rep.iterates.size()) - 1;
            rep.final_residual_norm = rep.residual_norms.back();
            return rep;
        }
        rep.iterates.push_back(nu);
        rep.residual_norms.push_back(S.norm());
        rep.step_norms.push_back(delta.norm());
    }

    finish_report(rep, map, settings);
    return rep;
}

}  // namespace

SolveReport gauss_newton(const ResidualMap& map, const Vec& nu0, const SolveSettings& settings) {
    return iterate(map, nu0, settings, StepKind::GaussNewton);
}

SolveReport newton(const ResidualMap& map, const Vec& nu0, const SolveSettings& settings) {
    return iterate(map, nu0, settings, StepKind::Newton);
}

}  // namespace shoot

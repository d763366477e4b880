#include "shoot/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>

namespace shoot {

bool DiagnosticsReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const CheckResult* DiagnosticsReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string DiagnosticsReport::to_table() const {
    std::ostringstream os;
    char buf[160];
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%-22s %-4s  value % .4e  threshold % .4e  %s\n",
                      c.name.c_str(), c.pass ? "ok" : "FAIL", c.value, c.threshold, c.detail.c_str());
        os << buf;
    }
    return os.str();
}

std::string DiagnosticsReport::to_kv() const {
    std::ostringstream os;
    char buf[96];
    for (const auto& c : checks) {
        os << c.name << ".pass = " << (c.pass ? 1 : 0) << "\n";
        std::snprintf(buf, sizeof buf, "%.17g", c.value);
        os << c.name << ".value = " << buf << "\n";
        std::snprintf(buf, sizeof buf, "%.17g", c.threshold);
        os << c.name << ".threshold = " << buf << "\n";
    }
    return os.str();
}

namespace {

// Rows of H_ux: p f_i'(x).
Mat control_state_coupling(const ProblemDef& prob, const Vec& x, const RowVec& p) {
    Mat C(prob.m, prob.n);
    for (int i = 0; i < prob.m; ++i) C.row(i) = p * prob.fields[i + 1].jacobian(x);
    return C;
}

}  // namespace

DiagnosticsReport check_solution(const ProblemDef& prob, const ControlStructure& structure,
                                 const TrajectoryRecord& trajectory) {
    DiagnosticsReport rep;
    constexpr double inf = std::numeric_limits<double>::infinity();

    // (a) symmetry of C B on singular arcs
    {
        CheckResult c{"goh_symmetry", true, 0.0, kGohSymmetryTol, ""};
        bool seen = false;
        for (const auto& arc : trajectory.arcs) {
            if (arc.singular.empty()) continue;
            for (const auto& s : arc.samples) {
                const Mat CB = control_state_coupling(prob, s.x, s.p) *
                               eval_matrices(prob, s.x, s.u).B;
                c.value = std::max(c.value, (CB - CB.transpose()).cwiseAbs().maxCoeff());
                seen = true;
            }
        }
        c.pass = c.value <= c.threshold;
        if (!seen) c.detail = "no singular samples";
        rep.checks.push_back(c);
    }

    // (b) positivity of -d(Phi_ddot)/du on singular arcs
    {
        CheckResult c{"legendre_clebsch", false, inf, 0.0, "min eigenvalue"};
        if (!prob.has_hessians()) {
            c.value = 0.0;
            c.detail = "field hessians unavailable";
        } else {
            bool seen = false;
            for (const auto& arc : trajectory.arcs) {
                if (arc.singular.empty()) continue;
                for (const auto& s : arc.samples) {
                    const Mat R = legendre_clebsch_matrix(prob, s.x, s.p, s.u, arc.singular);
                    const Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (R + R.transpose()));
                    c.value = std::min(c.value, eig.eigenvalues().minCoeff());
                    seen = true;
                }
            }
            if (!seen) {
                c.value = 0.0;
                c.detail = "no singular samples";
            }
            c.pass = seen && c.value > 0.0;
        }
        rep.checks.push_back(c);
    }

    // (c) pre-Hamiltonian constancy across the whole horizon
    {
        const double H0 = trajectory.arcs.front().entry.H;
        CheckResult c{"hamiltonian_constant", true, 0.0, kHamiltonianConstancyTol * (1.0 + std::abs(H0)), ""};
        for (const auto& arc : trajectory.arcs) {
            c.value = std::max(c.value, std::abs(arc.entry.H - H0));
            c.value = std::max(c.value, std::abs(arc.exit.H - H0));
            for (const auto& s : arc.samples) c.value = std::max(c.value, std::abs(s.H - H0));
        }
        c.pass = c.value <= c.threshold;
        rep.checks.push_back(c);
    }

    // (d) strict sign of Phi_i on bang arcs: positive at the lower bound,
    // negative at the upper bound; margin = min |Phi_i| over interior samples
    {
        CheckResult c{"bang_sign_pattern", true, inf, 0.0, "min |Phi| margin"};
        bool seen = false;
        for (const auto& arc : trajectory.arcs) {
            const auto& row = structure.modes[static_cast<std::size_t>(arc.index)];
            for (int i = 0; i < prob.m; ++i) {
                const ArcMode mode = row[static_cast<std::size_t>(i)].mode;
                if (mode != ArcMode::Lower && mode != ArcMode::Upper) continue;
                const double sign = mode == ArcMode::Lower ? 1.0 : -1.0;
                for (std::size_t k = 1; k + 1 < arc.samples.size(); ++k) {
                    const double phi = arc.samples[k].Phi[i];
                    seen = true;
                    if (sign * phi <= 0.0) c.pass = false;
                    c.value = std::min(c.value, std::abs(phi));
                }
            }
        }
        if (!seen) {
            c.value = inf;
            c.detail = "no bang arcs";
        }
        rep.checks.push_back(c);
    }

    // (e) |Phi_dot| bounded away from zero at bang-bang switching times
    {
        CheckResult c{"bang_bang_slope", true, inf, 0.0, "min |Phi_dot| at bang-bang switches"};
        bool seen = false;
        for (int k = 1; k < structure.num_arcs; ++k) {
            if (!structure.bang_bang_switch_into(k)) continue;
            const auto& prev = structure.modes[static_cast<std::size_t>(k - 1)];
            const auto& cur = structure.modes[static_cast<std::size_t>(k)];
            for (int i = 0; i < prob.m; ++i) {
                const ArcMode a = prev[static_cast<std::size_t>(i)].mode;
                const ArcMode b = cur[static_cast<std::size_t>(i)].mode;
                if (a == ArcMode::Singular || b == ArcMode::Singular || a == b) continue;
                seen = true;
                const double slope =
                    trajectory.arcs[static_cast<std::size_t>(k)].entry.Phi_dot[i];
                c.value = std::min(c.value, std::abs(slope));
                if (slope == 0.0) c.pass = false;
            }
        }
        if (!seen) c.detail = "no bang-bang switches";
        rep.checks.push_back(c);
    }

    return rep;
}

}  // namespace shoot

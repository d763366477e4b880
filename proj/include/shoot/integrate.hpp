#pragma once

#include <iosfwd>
#include <vector>

#include "shoot/problem.hpp"
#include "shoot/structure.hpp"

namespace shoot {

struct IntegrationOptions {
    int total_steps = 500;      // split across arcs proportionally to arc length
    int min_steps_per_arc = 10;
    bool record_samples = false;  // keep the full RK4 grid in the record
};

struct ArcSample {
    double t;
    Vec x;
    RowVec p;
    Vec u;
    RowVec Phi;
    RowVec Phi_dot;
    double H;
};

struct ArcTrace {
    int index = 0;
    double t_begin = 0.0;
    double t_end = 0.0;
    int steps = 0;
    std::vector<int> singular;          // singular components on this arc
    PontryaginPoint entry, exit;        // this arc's control at both ends
    std::vector<ArcSample> samples;     // steps+1 uniform samples when recorded
};

// Joint state-costate trajectory over the ordered arcs. x and p are continued
// across arc boundaries; the control (and hence Phi_dot, H) may jump there.
struct TrajectoryRecord {
    std::vector<ArcTrace> arcs;

    const Vec& final_state() const { return arcs.back().exit.x; }
    const RowVec& final_costate() const { return arcs.back().exit.p; }
    double final_hamiltonian() const { return arcs.back().exit.H; }
    // H(T_k+) - H(T_k-) at the switch between arcs k and k+1 (0-based k).
    double hamiltonian_jump(int k) const {
        return arcs[static_cast<std::size_t>(k + 1)].entry.H - arcs[static_cast<std::size_t>(k)].exit.H;
    }
};

// Integrate xdot = f0 + sum u_i f_i, pdot = -p A(x,u) with RK4 over the arcs
// of `structure`. `breakpoints` holds {0, T_1, ..., T_{N-1}, T}. Bang
// components take their mode value; singular components are re-resolved at
// every RK4 stage. Out-of-order breakpoints are integrated as given (negative
// steps), so a solver may evaluate residuals at infeasible iterates.
TrajectoryRecord integrate_arcs(const ProblemDef& prob, const ControlStructure& structure,
                                const std::vector<double>& breakpoints, const Vec& x0,
                                const RowVec& p0, const IntegrationOptions& opts = {});

// Per-arc step counts for the given breakpoints (exposed for tests).
std::vector<int> allocate_steps(const std::vector<double>& breakpoints, const IntegrationOptions& opts);

}  // namespace shoot

#include "shoot/integrate.hpp"

#include <cmath>

namespace shoot {

namespace {

// Control on one arc at a given (x, p): bang components from the mode table,
// singular components from the pointwise resolver.
Vec arc_control(const ProblemDef& prob, const std::vector<ModeEntry>& row,
                const std::vector<int>& singular, const Vec& x, const RowVec& p) {
    Vec u(prob.m);
    for (int i = 0; i < prob.m; ++i) {
        const auto& e = row[static_cast<std::size_t>(i)];
        u[i] = (e.mode == ArcMode::Singular) ? 0.0 : bang_value(prob, e, i);
    }
    if (!singular.empty()) {
        const Vec us = singular_control(prob, x, p, singular, u);
        for (std::size_t k = 0; k < singular.size(); ++k) u[singular[k]] = us[static_cast<int>(k)];
    }
    return u;
}

struct Rhs {
    Vec xdot;
    RowVec pdot;
};

Rhs rhs_at(const ProblemDef& prob, const std::vector<ModeEntry>& row,
           const std::vector<int>& singular, const Vec& x, const RowVec& p) {
    const Vec u = arc_control(prob, row, singular, x, p);
    Mat A = prob.fields[0].jacobian(x);
    Vec v = prob.fields[0].value(x);
    for (int i = 0; i < prob.m; ++i) {
        if (u[i] != 0.0) {
            A += u[i] * prob.fields[i + 1].jacobian(x);
            v += u[i] * prob.fields[i + 1].value(x);
        }
    }
    return {std::move(v), -(p * A)};
}

}  // namespace

std::vector<int> allocate_steps(const std::vector<double>& breakpoints, const IntegrationOptions& opts) {
    const std::size_t n_arcs = breakpoints.size() - 1;
    std::vector<double> len(n_arcs);
    double total_len = 0.0;
    for (std::size_t k = 0; k < n_arcs; ++k) {
        len[k] = std::abs(breakpoints[k + 1] - breakpoints[k]);
        total_len += len[k];
    }
    std::vector<int> steps(n_arcs, opts.min_steps_per_arc);
    if (total_len > 0.0) {
        for (std::size_t k = 0; k < n_arcs; ++k) {
            const int want = static_cast<int>(std::llround(opts.total_steps * len[k] / total_len));
            steps[k] = std::max(opts.min_steps_per_arc, want);
        }
    }
    return steps;
}

TrajectoryRecord integrate_arcs(const ProblemDef& prob, const ControlStructure& structure,
                                const std::vector<double>& breakpoints, const Vec& x0,
                                const RowVec& p0, const IntegrationOptions& opts) {
    if (static_cast<int>(breakpoints.size()) != structure.num_arcs + 1)
        throw ConfigurationError("integrate_arcs: breakpoints must have num_arcs + 1 entries");
    if (x0.size() != prob.n || p0.size() != prob.n)
        throw ConfigurationError("integrate_arcs: state/costate dimension mismatch");

    const std::vector<int> steps = allocate_steps(breakpoints, opts);

    TrajectoryRecord rec;
    rec.arcs.resize(static_cast<std::size_t>(structure.num_arcs));
    Vec x = x0;
    RowVec p = p0;

    for (int k = 0; k < structure.num_arcs; ++k) {
        ArcTrace& arc = rec.arcs[static_cast<std::size_t>(k)];
        arc.index = k;
        arc.t_begin = breakpoints[static_cast<std::size_t>(k)];
        arc.t_end = breakpoints[static_cast<std::size_t>(k + 1)];
        arc.steps = steps[static_cast<std::size_t>(k)];
        arc.singular = structure.singular_set(k);
        const auto& row = structure.modes[static_cast<std::size_t>(k)];

        const double h = (arc.t_end - arc.t_begin) / arc.steps;

        auto sample_here = [&](double t) {
            const Vec u = arc_control(prob, row, arc.singular, x, p);
            PontryaginPoint pt = eval_point(prob, x, p, u);
            if (opts.record_samples) {
                rec.arcs[static_cast<std::size_t>(k)].samples.push_back(
                    {t, pt.x, pt.p, pt.u, pt.Phi, pt.Phi_dot, pt.H});
            }
            return pt;
        };

        arc.entry = sample_here(arc.t_begin);

        for (int s = 0; s < arc.steps; ++s) {
            const double t = arc.t_begin + s * h;
            const Rhs k1 = rhs_at(prob, row, arc.singular, x, p);
            const Rhs k2 = rhs_at(prob, row, arc.singular, x + 0.5 * h * k1.xdot, p + 0.5 * h * k1.pdot);
            const Rhs k3 = rhs_at(prob, row, arc.singular, x + 0.5 * h * k2.xdot, p + 0.5 * h * k2.pdot);
            const Rhs k4 = rhs_at(prob, row, arc.singular, x + h * k3.xdot, p + h * k3.pdot);
            x += (h / 6.0) * (k1.xdot + 2.0 * k2.xdot + 2.0 * k3.xdot + k4.xdot);
            p += (h / 6.0) * (k1.pdot + 2.0 * k2.pdot + 2.0 * k3.pdot + k4.pdot);
            if (!x.allFinite() || !p.allFinite())
                throw IntegrationDiverged("integration produced a non-finite state", t + h);
            if (s + 1 < arc.steps && opts.record_samples) sample_here(t + h);
        }

        arc.exit = sample_here(arc.t_end);
    }
    return rec;
}

}  // namespace shoot

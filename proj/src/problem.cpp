#include "shoot/problem.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace shoot {

VectorField VectorField::constant(const Vec& c) {
    const int n = static_cast<int>(c.size());
    VectorField f;
    f.value = [c](const Vec&) { return c; };
    f.jacobian = [n](const Vec&) { return Mat::Zero(n, n); };
    f.hessian = [n](const Vec&, const Vec&, const Vec&) { return Vec::Zero(n); };
    return f;
}

VectorField VectorField::linear(const Mat& M) {
    const int n = static_cast<int>(M.rows());
    VectorField f;
    f.value = [M](const Vec& x) -> Vec { return M * x; };
    f.jacobian = [M](const Vec&) { return M; };
    f.hessian = [n](const Vec&, const Vec&, const Vec&) { return Vec::Zero(n); };
    return f;
}

EndpointCost EndpointCost::terminal_component(int n, int index, double sign) {
    EndpointCost c;
    c.value = [index, sign](const Vec&, const Vec& xT) { return sign * xT[index]; };
    c.grad_x0 = [n](const Vec&, const Vec&) { return Vec::Zero(n); };
    c.grad_xT = [n, index, sign](const Vec&, const Vec&) {
        Vec g = Vec::Zero(n);
        g[index] = sign;
        return g;
    };
    return c;
}

bool EndpointConstraints::all_pins() const {
    for (const auto& p : row_pins)
        if (!p) return false;
    return static_cast<int>(row_pins.size()) == dim;
}

EndpointConstraints EndpointConstraints::from_pins(int n, std::vector<EndpointPin> pins) {
    EndpointConstraints c;
    c.dim = static_cast<int>(pins.size());
    c.value = [pins](const Vec& x0, const Vec& xT) {
        Vec v(pins.size());
        for (std::size_t j = 0; j < pins.size(); ++j)
            v[static_cast<int>(j)] = (pins[j].at_initial ? x0[pins[j].index] : xT[pins[j].index]) - pins[j].target;
        return v;
    };
    c.jac_x0 = [pins, n](const Vec&, const Vec&) {
        Mat J = Mat::Zero(static_cast<int>(pins.size()), n);
        for (std::size_t j = 0; j < pins.size(); ++j)
            if (pins[j].at_initial) J(static_cast<int>(j), pins[j].index) = 1.0;
        return J;
    };
    c.jac_xT = [pins, n](const Vec&, const Vec&) {
        Mat J = Mat::Zero(static_cast<int>(pins.size()), n);
        for (std::size_t j = 0; j < pins.size(); ++j)
            if (!pins[j].at_initial) J(static_cast<int>(j), pins[j].index) = 1.0;
        return J;
    };
    for (const auto& p : pins) c.row_pins.emplace_back(p);
    return c;
}

EndpointConstraints EndpointConstraints::none() {
    EndpointConstraints c;
    c.dim = 0;
    c.value = [](const Vec&, const Vec&) { return Vec(); };
    c.jac_x0 = [](const Vec&, const Vec&) { return Mat(); };
    c.jac_xT = [](const Vec&, const Vec&) { return Mat(); };
    return c;
}

bool ProblemDef::has_hessians() const {
    for (const auto& f : fields)
        if (!f.hessian) return false;
    return !fields.empty();
}

void ProblemDef::validate() const {
    if (n <= 0 || m <= 0) throw ConfigurationError(name + ": state and control dimensions must be positive");
    if (static_cast<int>(fields.size()) != m + 1)
        throw ConfigurationError(name + ": expected " + std::to_string(m + 1) + " vector fields");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!fields[i].value || !fields[i].jacobian)
            throw ConfigurationError(name + ": field " + std::to_string(i) + " lacks value or jacobian");
    }
    if (!cost.value || !cost.grad_x0 || !cost.grad_xT)
        throw ConfigurationError(name + ": endpoint cost incomplete");
    if (constraints.dim > 0 && (!constraints.value || !constraints.jac_x0 || !constraints.jac_xT))
        throw ConfigurationError(name + ": endpoint constraints incomplete");
    if (bounds) {
        if (bounds->lower.size() != m || bounds->upper.size() != m)
            throw ConfigurationError(name + ": control bounds must have dimension m");
        for (int i = 0; i < m; ++i)
            if (!(bounds->lower[i] < bounds->upper[i]))
                throw ConfigurationError(name + ": control bounds require lower < upper componentwise");
    }
    if (cost_state >= n) throw ConfigurationError(name + ": cost_state out of range");
    if (final_time.value <= 0.0 && !final_time.is_free)
        throw ConfigurationError(name + ": fixed final time must be positive");
}

std::optional<double> ProblemDef::initial_pin(int i) const {
    for (const auto& p : constraints.row_pins)
        if (p && p->at_initial && p->index == i) return p->target;
    return std::nullopt;
}

std::optional<double> ProblemDef::terminal_pin(int i) const {
    for (const auto& p : constraints.row_pins)
        if (p && !p->at_initial && p->index == i) return p->target;
    return std::nullopt;
}

Vec drift(const ProblemDef& prob, const Vec& x, const Vec& u) {
    Vec v = prob.fields[0].value(x);
    for (int i = 0; i < prob.m; ++i) v += u[i] * prob.fields[i + 1].value(x);
    return v;
}

SystemMatrices eval_matrices(const ProblemDef& prob, const Vec& x, const Vec& u) {
    if (x.size() != prob.n) throw ConfigurationError(prob.name + ": state dimension mismatch");
    if (u.size() != prob.m) throw ConfigurationError(prob.name + ": control dimension mismatch");
    for (std::size_t i = 0; i < prob.fields.size(); ++i)
        if (!prob.fields[i].jacobian)
            throw ConfigurationError(prob.name + ": field " + std::to_string(i) + " has no jacobian");

    SystemMatrices ms;
    ms.A = prob.fields[0].jacobian(x);
    ms.B.resize(prob.n, prob.m);
    Mat dB(prob.n, prob.m);  // columns f_i'(x) * xdot
    std::vector<Mat> jac(prob.m);
    for (int i = 0; i < prob.m; ++i) {
        jac[i] = prob.fields[i + 1].jacobian(x);
        ms.A += u[i] * jac[i];
        ms.B.col(i) = prob.fields[i + 1].value(x);
    }
    const Vec xdot = prob.fields[0].value(x) + ms.B * u;
    for (int i = 0; i < prob.m; ++i) dB.col(i) = jac[i] * xdot;
    ms.B1 = ms.A * ms.B - dB;
    return ms;
}

PontryaginPoint eval_point(const ProblemDef& prob, const Vec& x, const RowVec& p, const Vec& u) {
    if (p.size() != prob.n) throw ConfigurationError(prob.name + ": costate dimension mismatch");
    const SystemMatrices ms = eval_matrices(prob, x, u);
    PontryaginPoint pt;
    pt.x = x;
    pt.p = p;
    pt.u = u;
    pt.Phi = p * ms.B;
    pt.Phi_dot = -p * ms.B1;
    const Vec xdot = prob.fields[0].value(x) + ms.B * u;
    pt.H = p.dot(xdot);
    return pt;
}

RowVec switching_accel(const ProblemDef& prob, const Vec& x, const RowVec& p, const Vec& u) {
    if (!prob.has_hessians())
        throw ConfigurationError(prob.name + ": second derivatives required for switching_accel");
    const int n = prob.n, m = prob.m;

    std::vector<Vec> fval(m + 1);
    std::vector<Mat> fjac(m + 1);
    for (int i = 0; i <= m; ++i) {
        fval[i] = prob.fields[i].value(x);
        fjac[i] = prob.fields[i].jacobian(x);
    }
    Vec xdot = fval[0];
    Mat A = fjac[0];
    for (int i = 1; i <= m; ++i) {
        xdot += u[i - 1] * fval[i];
        A += u[i - 1] * fjac[i];
    }

    // B1 column i = sum_j u_j (f_j' f_i - f_i' f_j), j = 0..m with u_0 = 1.
    // Its time derivative with u frozen needs the field hessians.
    Mat B1(n, m), B1dot(n, m);
    for (int i = 1; i <= m; ++i) {
        Vec col = Vec::Zero(n);
        Vec cold = Vec::Zero(n);
        for (int j = 0; j <= m; ++j) {
            const double uj = (j == 0) ? 1.0 : u[j - 1];
            if (uj == 0.0) continue;
            col += uj * (fjac[j] * fval[i] - fjac[i] * fval[j]);
            cold += uj * (prob.fields[j].hessian(x, xdot, fval[i]) + fjac[j] * (fjac[i] * xdot) -
                          prob.fields[i].hessian(x, xdot, fval[j]) - fjac[i] * (fjac[j] * xdot));
        }
        B1.col(i - 1) = col;
        B1dot.col(i - 1) = cold;
    }
    // Phi_ddot = -pdot B1 - p B1dot = p A B1 - p B1dot
    return p * (A * B1) - p * B1dot;
}

SingularSystem singular_system(const ProblemDef& prob, const Vec& x, const RowVec& p,
                               const std::vector<int>& singular, const Vec& u_frozen) {
    const int ns = static_cast<int>(singular.size());
    Vec u = u_frozen;
    for (int k : singular) u[k] = 0.0;
    const RowVec base = switching_accel(prob, x, p, u);

    SingularSystem sys;
    sys.c0.resize(ns);
    sys.C1.resize(ns, ns);
    for (int r = 0; r < ns; ++r) sys.c0[r] = base[singular[static_cast<std::size_t>(r)]];
    for (int c = 0; c < ns; ++c) {
        Vec uc = u;
        uc[singular[static_cast<std::size_t>(c)]] = 1.0;
        const RowVec probe = switching_accel(prob, x, p, uc);
        for (int r = 0; r < ns; ++r)
            sys.C1(r, c) = probe[singular[static_cast<std::size_t>(r)]] - sys.c0[r];
    }
    return sys;
}

Vec singular_control(const ProblemDef& prob, const Vec& x, const RowVec& p,
                     const std::vector<int>& singular, const Vec& bang_values) {
    if (singular.empty()) return Vec();
    if (prob.closed_form_singular) return prob.closed_form_singular(x, p, singular, bang_values);
    if (!prob.has_hessians())
        throw ConfigurationError(prob.name +
                                 ": no closed-form singular control and no field hessians for the generic resolver");

    const SingularSystem sys = singular_system(prob, x, p, singular, bang_values);
    Eigen::JacobiSVD<Mat> svd(sys.C1, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond < kLegendreClebschCondMax) || smax == 0.0)
        throw LegendreClebschViolation(prob.name + ": singular-control coefficient matrix is singular", cond);
    return svd.solve(-sys.c0);
}

Mat legendre_clebsch_matrix(const ProblemDef& prob, const Vec& x, const RowVec& p,
                            const Vec& u, const std::vector<int>& singular) {
    std::vector<int> set = singular;
    if (set.empty())
        for (int i = 0; i < prob.m; ++i) set.push_back(i);
    const SingularSystem sys = singular_system(prob, x, p, set, u);
    return -sys.C1;
}

double check_field_derivatives(const ProblemDef& prob, std::span<const Vec> probes) {
    double worst = 0.0;
    for (const Vec& x : probes) {
        for (const auto& f : prob.fields) {
            const Mat J = f.jacobian(x);
            const double scale = 1.0 + J.cwiseAbs().maxCoeff();
            for (int j = 0; j < prob.n; ++j) {
                const double h = 1e-6 * (1.0 + std::abs(x[j]));
                Vec xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                const Vec col = (f.value(xp) - f.value(xm)) / (2.0 * h);
                worst = std::max(worst, (col - J.col(j)).cwiseAbs().maxCoeff() / scale);
                if (f.hessian) {
                    const Mat dJ = (f.jacobian(xp) - f.jacobian(xm)) / (2.0 * h);
                    const double hscale = 1.0 + dJ.cwiseAbs().maxCoeff();
                    for (int k = 0; k < prob.n; ++k) {
                        const Vec hv = f.hessian(x, Vec::Unit(prob.n, k), Vec::Unit(prob.n, j));
                        worst = std::max(worst, (hv - dJ.col(k)).cwiseAbs().maxCoeff() / hscale);
                    }
                }
            }
        }
    }
    return worst;
}

}  // namespace shoot

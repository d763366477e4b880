#include "shoot/benchmarks.hpp"

#include <cmath>

namespace shoot {

namespace {

std::map<std::string, double> merged(std::map<std::string, double> defaults,
                                     const std::map<std::string, double>& overrides,
                                     const std::string& family) {
    for (const auto& [key, value] : overrides) {
        if (!defaults.count(key))
            throw ConfigurationError(family + ": unknown parameter '" + key + "'");
        defaults[key] = value;
    }
    return defaults;
}

Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Fishing: state (stock x, accumulated revenue), control = fishing rate in
// [0, Umax] (the physical rate, not a normalized effort; the published
// Jacobian spectra are tied to this scaling).
//   xdot = r x (1 - x/k) - u
//   revenue integrand (E - c/x) u, maximized; accumulated negated so the
//   problem is a minimization.

BenchmarkCase fishing(const std::map<std::string, double>& overrides) {
    const auto P = merged({{"T", 10.0},
                           {"E", 1.0},
                           {"c", 17.5},
                           {"r", 0.71},
                           {"k", 80.5},
                           {"Umax", 20.0},
                           {"x0", 70.0},
                           {"cost_scale", 1.0}},
                          overrides, "fishing");
    const double E = P.at("E"), c = P.at("c"), r = P.at("r"), k = P.at("k");
    const double s = P.at("cost_scale");

    ProblemDef prob;
    prob.name = "fishing";
    prob.n = 2;
    prob.m = 1;
    prob.cost_state = 1;
    prob.final_time = FinalTime::fixed(P.at("T"));
    prob.bounds = ControlBounds{Vec::Constant(1, 0.0), Vec::Constant(1, P.at("Umax"))};

    VectorField f0;
    f0.value = [r, k](const Vec& x) {
        Vec v(2);
        v << r * x[0] * (1.0 - x[0] / k), 0.0;
        return v;
    };
    f0.jacobian = [r, k](const Vec& x) {
        Mat J = Mat::Zero(2, 2);
        J(0, 0) = r * (1.0 - 2.0 * x[0] / k);
        return J;
    };
    f0.hessian = [r, k](const Vec&, const Vec& v, const Vec& w) {
        Vec h(2);
        h << -2.0 * r / k * v[0] * w[0], 0.0;
        return h;
    };

    VectorField f1;
    f1.value = [E, c, s](const Vec& x) {
        Vec v(2);
        v << -1.0, s * (c / x[0] - E);
        return v;
    };
    f1.jacobian = [c, s](const Vec& x) {
        Mat J = Mat::Zero(2, 2);
        J(1, 0) = -s * c / (x[0] * x[0]);
        return J;
    };
    f1.hessian = [c, s](const Vec& x, const Vec& v, const Vec& w) {
        Vec h(2);
        h << 0.0, 2.0 * s * c / (x[0] * x[0] * x[0]) * v[0] * w[0];
        return h;
    };
    prob.fields = {f0, f1};

    prob.cost = EndpointCost::terminal_component(2, 1, 1.0);
    prob.constraints = EndpointConstraints::from_pins(2, {{true, 0, P.at("x0")}, {true, 1, 0.0}});

    prob.closed_form_singular = [c, r, k, s](const Vec& x, const RowVec& p,
                                             const std::vector<int>&, const Vec&) {
        const double ce = s * c;  // scaled revenue coefficient
        const double num = ce / x[0] - ce / k - p[0] + 2.0 * p[0] * x[0] / k -
                           2.0 * p[0] * x[0] * x[0] / (k * k);
        Vec u(1);
        u[0] = k * r * num / (2.0 * (ce / x[0] - p[0]));
        return u;
    };

    BenchmarkCase bench;
    bench.name = "fishing";
    bench.family = "fishing";
    bench.params = P;
    bench.problem = std::move(prob);
    bench.structure = ControlStructure::single({ArcMode::Upper, ArcMode::Singular, ArcMode::Upper});
    bench.published_solution = vec3(-0.462254744307241, 2.37041478456004, 6.98877992494185);
    bench.published_objective = -106.9059979;
    bench.published_sv_classical = vec3(3.61, 0.43, 5.63e-2);
    bench.published_sv_extended = vec3(27.2, 1.71, 3.53e-1);
    bench.published_kappa_classical = 64.12;
    bench.published_kappa_extended = 77.05;
    bench.default_start = vec3(-0.5, 2.4, 7.0);
    bench.default_grid.axes = {{"p1", -10.0, 10.0, 21}, {"t1", 0.0, 10.0, 21}, {"t2", 0.0, 10.0, 21}};
    return bench;
}

// ---------------------------------------------------------------------------
// Regulator: double integrator with bounded acceleration, quadratic running
// cost (position^2 + speed^2)/2 accumulated in the third state.

BenchmarkCase regulator(const std::map<std::string, double>& overrides) {
    const auto P = merged({{"T", 5.0}, {"x0_1", 0.0}, {"x0_2", 1.0}, {"cost_scale", 1.0}},
                          overrides, "regulator");
    const double s = P.at("cost_scale");

    ProblemDef prob;
    prob.name = "regulator";
    prob.n = 3;
    prob.m = 1;
    prob.cost_state = 2;
    prob.final_time = FinalTime::fixed(P.at("T"));
    prob.bounds = ControlBounds{Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)};

    VectorField f0;
    f0.value = [s](const Vec& x) {
        Vec v(3);
        v << x[1], 0.0, 0.5 * s * (x[0] * x[0] + x[1] * x[1]);
        return v;
    };
    f0.jacobian = [s](const Vec& x) {
        Mat J = Mat::Zero(3, 3);
        J(0, 1) = 1.0;
        J(2, 0) = s * x[0];
        J(2, 1) = s * x[1];
        return J;
    };
    f0.hessian = [s](const Vec&, const Vec& v, const Vec& w) {
        Vec h(3);
        h << 0.0, 0.0, s * (v[0] * w[0] + v[1] * w[1]);
        return h;
    };
    prob.fields = {f0, VectorField::constant(vec3(0.0, 1.0, 0.0))};

    prob.cost = EndpointCost::terminal_component(3, 2, 1.0);
    prob.constraints = EndpointConstraints::from_pins(
        3, {{true, 0, P.at("x0_1")}, {true, 1, P.at("x0_2")}, {true, 2, 0.0}});

    prob.closed_form_singular = [](const Vec& x, const RowVec&, const std::vector<int>&, const Vec&) {
        Vec u(1);
        u[0] = x[0];
        return u;
    };

    BenchmarkCase bench;
    bench.name = "regulator";
    bench.family = "regulator";
    bench.params = P;
    bench.problem = std::move(prob);
    bench.structure = ControlStructure::single({ArcMode::Lower, ArcMode::Singular});
    bench.published_solution = vec3(0.942173346483640, 1.44191017584598, 1.41376408762863);
    bench.published_objective = 0.37699193037;
    bench.published_sv_classical = vec3(24.66, 5.19, 1.96e-8);
    bench.published_sv_extended = vec3(24.70, 5.97, 1.13);
    bench.published_kappa_classical = 1.26e9;
    bench.published_kappa_extended = 21.86;
    bench.default_start = vec3(1.0, 1.5, 1.4);
    bench.default_grid.axes = {{"p1", -10.0, 10.0, 21}, {"p2", -10.0, 10.0, 21}, {"t1", 0.0, 5.0, 21}};
    return bench;
}

// ---------------------------------------------------------------------------
// Goddard: vertical rocket ascent, states (altitude, speed, mass), maximize
// the final mass with the final time free. Quadratic drag with a steep
// exponential altitude factor; the singular control uses the generic
// resolver, so the drag terms carry analytic second derivatives.

BenchmarkCase goddard(const std::map<std::string, double>& overrides) {
    // mass_flow is the paper's b * Tmax: the printed tables are only
    // consistent with mdot = -7 u.
    const auto P = merged({{"Tmax", 3.5},
                           {"mass_flow", 7.0},
                           {"drag_c", 310.0},
                           {"drag_k", 500.0},
                           {"r0", 1.0},
                           {"v0", 0.0},
                           {"m0", 1.0},
                           {"rT", 1.01},
                           {"T_guess", 0.2},
                           {"cost_scale", 1.0}},
                          overrides, "goddard");
    const double Tmax = P.at("Tmax"), mf = P.at("mass_flow");
    const double dc = P.at("drag_c"), dk = P.at("drag_k");
    const double s = P.at("cost_scale");

    ProblemDef prob;
    prob.name = "goddard";
    prob.n = 3;
    prob.m = 1;
    prob.final_time = FinalTime::free_with_guess(P.at("T_guess"));
    prob.bounds = ControlBounds{Vec::Constant(1, 0.0), Vec::Constant(1, 1.0)};

    VectorField f0;
    f0.value = [dc, dk](const Vec& x) {
        const double r = x[0], v = x[1], m = x[2];
        const double D = dc * v * v * std::exp(-dk * (r - 1.0));
        Vec out(3);
        out << v, -1.0 / (r * r) - D / m, 0.0;
        return out;
    };
    f0.jacobian = [dc, dk](const Vec& x) {
        const double r = x[0], v = x[1], m = x[2];
        const double ex = std::exp(-dk * (r - 1.0));
        const double D = dc * v * v * ex;
        Mat J = Mat::Zero(3, 3);
        J(0, 1) = 1.0;
        J(1, 0) = 2.0 / (r * r * r) + dk * D / m;  // d(-1/r^2 - D/m)/dr, D_r = -dk D
        J(1, 1) = -2.0 * dc * v * ex / m;
        J(1, 2) = D / (m * m);
        return J;
    };
    f0.hessian = [dc, dk](const Vec& x, const Vec& a, const Vec& b) {
        const double r = x[0], v = x[1], m = x[2];
        const double ex = std::exp(-dk * (r - 1.0));
        const double D = dc * v * v * ex;
        const double Dr = -dk * D, Dv = 2.0 * dc * v * ex;
        const double Drr = dk * dk * D, Drv = -dk * Dv, Dvv = 2.0 * dc * ex;
        Mat G = Mat::Zero(3, 3);  // second derivatives of -1/r^2 - D/m
        G(0, 0) = -6.0 / (r * r * r * r) - Drr / m;
        G(0, 1) = G(1, 0) = -Drv / m;
        G(0, 2) = G(2, 0) = Dr / (m * m);
        G(1, 1) = -Dvv / m;
        G(1, 2) = G(2, 1) = Dv / (m * m);
        G(2, 2) = -2.0 * D / (m * m * m);
        Vec h(3);
        h << 0.0, a.dot(G * b), 0.0;
        return h;
    };

    VectorField f1;
    f1.value = [Tmax, mf](const Vec& x) {
        Vec out(3);
        out << 0.0, Tmax / x[2], -mf;
        return out;
    };
    f1.jacobian = [Tmax](const Vec& x) {
        Mat J = Mat::Zero(3, 3);
        J(1, 2) = -Tmax / (x[2] * x[2]);
        return J;
    };
    f1.hessian = [Tmax](const Vec& x, const Vec& a, const Vec& b) {
        Vec h(3);
        h << 0.0, 2.0 * Tmax / (x[2] * x[2] * x[2]) * a[2] * b[2], 0.0;
        return h;
    };
    prob.fields = {f0, f1};

    prob.cost = EndpointCost::terminal_component(3, 2, -s);
    prob.constraints = EndpointConstraints::from_pins(
        3, {{true, 0, P.at("r0")}, {true, 1, P.at("v0")}, {true, 2, P.at("m0")}, {false, 0, P.at("rT")}});

    BenchmarkCase bench;
    bench.name = "goddard";
    bench.family = "goddard";
    bench.params = P;
    bench.problem = std::move(prob);
    bench.structure = ControlStructure::single({ArcMode::Upper, ArcMode::Singular, ArcMode::Lower});
    bench.published_solution.resize(6);
    bench.published_solution << -50.9280055899288, -1.94115676279896, -0.693270270795148,
        0.02350968417421373, 0.06684546924474312, 0.174129456729642;
    bench.published_objective = -0.634130666;
    bench.published_sv_classical.resize(6);
    bench.published_sv_classical << 6182.0, 9.44, 8.13, 2.46, 0.86, 1.09e-3;
    bench.published_sv_extended.resize(6);
    bench.published_sv_extended << 6189.0, 12.30, 8.23, 2.49, 0.86, 1.09e-3;
    bench.published_kappa_classical = 5.67e6;
    bench.published_kappa_extended = 5.67e6;
    bench.default_start.resize(6);
    bench.default_start << -50.9, -1.94, -0.693, 0.0235, 0.0668, 0.174;
    bench.default_grid.axes = {{"p1", -10.0, 10.0, 4}, {"p2", -10.0, 10.0, 4},
                               {"p3", -10.0, 10.0, 4}, {"t1", 0.0, 0.2, 5},
                               {"t2", 0.0, 0.2, 5},    {"T", 0.0, 0.2, 5}};
    return bench;
}

const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names = {"fishing", "regulator", "goddard"};
    return names;
}

BenchmarkCase make_benchmark(const std::string& family,
                             const std::map<std::string, double>& overrides) {
    if (family == "fishing") return fishing(overrides);
    if (family == "regulator") return regulator(overrides);
    if (family == "goddard") return goddard(overrides);
    throw ConfigurationError("unknown benchmark '" + family + "'");
}

}  // namespace shoot

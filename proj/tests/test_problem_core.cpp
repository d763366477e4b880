#include <doctest.h>

#include <random>

#include "shoot/benchmarks.hpp"
#include "shoot/problem.hpp"

using namespace shoot;

namespace {

ProblemDef zero_problem(int n, int m) {
    ProblemDef prob;
    prob.name = "zero";
    prob.n = n;
    prob.m = m;
    for (int i = 0; i <= m; ++i) prob.fields.push_back(VectorField::constant(Vec::Zero(n)));
    prob.cost = EndpointCost::terminal_component(n, 0);
    prob.constraints = EndpointConstraints::none();
    prob.final_time = FinalTime::fixed(1.0);
    return prob;
}

}  // namespace

TEST_CASE("zero fields give zero matrices") {
    const ProblemDef prob = zero_problem(3, 2);
    Vec x(3);
    x << 1.0, -2.0, 0.5;
    Vec u(2);
    u << 0.3, -4.0;
    const SystemMatrices ms = eval_matrices(prob, x, u);
    CHECK(ms.A.isZero(0.0));
    CHECK(ms.B.isZero(0.0));
    CHECK(ms.B1.isZero(0.0));
}

TEST_CASE("fishing system matrices") {
    const auto bench = fishing();
    Vec x(2);
    x << 70.0, 0.0;
    Vec u(1);
    u << 0.0;
    const SystemMatrices ms = eval_matrices(bench.problem, x, u);
    // drift jacobian r (1 - 2 x / k) on the stock component
    CHECK(ms.A(0, 0) == doctest::Approx(0.71 * (1.0 - 140.0 / 80.5)).epsilon(1e-14));
    // control column: stock removed at unit rate, revenue density c/x - E
    CHECK(ms.B(0, 0) == doctest::Approx(-1.0));
    CHECK(ms.B(1, 0) == doctest::Approx(17.5 / 70.0 - 1.0).epsilon(1e-14));

    // cross-check B1 against a finite difference of B along the flow
    const double h = 1e-6;
    const Vec xdot = drift(bench.problem, x, u);
    const Mat Bp = eval_matrices(bench.problem, x + h * xdot, u).B;
    const Mat Bm = eval_matrices(bench.problem, x - h * xdot, u).B;
    const Mat dB = (Bp - Bm) / (2.0 * h);
    CHECK((ms.B1 - (ms.A * ms.B - dB)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("regulator system matrices") {
    const auto bench = regulator();
    Vec x(3);
    x << 0.4, -0.2, 1.0;
    Vec u(1);
    u << 0.7;
    const SystemMatrices ms = eval_matrices(bench.problem, x, u);
    CHECK(ms.B(0, 0) == 0.0);
    CHECK(ms.B(1, 0) == 1.0);
    // f1 constant, so B1 = A B exactly; first components (1, 0)
    CHECK(ms.B1(0, 0) == doctest::Approx(1.0));
    CHECK(ms.B1(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("eval_point with zero costate") {
    const auto bench = fishing();
    Vec x(2);
    x << 55.0, 3.0;
    Vec u(1);
    u << 0.4;
    const PontryaginPoint pt = eval_point(bench.problem, x, RowVec::Zero(2), u);
    CHECK(pt.H == 0.0);
    CHECK(pt.Phi.isZero(0.0));
    CHECK(pt.Phi_dot.isZero(0.0));
}

TEST_CASE("eval_point formulas on the benchmarks") {
    SUBCASE("regulator: Phi = p2, H = running cost + p1 x2 + p2 u") {
        const auto bench = regulator();
        Vec x(3);
        x << 0.3, -0.8, 0.1;
        RowVec p(3);
        p << 1.2, -0.4, 1.0;
        Vec u(1);
        u << 0.25;
        const PontryaginPoint pt = eval_point(bench.problem, x, p, u);
        CHECK(pt.Phi[0] == doctest::Approx(-0.4).epsilon(1e-14));
        const double H = 0.5 * (x[0] * x[0] + x[1] * x[1]) + 1.2 * x[1] + (-0.4) * u[0];
        CHECK(pt.H == doctest::Approx(H).epsilon(1e-14));
        // Phi_dot = -p1 - x2 for the double integrator
        CHECK(pt.Phi_dot[0] == doctest::Approx(-1.2 - (-0.8)).epsilon(1e-13));
    }
    SUBCASE("fishing: Phi = c/x - E - p per unit fishing rate") {
        const auto bench = fishing();
        Vec x(2);
        x << 49.0, 0.0;
        RowVec p(2);
        p << -0.6, 1.0;
        Vec u(1);
        u << 10.0;
        const PontryaginPoint pt = eval_point(bench.problem, x, p, u);
        CHECK(pt.Phi[0] == doctest::Approx(17.5 / 49.0 - 1.0 + 0.6).epsilon(1e-13));
    }
}

TEST_CASE("singular control closed forms") {
    SUBCASE("regulator: u = x1") {
        const auto bench = regulator();
        Vec x(3);
        x << 0.37, -0.37, 0.2;
        RowVec p(3);
        p << 0.37, 0.0, 1.0;
        const Vec u = singular_control(bench.problem, x, p, {0}, Vec::Zero(1));
        CHECK(u[0] == doctest::Approx(0.37).epsilon(1e-14));
    }
    SUBCASE("fishing: sustainable rate at the singular equilibrium") {
        const auto bench = fishing();
        const double c = 17.5, k = 80.5, E = 1.0, r = 0.71;
        const double xs = 0.5 * (c / E + k);  // where Phi and Phi_dot both vanish
        const double ps = c / xs - E;
        Vec x(2);
        x << xs, 0.0;
        RowVec p(2);
        p << ps, 1.0;
        const Vec u = singular_control(bench.problem, x, p, {0}, Vec::Zero(1));
        CHECK(u[0] == doctest::Approx(r * xs * (1.0 - xs / k)).epsilon(1e-12));
    }
}

TEST_CASE("generic resolver agrees with the closed forms") {
    std::mt19937 rng(20240817);
    SUBCASE("fishing") {
        auto bench = fishing();
        ProblemDef generic = bench.problem;
        generic.closed_form_singular = nullptr;
        std::uniform_real_distribution<double> ux(25.0, 75.0), up(-0.9, -0.1);
        for (int trial = 0; trial < 100; ++trial) {
            Vec x(2);
            x << ux(rng), 0.0;
            RowVec p(2);
            p << up(rng), 1.0;
            const Vec a = singular_control(bench.problem, x, p, {0}, Vec::Zero(1));
            const Vec b = singular_control(generic, x, p, {0}, Vec::Zero(1));
            CHECK(std::abs(a[0] - b[0]) <= 1e-9 * (1.0 + std::abs(a[0])));
        }
    }
    SUBCASE("regulator") {
        auto bench = regulator();
        ProblemDef generic = bench.problem;
        generic.closed_form_singular = nullptr;
        std::uniform_real_distribution<double> uu(-1.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            Vec x(3);
            x << uu(rng), uu(rng), uu(rng);
            RowVec p(3);
            p << uu(rng), uu(rng), 1.0;
            const Vec a = singular_control(bench.problem, x, p, {0}, Vec::Zero(1));
            const Vec b = singular_control(generic, x, p, {0}, Vec::Zero(1));
            CHECK(std::abs(a[0] - b[0]) <= 1e-9 * (1.0 + std::abs(a[0])));
        }
    }
}

TEST_CASE("switching_accel is affine in the control") {
    const auto bench = goddard();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ur(1.0, 1.01), uv(0.01, 0.2), um(0.5, 1.0),
        up(-60.0, 5.0), uu(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        Vec x(3);
        x << ur(rng), uv(rng), um(rng);
        RowVec p(3);
        p << up(rng), up(rng), up(rng);
        Vec u1(1), u2(1);
        u1 << uu(rng);
        u2 << uu(rng);
        const RowVec a = switching_accel(bench.problem, x, p, u1);
        const RowVec b = switching_accel(bench.problem, x, p, u2);
        const RowVec mid = switching_accel(bench.problem, x, p, 0.5 * (u1 + u2));
        const double scale = 1.0 + a.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
        CHECK((mid - 0.5 * (a + b)).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
}

TEST_CASE("degenerate problem trips the order-two resolver") {
    // scalar problem with xdot = x + u and a plain terminal cost: u never
    // shows up in the second derivative of the switching function
    ProblemDef prob;
    prob.name = "degenerate";
    prob.n = 1;
    prob.m = 1;
    prob.fields = {VectorField::linear(Mat::Identity(1, 1)), VectorField::constant(Vec::Ones(1))};
    prob.cost.value = [](const Vec&, const Vec& xT) { return xT[0] * xT[0]; };
    prob.cost.grad_x0 = [](const Vec&, const Vec&) { return Vec::Zero(1); };
    prob.cost.grad_xT = [](const Vec&, const Vec& xT) {
        Vec g(1);
        g[0] = 2.0 * xT[0];
        return g;
    };
    prob.constraints = EndpointConstraints::none();
    prob.final_time = FinalTime::fixed(1.0);

    Vec x = Vec::Ones(1);
    RowVec p = RowVec::Ones(1);
    CHECK_THROWS_AS(singular_control(prob, x, p, {0}, Vec::Zero(1)), LegendreClebschViolation);
}

TEST_CASE("benchmark derivatives match finite differences") {
    std::mt19937 rng(99);
    SUBCASE("fishing") {
        const auto bench = fishing();
        std::uniform_real_distribution<double> ux(20.0, 80.0), uc(-5.0, 5.0);
        std::vector<Vec> probes;
        for (int i = 0; i < 8; ++i) {
            Vec x(2);
            x << ux(rng), uc(rng);
            probes.push_back(x);
        }
        CHECK(check_field_derivatives(bench.problem, probes) < 1e-5);
    }
    SUBCASE("regulator") {
        const auto bench = regulator();
        std::uniform_real_distribution<double> uc(-2.0, 2.0);
        std::vector<Vec> probes;
        for (int i = 0; i < 8; ++i) {
            Vec x(3);
            x << uc(rng), uc(rng), uc(rng);
            probes.push_back(x);
        }
        CHECK(check_field_derivatives(bench.problem, probes) < 1e-5);
    }
    SUBCASE("goddard") {
        const auto bench = goddard();
        std::uniform_real_distribution<double> ur(1.0, 1.01), uv(0.0, 0.2), um(0.4, 1.0);
        std::vector<Vec> probes;
        for (int i = 0; i < 8; ++i) {
            Vec x(3);
            x << ur(rng), uv(rng), um(rng);
            probes.push_back(x);
        }
        CHECK(check_field_derivatives(bench.problem, probes) < 1e-5);
    }
}

TEST_CASE("eval_matrices rejects fields without jacobians") {
    ProblemDef prob = zero_problem(2, 1);
    prob.fields[1].jacobian = nullptr;
    Vec x = Vec::Zero(2), u = Vec::Zero(1);
    CHECK_THROWS_AS(eval_matrices(prob, x, u), ConfigurationError);
}

TEST_CASE("legendre_clebsch matrix of the regulator is the identity") {
    const auto bench = regulator();
    Vec x(3);
    x << 0.2, -0.1, 0.0;
    RowVec p(3);
    p << 0.5, 0.1, 1.0;
    Vec u(1);
    u << 0.2;
    const Mat R = legendre_clebsch_matrix(bench.problem, x, p, u);
    REQUIRE(R.rows() == 1);
    CHECK(R(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

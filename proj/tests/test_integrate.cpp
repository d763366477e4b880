#include <doctest.h>

#include <cmath>

#include "shoot/benchmarks.hpp"
#include "shoot/integrate.hpp"

using namespace shoot;

namespace {

IntegrationOptions recorded(int steps = 500) {
    IntegrationOptions opts;
    opts.total_steps = steps;
    opts.record_samples = true;
    return opts;
}

std::vector<double> breakpoints_for(const BenchmarkCase& bench) {
    std::vector<double> bp{0.0};
    const Vec& nu = bench.published_solution;
    const int n_switch = bench.structure.num_arcs - 1;
    const int at = nu.size() - n_switch - (bench.problem.final_time.is_free ? 1 : 0);
    for (int k = 0; k < n_switch; ++k) bp.push_back(nu[at + k]);
    bp.push_back(bench.problem.final_time.is_free ? nu[nu.size() - 1] : bench.problem.final_time.value);
    return bp;
}

Vec initial_state(const BenchmarkCase& bench) {
    Vec x0(bench.problem.n);
    for (int i = 0; i < bench.problem.n; ++i) x0[i] = *bench.problem.initial_pin(i);
    return x0;
}

RowVec initial_costate(const BenchmarkCase& bench) {
    RowVec p0(bench.problem.n);
    int at = 0;
    for (int i = 0; i < bench.problem.n; ++i)
        p0[i] = (i == bench.problem.cost_state) ? 1.0 : bench.published_solution[at++];
    return p0;
}

}  // namespace

TEST_CASE("zero dynamics keep state and costate frozen") {
    ProblemDef prob;
    prob.name = "zero";
    prob.n = 2;
    prob.m = 1;
    prob.fields = {VectorField::constant(Vec::Zero(2)), VectorField::constant(Vec::Zero(2))};
    prob.cost = EndpointCost::terminal_component(2, 0);
    prob.constraints = EndpointConstraints::none();
    prob.final_time = FinalTime::fixed(3.0);

    ControlStructure st;
    st.num_arcs = 3;
    st.modes = {{{ArcMode::Value, 0.4}}, {{ArcMode::Value, -1.0}}, {{ArcMode::Value, 0.0}}};

    Vec x0(2);
    x0 << 1.5, -2.5;
    RowVec p0(2);
    p0 << 0.25, 4.0;
    const TrajectoryRecord rec = integrate_arcs(prob, st, {0.0, 1.0, 2.0, 3.0}, x0, p0, recorded());
    for (const auto& arc : rec.arcs) {
        for (const auto& s : arc.samples) {
            CHECK(s.x == x0);
            CHECK(s.p == p0);
        }
    }
}

TEST_CASE("fourth-order convergence on the benchmarks") {
    auto order_for = [](const BenchmarkCase& bench) {
        const auto bp = breakpoints_for(bench);
        const Vec x0 = initial_state(bench);
        const RowVec p0 = initial_costate(bench);
        IntegrationOptions ref;
        ref.total_steps = 16000;
        const Vec xref = integrate_arcs(bench.problem, bench.structure, bp, x0, p0, ref).final_state();
        double err[3];
        int idx = 0;
        for (int steps : {500, 1000, 2000}) {
            IntegrationOptions opts;
            opts.total_steps = steps;
            const Vec xT = integrate_arcs(bench.problem, bench.structure, bp, x0, p0, opts).final_state();
            err[idx++] = (xT - xref).cwiseAbs().maxCoeff();
        }
        const double o1 = std::log2(err[0] / err[1]);
        const double o2 = std::log2(err[1] / err[2]);
        return std::pair<double, double>{o1, o2};
    };
    for (const auto& bench : {fishing(), regulator(), goddard()}) {
        CAPTURE(bench.name);
        const auto [o1, o2] = order_for(bench);
        CHECK(o1 >= 3.7);
        CHECK(o1 <= 4.3);
        CHECK(o2 >= 3.7);
        CHECK(o2 <= 4.3);
    }
}

TEST_CASE("arc grids tile the horizon and hand over states bitwise") {
    const auto bench = fishing();
    const TrajectoryRecord rec = integrate_arcs(bench.problem, bench.structure, breakpoints_for(bench),
                                                initial_state(bench), initial_costate(bench), recorded());
    REQUIRE(rec.arcs.size() == 3);
    CHECK(rec.arcs.front().t_begin == 0.0);
    CHECK(rec.arcs.back().t_end == 10.0);
    for (std::size_t k = 0; k + 1 < rec.arcs.size(); ++k) {
        CHECK(rec.arcs[k].t_end == rec.arcs[k + 1].t_begin);
        CHECK(rec.arcs[k].exit.x == rec.arcs[k + 1].entry.x);
        CHECK(rec.arcs[k].exit.p == rec.arcs[k + 1].entry.p);
    }
    for (const auto& arc : rec.arcs) {
        REQUIRE(static_cast<int>(arc.samples.size()) == arc.steps + 1);
        const double h = (arc.t_end - arc.t_begin) / arc.steps;
        for (std::size_t s = 0; s + 1 < arc.samples.size(); ++s)
            CHECK(arc.samples[s + 1].t - arc.samples[s].t == doctest::Approx(h).epsilon(1e-12));
    }
}

TEST_CASE("step budget is split proportionally with a floor") {
    IntegrationOptions opts;
    SUBCASE("tiny arc gets the floor") {
        const auto steps = allocate_steps({0.0, 0.001, 10.0}, opts);
        CHECK(steps[0] == 10);
        CHECK(steps[1] == 500);
    }
    SUBCASE("proportional split") {
        const auto steps = allocate_steps({0.0, 2.5, 10.0}, opts);
        CHECK(steps[0] == 125);
        CHECK(steps[1] == 375);
    }
    SUBCASE("degenerate breakpoints still integrate") {
        const auto steps = allocate_steps({0.0, 0.0, 0.0}, opts);
        CHECK(steps[0] == 10);
        CHECK(steps[1] == 10);
    }
}

TEST_CASE("finite-time blow-up raises IntegrationDiverged with the time") {
    ProblemDef prob;
    prob.name = "blowup";
    prob.n = 1;
    prob.m = 1;
    VectorField f0;
    f0.value = [](const Vec& x) {
        Vec v(1);
        v[0] = x[0] * x[0];
        return v;
    };
    f0.jacobian = [](const Vec& x) {
        Mat J(1, 1);
        J(0, 0) = 2.0 * x[0];
        return J;
    };
    prob.fields = {f0, VectorField::constant(Vec::Zero(1))};
    prob.cost = EndpointCost::terminal_component(1, 0);
    prob.constraints = EndpointConstraints::none();
    prob.final_time = FinalTime::fixed(2.0);

    ControlStructure st;
    st.num_arcs = 1;
    st.modes = {{{ArcMode::Value, 0.0}}};
    Vec x0 = Vec::Ones(1);
    RowVec p0 = RowVec::Zero(1);
    try {
        integrate_arcs(prob, st, {0.0, 2.0}, x0, p0, recorded());
        FAIL("expected IntegrationDiverged");
    } catch (const IntegrationDiverged& e) {
        CHECK(e.time > 0.9);
        CHECK(e.time <= 2.0);
    }
}

TEST_CASE("out-of-order breakpoints integrate mechanically") {
    const auto bench = fishing();
    Vec x0 = initial_state(bench);
    RowVec p0 = initial_costate(bench);
    // t1 > t2: the middle arc runs backwards; the result just has to be finite
    const TrajectoryRecord rec =
        integrate_arcs(bench.problem, bench.structure, {0.0, 7.0, 3.0, 10.0}, x0, p0, recorded());
    CHECK(rec.final_state().allFinite());
}

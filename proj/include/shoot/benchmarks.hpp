#pragma once

#include <map>
#include <string>
#include <vector>

#include "shoot/batch.hpp"
#include "shoot/problem.hpp"
#include "shoot/structure.hpp"

namespace shoot {

// A ready-made problem with its assumed arc structure, the published solution
// for regression, and the default batch grid.
struct BenchmarkCase {
    std::string name;
    std::string family;
    std::map<std::string, double> params;
    ProblemDef problem;
    ControlStructure structure;
    Vec published_solution;
    double published_objective = 0.0;
    Vec published_sv_classical, published_sv_extended;
    double published_kappa_classical = 0.0, published_kappa_extended = 0.0;
    Vec default_start;
    GridSpec default_grid;
};

// Net-revenue fishing problem: one logistic fish stock, fishing effort in
// [0,1], revenue integrand accumulated in an augmented state. Structure
// upper-singular-upper.
BenchmarkCase fishing(const std::map<std::string, double>& overrides = {});

// Linear-quadratic regulator with acceleration bounds: double integrator,
// quadratic running cost in an augmented state. Structure lower-singular
// with the singular arc reaching the final time.
BenchmarkCase regulator(const std::map<std::string, double>& overrides = {});

// Vertical rocket ascent (altitude, speed, mass) with quadratic drag,
// maximizing final mass with the final time free. Structure
// upper-singular-lower; the singular control comes from the generic resolver.
BenchmarkCase goddard(const std::map<std::string, double>& overrides = {});

const std::vector<std::string>& benchmark_names();
BenchmarkCase make_benchmark(const std::string& family,
                             const std::map<std::string, double>& overrides = {});

}  // namespace shoot

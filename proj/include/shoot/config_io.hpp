#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "shoot/benchmarks.hpp"

namespace shoot {

// Flat sectioned text format describing an instance of a registered problem
// family: dimensions and constants under [params], the arc table under
// [structure], and the published solution under [solution]. The dynamics
// themselves are code-registered; a config can only instantiate a known
// family with new parameter values.
struct ProblemConfig {
    std::string family;
    std::map<std::string, double> params;
    std::vector<std::vector<std::string>> arc_modes;  // [arc][component], may be empty
    Vec solution;                                     // may be empty
    double objective = std::numeric_limits<double>::quiet_NaN();
};

ProblemConfig read_problem_config(std::istream& is);
ProblemConfig read_problem_config(const std::string& path);

void write_problem_config(std::ostream& os, const BenchmarkCase& bench);
void write_problem_config(const std::string& path, const BenchmarkCase& bench);

// Build the benchmark case described by the config (family defaults merged
// with the config's parameters, structure and solution overridden if given).
BenchmarkCase instantiate(const ProblemConfig& cfg);

}  // namespace shoot

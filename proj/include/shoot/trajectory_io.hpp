#pragma once

#include <iosfwd>
#include <string>

#include "shoot/integrate.hpp"

namespace shoot {

// Columns t, x1.., p1.., u1.., Phi1.., Phidot1.., H with one header row and
// full decimal precision. Arc boundaries appear as two rows sharing t (the
// left and right limits of the control-dependent columns).
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec);
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec);

// Parse a trajectory CSV back into arcs (split where t repeats).
// Dimensions are recovered from the header. Throws ConfigurationError on a
// malformed file.
TrajectoryRecord read_trajectory_csv(std::istream& is);
TrajectoryRecord read_trajectory_csv(const std::string& path);

// Emit a small matplotlib script with state / control / switching-function
// panels reading `csv_name` from its own directory.
void write_plot_script(const std::string& path, const std::string& csv_name, int n, int m);

}  // namespace shoot

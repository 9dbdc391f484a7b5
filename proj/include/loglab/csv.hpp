#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "loglab/integrate.hpp"
#include "loglab/timescale.hpp"

namespace loglab {

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// Header t,x,u; one row per sample; LF line endings. Footers are comment
// lines prefixed with '#': the extras first, then an extinction marker
// when the run was truncated.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<std::string>& extra_footers = {});

// Header t,x,flag. Rows that violate positivity carry the flag VIOLATION;
// an undefined or non-finite step truncates the data and leaves a comment
// footer instead.
void write_orbit_csv(std::ostream& out, const MapKind& kind, const OrbitReport& report);

} // namespace loglab

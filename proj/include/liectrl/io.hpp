#pragma once

#include "liectrl/control_sets.hpp"
#include "liectrl/system.hpp"

#include <string>
#include <vector>

namespace liectrl {

/// Shortest representation with 17 significant digits; round-trips doubles
/// exactly, which the byte-identical-output contract relies on.
std::string fmt17(double v);

/// Trajectory CSV: header t,g11,g12,g21,g22 and one row per sample.
std::string trajectory_csv(const std::vector<std::pair<double, GroupElement>>& samples);

/// Cloud CSV: t,g11,g12,g21,g22,control with the producing control
/// serialized as tau:c;tau:c;...
std::string cloud_csv(const ReachCloud& cloud);

/// Cylinder CSV: theta,x rows (theta in radians, [0, 2pi)).
std::string cylinder_csv(const std::vector<CylinderPoint>& points);

/// Circle arc CSV: label,lo,hi.
std::string arcs_csv(const std::vector<CircleArc>& arcs);

/// Cell-set CSV: label,i_theta,i_x,theta_center,x_center.
std::string cell_sets_csv(const std::vector<ControlSetApprox>& sets, const CellGrid& grid);

/// Static SVG of the unrolled window [0, 2pi] x [x_min, x_max]: one fill
/// color per labeled set, marked points at (0, 0) and (pi, 0).
std::string cell_sets_svg(const std::vector<ControlSetApprox>& sets, const CellGrid& grid);

/// Write text to path, creating parent directories.
void write_file(const std::string& path, const std::string& content);

} // namespace liectrl

#pragma once

#include "liectrl/cylinder.hpp"

#include <optional>
#include <string>

namespace liectrl {

/// Uniform cell partition of the window S^1 x [x_min, x_max). Cells are
/// half-open in both coordinates with theta wrapped; n_theta must be even
/// so the component-swap map sends cells to cells exactly.
struct CellGrid {
    int n_theta;
    int n_x;
    double x_min;
    double x_max;

    CellGrid(int n_theta_, int n_x_, double x_min_, double x_max_);

    double dtheta() const;
    double dx() const;
    int n_cells() const { return n_theta * n_x; }
    int sink_id() const { return n_cells(); }

    int cell_id(int i_theta, int i_x) const { return i_theta * n_x + i_x; }
    std::pair<int, int> cell_coords(int id) const { return {id / n_x, id % n_x}; }

    /// Cell containing a point, or sink_id() when x leaves the window.
    /// v and -v land in cells exactly n_theta/2 apart by construction.
    int locate(const Eigen::Vector2d& v, double x) const;
    int locate(const CylinderPoint& p) const { return locate(p.v(), p.x()); }

    /// Deterministic sample point at fractional offsets inside a cell.
    /// Lower-half-circle samples are exact negations of their upper-half
    /// counterparts, which keeps the reach graph exactly swap-symmetric.
    CylinderPoint sample_point(int i_theta, int i_x, double f_theta, double f_x) const;

    CylinderPoint cell_center(int id) const;
    /// Image of a cell under the component-swap map.
    int antipodal_cell(int id) const;
};

/// Directed cell-to-cell transition graph; node n_cells() is the sink
/// ("left the window"). Every cell has at least one outgoing edge.
struct ReachGraph {
    CellGrid grid;
    std::vector<std::vector<int>> out;
};

/// Strongly connected component of the reach graph kept as a control-set
/// approximation: label, sorted member cells, and the marked anchor points
/// it contains.
struct ControlSetApprox {
    std::string label;
    std::vector<int> cells;
    std::vector<std::string> contains;

    bool has_cell(int id) const;
};

struct EscapeWitness {
    int cell;
    double control;
    double tau;
    CylinderPoint target;
    int target_cell;
};

struct ProbeResult {
    std::optional<EscapeWitness> witness;
    long sink_escapes = 0;
    long evaluations = 0;
};

/// Attractor direction of H + uX on the circle: angle of the positive
/// eigenvector (orientation as in SpectralData). Rejects non-hyperbolic
/// H + uX.
double circle_attractor(const LinearSystemSpec& sys, double u);

/// Repeller direction: angle of the negative eigenvector.
double circle_repeller(const LinearSystemSpec& sys, double u);

struct CircleArc {
    std::string label;
    double lo;
    double hi;

    bool contains(double angle) const;
};

/// The four circle control sets swept out by the attractor/repeller
/// directions of H + uX over u in [-rho, rho] (n_samples values including
/// the endpoints). The arc containing angle 0 is labeled "D1-circle".
std::vector<CircleArc> circle_control_sets(const LinearSystemSpec& sys, double rho,
                                           int n_samples);

/// Cell-mapping transition graph: from every cell, pts_per_cell stencil
/// points flow for time tau under each control value; each landing cell
/// (or the sink) contributes an edge. Deterministic in its inputs;
/// cells are processed in parallel and merged in ascending order.
/// The control set must contain -rho, 0 and rho.
ReachGraph build_reach_graph(const LinearSystemSpec& sys, const CellGrid& grid, double tau,
                             const std::vector<double>& controls, int pts_per_cell);
/// Serial reference implementation (identical output).
ReachGraph build_reach_graph_serial(const LinearSystemSpec& sys, const CellGrid& grid,
                                    double tau, const std::vector<double>& controls,
                                    int pts_per_cell);

/// Strongly connected components with at least interior_threshold cells and
/// no sink membership, as control-set approximations. The component holding
/// the cell of (theta=0, x=0) is labeled "D1", the one holding (pi, 0) is
/// "D-1"; the rest get "scc<k>" in a deterministic order.
std::vector<ControlSetApprox> extract_control_sets(const ReachGraph& graph,
                                                   int interior_threshold = 4);

/// Hausdorff distance, in cells, between the component-swap image of A and
/// B. Cell distance is the Chebyshev distance of cell indices with theta
/// wrapped.
int symmetry_check(const ControlSetApprox& a, const ControlSetApprox& b, const CellGrid& grid);

/// Search for an escape from D: a boundary cell, control value and step
/// time whose flow lands in a window cell outside D. Flows into the sink
/// are tallied separately and are not witnesses. Enumeration is
/// deterministic and capped at `trials` flow evaluations.
ProbeResult invariance_probe(const LinearSystemSpec& sys, const ControlSetApprox& d,
                             const CellGrid& grid, long trials);

} // namespace liectrl

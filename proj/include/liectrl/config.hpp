#pragma once

#include "liectrl/control_sets.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace liectrl {

/// Tolerance knobs exposed through the config file.
struct Tolerances {
    double struct_abs = tol::kStructAbs; // structural invariants (absolute)
    double group_rel = tol::kGroupRel;   // group-level identities (relative)
    double zero_eig = tol::kZeroEig;     // eigenvalue zero classification
    double steer = 0.05;                 // steering success distance
};

/// Full run configuration. Defaults encode the shipped sl(2) example:
/// diagonal drift H0 = diag(1, -1), one control field X0 = [[1,1],[1/2,-1]],
/// rho = 0.1, a 256 x 128 grid on x in [-3, 3].
struct RunConfig {
    int n = 2;
    Eigen::MatrixXd drift;           // drift generator X (flow e^{tX} g e^{-tX})
    Eigen::MatrixXd h;               // hyperbolic part used by the cylinder analysis
    std::vector<Eigen::MatrixXd> y;  // control fields
    double rho = 0.1;
    double tau = 0.25;
    std::vector<double> controls;    // control grid for the cell mapping
    int n_theta = 256;
    int n_x = 128;
    double x_min = -3.0;
    double x_max = 3.0;
    int pts_per_cell = 5;
    int interior_threshold = 4;
    std::uint64_t seed = 20250809;
    std::string out_dir = "out";
    Tolerances tolerances;

    static RunConfig defaults();

    LinearSystemSpec system() const;
    /// System whose drift is the configured hyperbolic part (the quotient
    /// analysis runs on it).
    LinearSystemSpec cylinder_system() const;
    CellGrid grid() const;
};

/// Strict line-based parser: `key = value` entries, '#' comments, matrices
/// as row-major real lists `[a, b, c, d]`, repeatable key Y. Unknown keys,
/// missing required keys and invariant violations raise std::runtime_error
/// with file:line anchors.
RunConfig parse_config(const std::string& path);

/// The shipped default configuration, serialized.
std::string default_config_text();

} // namespace liectrl

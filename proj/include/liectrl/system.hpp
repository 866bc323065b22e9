#pragma once

#include "liectrl/algebra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace liectrl {

/// Linear control system on SL(n): drift is the linear field with flow
/// g -> exp(tX) g exp(-tX), controls are right-invariant fields Y_j scaled
/// by u_j in [-rho, rho].
struct LinearSystemSpec {
    AlgebraElement drift;
    std::vector<AlgebraElement> controls;
    ControlRange range;

    LinearSystemSpec(AlgebraElement drift_, std::vector<AlgebraElement> controls_,
                     ControlRange range_);

    Eigen::Index dim() const { return drift.dim(); }
    /// System with reversed time: drift and control fields negated.
    LinearSystemSpec time_reversed() const;
};

/// Piecewise-constant admissible control: ordered (duration, value)
/// segments, played left to right. Concatenation is list concatenation.
struct PiecewiseControl {
    struct Segment {
        double duration;
        Eigen::VectorXd value;
    };

    std::vector<Segment> segments;

    PiecewiseControl() = default;
    explicit PiecewiseControl(std::vector<Segment> segs);
    /// Single-channel convenience: one segment (duration, value).
    static PiecewiseControl constant(double duration, double value);

    double total_duration() const;
    bool empty() const { return segments.empty(); }

    PiecewiseControl concatenated(const PiecewiseControl& tail) const;
    /// Segments in reverse order (the time-reversed playback).
    PiecewiseControl reversed() const;
    /// Control restricted/extended to exactly duration t: longer controls
    /// are truncated, shorter ones get a zero-control tail.
    PiecewiseControl fitted_to(double t, int channels) const;

    /// "tau:c;tau:c;..." (multi-channel values comma separated).
    std::string serialize() const;
    static PiecewiseControl parse(const std::string& text);
};

/// One sampled reachable point together with the control that produced it.
struct CloudPoint {
    GroupElement point;
    PiecewiseControl control;
};

/// Sampled reachable set from a base point within a time horizon.
struct ReachCloud {
    GroupElement base;
    double horizon;
    std::vector<CloudPoint> points;
};

struct SteerOutcome {
    bool success = false;
    double distance = 0.0;
    PiecewiseControl control;
    long trials = 0;
};

/// Flow of the drift field: exp(tX) g exp(-tX). Fixes the identity and is a
/// group automorphism for each t.
GroupElement linear_flow(const LinearSystemSpec& sys, double t, const GroupElement& g);

/// Closed-form solution under constant control c:
/// exp(t(X + sum_j c_j Y_j)) g exp(-tX). Rejects out-of-range controls.
GroupElement solve_constant(const LinearSystemSpec& sys, double t, const GroupElement& g,
                            const Eigen::VectorXd& c);
GroupElement solve_constant(const LinearSystemSpec& sys, double t, const GroupElement& g,
                            double c);

/// Piecewise solution: left-to-right composition of solve_constant over the
/// segments. The empty control returns g.
GroupElement solve(const LinearSystemSpec& sys, const GroupElement& g,
                   const PiecewiseControl& u);

/// Deterministic sampled reachable cloud: n_points piecewise-constant
/// controls with 1..8 segments, total duration <= horizon, values uniform
/// in Omega. The random stream of sample i depends only on (seed, i), so
/// the output is schedule-independent; sampling runs in parallel.
ReachCloud reachable_cloud(const LinearSystemSpec& sys, const GroupElement& g, double horizon,
                           int n_points, std::uint64_t seed);
/// Serial reference implementation (identical output).
ReachCloud reachable_cloud_serial(const LinearSystemSpec& sys, const GroupElement& g,
                                  double horizon, int n_points, std::uint64_t seed);

/// Reachability witness search from the identity: random shooting plus
/// coordinate-wise refinement of the best candidate. Success means
/// ||solve(e, u) - target||_inf <= tolerance within the trial budget; a
/// failure is reported as a value and never implies unreachability.
SteerOutcome steer(const LinearSystemSpec& sys, const GroupElement& target, long budget,
                   std::uint64_t seed, double tolerance = 0.05);

} // namespace liectrl

#pragma once

#include "liectrl/system.hpp"

namespace liectrl {

/// Point of the cylinder S^1 x R carrying both the unit vector v and its
/// angle theta in [0, 2pi). The vector is the authoritative representation;
/// theta is derived.
class CylinderPoint {
public:
    CylinderPoint(double theta, double x);
    static CylinderPoint from_vector(const Eigen::Vector2d& v, double x);

    const Eigen::Vector2d& v() const { return v_; }
    double theta() const { return theta_; }
    double x() const { return x_; }

private:
    CylinderPoint() = default;
    friend CylinderPoint antipode(const CylinderPoint&);
    Eigen::Vector2d v_;
    double theta_ = 0.0;
    double x_ = 0.0;
};

/// Tangent vector of the cylinder at a point: dv is perpendicular to v.
struct CylinderTangent {
    Eigen::Vector2d dv;
    double dx;
};

/// Spectral data of a hyperbolic sl(2) element: positive eigenvalue lambda
/// and unit eigenvectors for +-lambda, oriented so the first nonzero
/// coordinate is positive. Carries the eigenbasis coordinate transform used
/// by the closed-form flow.
struct SpectralData {
    double lambda;
    Eigen::Vector2d v_plus;
    Eigen::Vector2d v_minus;
    Eigen::Matrix2d to_eigen;  // inverse of [v_plus v_minus]
    double cross_inner;        // <v_plus, v_minus>

    static SpectralData from_generator(const AlgebraElement& h);
};

/// Counter-clockwise rotation of v by pi/2.
Eigen::Vector2d perp(const Eigen::Vector2d& v);

/// Projection SL(2) -> S^1 x R, g = (v1, v2) -> (v1/|v1|, <v1, v2>).
/// Right multiplication by positive-diagonal matrices is killed.
CylinderPoint project(const GroupElement& g);

/// Canonical section of the projection: lift(v, x) = (v, xv + v*).
GroupElement lift(const CylinderPoint& p);

/// Vector field on the cylinder induced by a right-invariant field X.
CylinderTangent induced_vector_field(const AlgebraElement& xa, const CylinderPoint& p);

/// Closed-form flow of the induced field of a hyperbolic generator,
/// evolving eigenbasis coordinates: with v = a v+ + b v- and
/// xv + v* = c v+ + d v-, the point maps to
///   ( e^{tH}v / |e^{tH}v| , ac e^{2t lambda} + bd e^{-2t lambda} + (ad+bc) <v+,v-> ).
CylinderPoint induced_flow_closed(double t, const CylinderPoint& p, const SpectralData& spec);

/// Induced flow of the controlled system through the projection:
/// project(solve(lift(p), u fitted to t)). Requires the system to satisfy
/// the structural conditions (diagonal hyperbolic drift, uniformly
/// hyperbolic H_u, ad-rank basis) so the quotient system is well defined.
/// Controls longer than t are truncated; shorter ones get a zero tail.
CylinderPoint induced_flow(const LinearSystemSpec& sys, double t, const CylinderPoint& p,
                           const PiecewiseControl& u);

/// Component-swap homeomorphism (v, x) -> (-v, x); an exact involution.
CylinderPoint antipode(const CylinderPoint& p);

} // namespace liectrl

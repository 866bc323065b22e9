#pragma once

#include "liectrl/cylinder.hpp"
#include "liectrl/system.hpp"

namespace liectrl {

// Verification-only reference computations. They deliberately avoid the
// closed-form production paths they are used to check: the matrix RK4
// integrates the raw vector field with plain matrix arithmetic, and the
// lift-evolve-project reference goes through the group exponential instead
// of the spectral flow.

/// Fixed-step RK4 for g' = (X g - g X) + sum_j c_j Y_j g from g over [0, t].
Eigen::MatrixXd rk4_constant_control(const LinearSystemSpec& sys, double t,
                                     const Eigen::MatrixXd& g, const Eigen::VectorXd& c,
                                     double step = 1e-3);

/// Fixed-step RK4 for the induced cylinder field of a right-invariant
/// generator; the direction is renormalized after every step.
CylinderPoint rk4_induced_field(const AlgebraElement& xa, double t, const CylinderPoint& p,
                                double step = 1e-3);

/// Reference flow of the induced drift: project(exp(tH) lift(p)).
CylinderPoint lift_evolve_project(const AlgebraElement& h, double t, const CylinderPoint& p);

} // namespace liectrl

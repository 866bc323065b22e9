#include "liectrl/cylinder.hpp"

#include "liectrl/jordan.hpp"

#include <cmath>
#include <numbers>

namespace liectrl {

namespace {

double wrap_angle(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(theta, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;
    return w;
}

void require_cylinder_system(const LinearSystemSpec& sys) {
    if (sys.dim() != 2 || sys.range.m != 1) {
        throw std::invalid_argument("cylinder flow needs a single-channel sl(2) system");
    }
    const ConditionReport report =
        check_conditions(sys.drift, sys.controls.front(), sys.range.rho);
    if (!report.all()) {
        throw std::invalid_argument(
            "system does not satisfy the structural conditions for the quotient flow");
    }
}

} // namespace

CylinderPoint::CylinderPoint(double theta, double x) {
    theta_ = wrap_angle(theta);
    v_ = Eigen::Vector2d(std::cos(theta_), std::sin(theta_));
    x_ = x;
}

CylinderPoint CylinderPoint::from_vector(const Eigen::Vector2d& v, double x) {
    const double norm = v.norm();
    if (!(norm > 0.0)) {
        throw std::invalid_argument("cylinder point needs a nonzero direction vector");
    }
    CylinderPoint p;
    p.v_ = v / norm;
    p.theta_ = wrap_angle(std::atan2(p.v_.y(), p.v_.x()));
    p.x_ = x;
    return p;
}

Eigen::Vector2d perp(const Eigen::Vector2d& v) {
    return Eigen::Vector2d(-v.y(), v.x());
}

SpectralData SpectralData::from_generator(const AlgebraElement& h) {
    if (h.dim() != 2) {
        throw std::invalid_argument("spectral data is defined for sl(2) elements");
    }
    const Eigen::Matrix2d m = h.mat();
    const double det = m.determinant();
    const double scale = std::max(1.0, h.norm_inf());
    if (!(det < -1e-12 * scale * scale)) {
        throw std::invalid_argument("generator is not hyperbolic: det(H) must be negative");
    }
    SpectralData s;
    s.lambda = std::sqrt(-det);

    const double a = m(0, 0), b = m(0, 1), c = m(1, 0);
    auto eigenvector = [&](double lam) {
        // (H - lam) kernel; pick the better-conditioned closed-form row.
        Eigen::Vector2d w1(b, lam - a);
        Eigen::Vector2d w2(lam + a, c);
        Eigen::Vector2d w = w1.norm() >= w2.norm() ? w1 : w2;
        w.normalize();
        if (w.x() < 0.0 || (w.x() == 0.0 && w.y() < 0.0)) w = -w;
        return w;
    };
    s.v_plus = eigenvector(s.lambda);
    s.v_minus = eigenvector(-s.lambda);

    Eigen::Matrix2d basis;
    basis.col(0) = s.v_plus;
    basis.col(1) = s.v_minus;
    s.to_eigen = basis.inverse();
    s.cross_inner = s.v_plus.dot(s.v_minus);
    return s;
}

CylinderPoint project(const GroupElement& g) {
    if (g.dim() != 2) {
        throw std::invalid_argument("projection is defined for SL(2) elements");
    }
    const Eigen::Vector2d v1 = g.mat().col(0);
    const Eigen::Vector2d v2 = g.mat().col(1);
    return CylinderPoint::from_vector(v1, v1.dot(v2));
}

GroupElement lift(const CylinderPoint& p) {
    Eigen::Matrix2d m;
    m.col(0) = p.v();
    m.col(1) = p.x() * p.v() + perp(p.v());
    return GroupElement(m);
}

CylinderTangent induced_vector_field(const AlgebraElement& xa, const CylinderPoint& p) {
    if (xa.dim() != 2) {
        throw std::invalid_argument("induced field is defined for sl(2) elements");
    }
    const Eigen::Vector2d v = p.v();
    const Eigen::Vector2d w = xa.mat() * v;
    const Eigen::Vector2d z = p.x() * v + perp(v);
    CylinderTangent tangent;
    tangent.dv = w - w.dot(v) * v;
    tangent.dx = w.dot(z) + v.dot(xa.mat() * z);
    return tangent;
}

CylinderPoint induced_flow_closed(double t, const CylinderPoint& p, const SpectralData& spec) {
    const Eigen::Vector2d v = p.v();
    const Eigen::Vector2d z = p.x() * v + perp(v);
    const Eigen::Vector2d ab = spec.to_eigen * v;
    const Eigen::Vector2d cd = spec.to_eigen * z;
    const double ep = std::exp(t * spec.lambda);
    const double em = std::exp(-t * spec.lambda);
    const Eigen::Vector2d w = ab.x() * ep * spec.v_plus + ab.y() * em * spec.v_minus;
    const double x_new = ab.x() * cd.x() * ep * ep + ab.y() * cd.y() * em * em +
                         (ab.x() * cd.y() + ab.y() * cd.x()) * spec.cross_inner;
    return CylinderPoint::from_vector(w, x_new);
}

CylinderPoint induced_flow(const LinearSystemSpec& sys, double t, const CylinderPoint& p,
                           const PiecewiseControl& u) {
    require_cylinder_system(sys);
    const PiecewiseControl fitted = u.fitted_to(t, sys.range.m);
    return project(solve(sys, lift(p), fitted));
}

CylinderPoint antipode(const CylinderPoint& p) {
    // The stored vector is negated without renormalizing, so applying the
    // map twice restores the point bit for bit.
    CylinderPoint q;
    q.v_ = -p.v_;
    q.theta_ = wrap_angle(std::atan2(q.v_.y(), q.v_.x()));
    q.x_ = p.x_;
    return q;
}

} // namespace liectrl

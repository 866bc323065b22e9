#include "liectrl/oracles.hpp"

#include <cmath>

namespace liectrl {

Eigen::MatrixXd rk4_constant_control(const LinearSystemSpec& sys, double t,
                                     const Eigen::MatrixXd& g, const Eigen::VectorXd& c,
                                     double step) {
    const Eigen::MatrixXd x = sys.drift.mat();
    Eigen::MatrixXd cy = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    for (std::size_t j = 0; j < sys.controls.size(); ++j) {
        cy += c(static_cast<Eigen::Index>(j)) * sys.controls[j].mat();
    }
    auto field = [&](const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
        return x * m - m * x + cy * m;
    };

    Eigen::MatrixXd y = g;
    const double sign = t >= 0.0 ? 1.0 : -1.0;
    double remaining = std::abs(t);
    while (remaining > 0.0) {
        const double h = sign * std::min(step, remaining);
        const Eigen::MatrixXd k1 = field(y);
        const Eigen::MatrixXd k2 = field(y + 0.5 * h * k1);
        const Eigen::MatrixXd k3 = field(y + 0.5 * h * k2);
        const Eigen::MatrixXd k4 = field(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        remaining -= std::abs(h);
    }
    return y;
}

CylinderPoint rk4_induced_field(const AlgebraElement& xa, double t, const CylinderPoint& p,
                                double step) {
    struct State {
        Eigen::Vector2d v;
        double x;
    };
    auto field = [&](const State& s) {
        const CylinderPoint q = CylinderPoint::from_vector(s.v, s.x);
        const CylinderTangent tangent = induced_vector_field(xa, q);
        return State{tangent.dv, tangent.dx};
    };

    State y{p.v(), p.x()};
    const double sign = t >= 0.0 ? 1.0 : -1.0;
    double remaining = std::abs(t);
    while (remaining > 0.0) {
        const double h = sign * std::min(step, remaining);
        const State k1 = field(y);
        const State k2 = field({y.v + 0.5 * h * k1.v, y.x + 0.5 * h * k1.x});
        const State k3 = field({y.v + 0.5 * h * k2.v, y.x + 0.5 * h * k2.x});
        const State k4 = field({y.v + h * k3.v, y.x + h * k3.x});
        y.v += (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        y.x += (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        y.v.normalize();
        remaining -= std::abs(h);
    }
    return CylinderPoint::from_vector(y.v, y.x);
}

CylinderPoint lift_evolve_project(const AlgebraElement& h, double t, const CylinderPoint& p) {
    const GroupElement g = lift(p);
    const GroupElement evolved(group_exp(h, t).mat() * g.mat());
    return project(evolved);
}

} // namespace liectrl

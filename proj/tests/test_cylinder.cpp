#include "liectrl/cylinder.hpp"

#include "liectrl/oracles.hpp"
#include "test_helpers.hpp"

#include <doctest.h>
#include <numbers>

using namespace liectrl;
using liectrl::testing::inf_gap;
using liectrl::testing::random_sl2;

namespace {

constexpr double kPi = std::numbers::pi;

const AlgebraElement kH0 = AlgebraElement::sl2(1.0, 0.0, 0.0);

LinearSystemSpec example_system() {
    return LinearSystemSpec(kH0, {AlgebraElement::sl2(1.0, 1.0, 0.5)}, ControlRange(0.1, 1));
}

double point_gap(const CylinderPoint& a, const CylinderPoint& b) {
    return std::max((a.v() - b.v()).cwiseAbs().maxCoeff(), std::abs(a.x() - b.x()));
}

PiecewiseControl random_control(std::mt19937_64& rng, int max_segments, double rho) {
    std::uniform_int_distribution<int> nseg(1, max_segments);
    std::uniform_real_distribution<double> dur(0.1, 0.7);
    std::uniform_real_distribution<double> val(-rho, rho);
    PiecewiseControl u;
    const int k = nseg(rng);
    for (int i = 0; i < k; ++i) {
        u.segments.push_back({dur(rng), Eigen::VectorXd::Constant(1, val(rng))});
    }
    return u;
}

} // namespace

TEST_SUITE_BEGIN("cylinder");

TEST_CASE("projection of basic elements") {
    const CylinderPoint pe = project(GroupElement::identity(2));
    CHECK(pe.theta() == 0.0);
    CHECK(pe.x() == 0.0);

    // Right A-invariance kills diagonal factors.
    const CylinderPoint pd = project(GroupElement(Eigen::Matrix2d{{2.0, 0.0}, {0.0, 0.5}}));
    CHECK(point_gap(pd, pe) <= 1e-12);

    const CylinderPoint pu = project(GroupElement(Eigen::Matrix2d{{1.0, 1.0}, {0.0, 1.0}}));
    CHECK(pu.theta() == 0.0);
    CHECK(pu.x() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("projection is right A-invariant on random elements") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> sdist(0.2, 5.0);
    for (int i = 0; i < 100; ++i) {
        const GroupElement g = group_exp(random_sl2(rng, 0.8));
        const double s = sdist(rng);
        const GroupElement a(Eigen::Matrix2d{{s, 0.0}, {0.0, 1.0 / s}});
        CHECK(point_gap(project(g * a), project(g)) <= 1e-10);
    }
}

TEST_CASE("lift is a section of the projection") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> theta(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> xdist(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const CylinderPoint p(theta(rng), xdist(rng));
        const GroupElement g = lift(p);
        CHECK(g.det_error() <= 1e-12);
        CHECK(point_gap(project(g), p) <= 1e-12);
    }
}

TEST_CASE("spectral data of the example generators") {
    const SpectralData s0 = SpectralData::from_generator(kH0);
    CHECK(s0.lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(inf_gap(s0.v_plus, Eigen::Vector2d(1.0, 0.0)) <= 1e-14);
    CHECK(inf_gap(s0.v_minus, Eigen::Vector2d(0.0, 1.0)) <= 1e-14);

    // H0 + 0.1 X0: lambda and the attractor angle from the documented
    // eigenvector (1 + u + lambda, u/2).
    const AlgebraElement hu = AlgebraElement::sl2(1.1, 0.1, 0.05);
    const SpectralData su = SpectralData::from_generator(hu);
    CHECK(su.lambda == doctest::Approx(std::sqrt(1.215)).epsilon(1e-14));
    const double angle = std::atan2(su.v_plus.y(), su.v_plus.x());
    CHECK(angle == doctest::Approx(std::atan2(0.05, 1.1 + std::sqrt(1.215))).epsilon(1e-12));

    CHECK((hu.mat() * su.v_plus - su.lambda * su.v_plus).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((hu.mat() * su.v_minus + su.lambda * su.v_minus).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK_THROWS_AS(SpectralData::from_generator(AlgebraElement::sl2(0.0, 1.0, -1.0)),
                    std::invalid_argument);
}

TEST_CASE("induced vector field") {
    // Fixed point at (e1, 0); the x-rate doubles the offset at theta = 0.
    const CylinderTangent at_e1 = induced_vector_field(kH0, CylinderPoint(0.0, 0.0));
    CHECK(at_e1.dv.cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(std::abs(at_e1.dx) <= 1e-14);

    const CylinderTangent off = induced_vector_field(kH0, CylinderPoint(0.0, 1.0));
    CHECK(off.dv.cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(off.dx == doctest::Approx(2.0).epsilon(1e-14));

    const CylinderTangent zero =
        induced_vector_field(AlgebraElement::zero(2), CylinderPoint(1.2, 0.7));
    CHECK(zero.dv.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.dx == 0.0);

    // dv stays perpendicular to v.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> theta(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> xdist(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const CylinderPoint p(theta(rng), xdist(rng));
        const AlgebraElement xa = random_sl2(rng, 1.0);
        const CylinderTangent tangent = induced_vector_field(xa, p);
        CHECK(std::abs(tangent.dv.dot(p.v())) <= 1e-12);
    }
}

TEST_CASE("induced field matches the projection derivative") {
    // Finite difference of project(exp(tX) g) at t = 0.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> theta(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> xdist(-2.0, 2.0);
    const double h = 1e-6;
    for (int i = 0; i < 50; ++i) {
        const CylinderPoint p(theta(rng), xdist(rng));
        const AlgebraElement xa = random_sl2(rng, 1.0);
        const GroupElement g = lift(p);
        const CylinderPoint plus = project(GroupElement(testing::exp_taylor(h * xa.mat()) * g.mat()));
        const CylinderPoint minus =
            project(GroupElement(testing::exp_taylor(-h * xa.mat()) * g.mat()));
        const Eigen::Vector2d dv_fd = (plus.v() - minus.v()) / (2.0 * h);
        const double dx_fd = (plus.x() - minus.x()) / (2.0 * h);
        const CylinderTangent tangent = induced_vector_field(xa, p);
        CHECK((tangent.dv - dv_fd).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, std::abs(p.x())));
        CHECK(std::abs(tangent.dx - dx_fd) <= 1e-6 * std::max(1.0, std::abs(p.x())));
    }
}

TEST_CASE("closed-form flow specializations") {
    const SpectralData spec = SpectralData::from_generator(kH0);

    // Along the attractor direction x scales by e^{2 t lambda}.
    for (const double x0 : {-1.5, 0.3, 2.0}) {
        for (const double t : {-1.0, 0.5, 1.5}) {
            const CylinderPoint p(0.0, x0);
            const CylinderPoint q = induced_flow_closed(t, p, spec);
            CHECK(q.theta() == doctest::Approx(0.0));
            CHECK(q.x() == doctest::Approx(std::exp(2.0 * t) * x0).epsilon(1e-12));
        }
    }

    // t = 0 is the identity.
    const CylinderPoint p(1.1, -0.8);
    CHECK(point_gap(induced_flow_closed(0.0, p, spec), p) <= 1e-15);

    // The repelling direction contracts: (e2, 1) reaches (e2, e^{-2}) at t=1.
    const CylinderPoint rep(kPi / 2.0, 1.0);
    const CylinderPoint q = induced_flow_closed(1.0, rep, spec);
    CHECK(q.theta() == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    CHECK(q.x() == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("closed-form flow against the lift-evolve-project oracle") {
    // Both the symmetric drift H0 and the non-symmetric H_u spectra.
    const AlgebraElement generators[] = {kH0, AlgebraElement::sl2(1.1, 0.1, 0.05),
                                         AlgebraElement::sl2(0.9, -0.1, -0.05)};
    const double times[] = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    for (const auto& h : generators) {
        const SpectralData spec = SpectralData::from_generator(h);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                const double theta = (i + 0.5) * 2.0 * kPi / 50.0;
                const double x = -3.0 + (j + 0.5) * 6.0 / 50.0;
                const CylinderPoint p(theta, x);
                for (const double t : times) {
                    const CylinderPoint closed = induced_flow_closed(t, p, spec);
                    const CylinderPoint oracle = lift_evolve_project(h, t, p);
                    worst = std::max(worst, point_gap(closed, oracle));
                }
            }
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("closed-form flow against rk4 on the induced field") {
    const SpectralData spec = SpectralData::from_generator(kH0);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> theta(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> xdist(-1.5, 1.5);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const CylinderPoint p(theta(rng), xdist(rng));
        for (const double t : {0.5, 1.0, 2.0}) {
            const CylinderPoint closed = induced_flow_closed(t, p, spec);
            const CylinderPoint integrated = rk4_induced_field(kH0, t, p);
            worst = std::max(worst, point_gap(closed, integrated));
        }
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("drift fixed points sit at the eigendirections") {
    const SpectralData spec = SpectralData::from_generator(kH0);
    for (const double theta : {0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0}) {
        const CylinderPoint p(theta, 0.0);
        CHECK(point_gap(induced_flow_closed(0.8, p, spec), p) <= 1e-12);
    }
    // Nearby non-equilibrium points move.
    const CylinderPoint off(0.3, 0.0);
    CHECK(point_gap(induced_flow_closed(0.8, off, spec), off) > 1e-3);
}

TEST_CASE("controlled induced flow") {
    const LinearSystemSpec sys = example_system();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> theta(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> xdist(-2.0, 2.0);

    SUBCASE("zero control equals the closed drift flow") {
        const SpectralData spec = SpectralData::from_generator(kH0);
        for (int i = 0; i < 50; ++i) {
            const CylinderPoint p(theta(rng), xdist(rng));
            const PiecewiseControl u = PiecewiseControl::constant(1.2, 0.0);
            CHECK(point_gap(induced_flow(sys, 1.2, p, u),
                            induced_flow_closed(1.2, p, spec)) <= 1e-9);
        }
    }

    SUBCASE("t = 0 is the identity") {
        const CylinderPoint p(theta(rng), xdist(rng));
        CHECK(point_gap(induced_flow(sys, 0.0, p, PiecewiseControl::constant(1.0, 0.1)), p) <=
              1e-15);
    }

    SUBCASE("independent of the lift representative") {
        for (int i = 0; i < 50; ++i) {
            const CylinderPoint p(theta(rng), xdist(rng));
            const PiecewiseControl u = random_control(rng, 3, sys.range.rho);
            const double t = u.total_duration();
            const double s = std::uniform_real_distribution<double>(0.3, 3.0)(rng);
            const GroupElement a(Eigen::Matrix2d{{s, 0.0}, {0.0, 1.0 / s}});
            const CylinderPoint via_lift = project(solve(sys, lift(p), u));
            const CylinderPoint via_other = project(solve(sys, lift(p) * a, u));
            CHECK(point_gap(via_lift, via_other) <= 1e-9);
            CHECK(point_gap(induced_flow(sys, t, p, u), via_lift) <= 1e-12);
        }
    }

    SUBCASE("rejects systems violating the structural conditions") {
        const LinearSystemSpec bad(kH0, {kH0}, ControlRange(0.1, 1));
        CHECK_THROWS_AS(induced_flow(bad, 1.0, CylinderPoint(0.0, 0.0),
                                     PiecewiseControl::constant(1.0, 0.0)),
                        std::invalid_argument);
    }
}

TEST_CASE("projection conjugacy over random draws") {
    const LinearSystemSpec sys = example_system();
    std::mt19937_64 rng(19);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const GroupElement g =
            group_exp(random_sl2(rng, 0.7)) * group_exp(random_sl2(rng, 0.7));
        const PiecewiseControl u = random_control(rng, 3, sys.range.rho);
        const double t = u.total_duration();
        const CylinderPoint lhs = project(solve(sys, g, u));
        const CylinderPoint rhs = induced_flow(sys, t, project(g), u);
        worst = std::max(worst, point_gap(lhs, rhs));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("component swap map") {
    const CylinderPoint p(0.0, 0.0);
    const CylinderPoint q = antipode(p);
    CHECK(q.theta() == doctest::Approx(kPi));
    CHECK(q.x() == 0.0);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> theta(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> xdist(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const CylinderPoint a(theta(rng), xdist(rng));
        const CylinderPoint b = antipode(antipode(a));
        CHECK(a.v().x() == b.v().x());
        CHECK(a.v().y() == b.v().y());
        CHECK(a.x() == b.x());
    }
}

TEST_CASE("swap equivariance of the controlled flow") {
    const LinearSystemSpec sys = example_system();
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> theta(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> xdist(-2.0, 2.0);
    std::uniform_real_distribution<double> frac(0.1, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const CylinderPoint p(theta(rng), xdist(rng));
        const PiecewiseControl u = random_control(rng, 3, sys.range.rho);
        const double t = frac(rng) * u.total_duration();
        const CylinderPoint lhs = antipode(induced_flow(sys, t, p, u));
        const CylinderPoint rhs = induced_flow(sys, t, antipode(p), u);
        worst = std::max(worst, point_gap(lhs, rhs));
    }
    CHECK(worst <= 1e-9);
}

TEST_SUITE_END();

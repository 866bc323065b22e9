#include "liectrl/algebra.hpp"

#include "test_helpers.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

using namespace liectrl;
using liectrl::testing::exp_taylor;
using liectrl::testing::inf_gap;
using liectrl::testing::random_sl2;

namespace {
const AlgebraElement kH0 = AlgebraElement::sl2(1.0, 0.0, 0.0);
const AlgebraElement kX0 = AlgebraElement::sl2(1.0, 1.0, 0.5);
const AlgebraElement kE12 = AlgebraElement::sl2(0.0, 1.0, 0.0);
const AlgebraElement kE21 = AlgebraElement::sl2(0.0, 0.0, 1.0);
} // namespace

TEST_SUITE_BEGIN("algebra");

TEST_CASE("element validation") {
    CHECK_THROWS_AS(AlgebraElement(Eigen::Matrix2d{{1.0, 0.0}, {0.0, -0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(AlgebraElement(Eigen::MatrixXd::Ones(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(AlgebraElement(Eigen::MatrixXd::Ones(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(GroupElement(Eigen::Matrix2d{{2.0, 0.0}, {0.0, 1.0}}), std::invalid_argument);
    CHECK_NOTHROW(GroupElement(Eigen::Matrix2d{{2.0, 0.0}, {0.0, 0.5}}));
    CHECK_THROWS_AS(ControlRange(0.0, 1), std::invalid_argument);
}

TEST_CASE("bracket on the example pair") {
    const AlgebraElement b = bracket(kH0, kX0);
    CHECK(inf_gap(b.mat(), Eigen::Matrix2d{{0.0, 2.0}, {-1.0, 0.0}}) == 0.0);

    const AlgebraElement b2 = bracket(kH0, b);
    CHECK(inf_gap(b2.mat(), Eigen::Matrix2d{{0.0, 4.0}, {2.0, 0.0}}) == 0.0);

    CHECK(bracket(kX0, kX0).norm_inf() == 0.0);
    CHECK_THROWS_AS(bracket(kH0, AlgebraElement::zero(3)), std::invalid_argument);
}

TEST_CASE("bracket properties on random triples") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const AlgebraElement x = random_sl2(rng, 1.0);
        const AlgebraElement y = random_sl2(rng, 1.0);
        const AlgebraElement z = random_sl2(rng, 1.0);
        CHECK((bracket(x, y).mat() + bracket(y, x).mat()).cwiseAbs().maxCoeff() <= 1e-14);
        const Eigen::Matrix2d jacobi = bracket(x, bracket(y, z)).mat() +
                                       bracket(y, bracket(z, x)).mat() +
                                       bracket(z, bracket(x, y)).mat();
        CHECK(jacobi.cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("ad matrix in the fixed basis") {
    const Eigen::MatrixXd ad_h = ad_matrix(kH0);
    Eigen::Matrix3d expected = Eigen::Vector3d(0.0, 2.0, -2.0).asDiagonal();
    CHECK(inf_gap(ad_h, expected) == 0.0);

    CHECK(ad_matrix(AlgebraElement::zero(2)).cwiseAbs().maxCoeff() == 0.0);

    // Columns of ad(E12): [E12,H0] = -2E12, [E12,E12] = 0, [E12,E21] = H0.
    const Eigen::MatrixXd ad_e = ad_matrix(kE12);
    CHECK(inf_gap(ad_e.col(0), basis_coordinates((-2.0 * kE12).mat())) == 0.0);
    CHECK(ad_e.col(1).cwiseAbs().maxCoeff() == 0.0);
    CHECK(inf_gap(ad_e.col(2), basis_coordinates(kH0.mat())) == 0.0);
}

TEST_CASE("basis coordinates round-trip for sl(3)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd m(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m(i, j) = u(rng);
    }
    m(2, 2) = -m(0, 0) - m(1, 1);
    const Eigen::VectorXd coords = basis_coordinates(m);
    CHECK(coords.size() == 8);
    CHECK(inf_gap(from_basis_coordinates(coords, 3).mat(), m) <= 1e-14);
}

TEST_CASE("killing form") {
    CHECK(killing_form(kH0, kH0) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(killing_form(kX0, AlgebraElement::zero(2)) == 0.0);
    CHECK(killing_form(kE12, kE12) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(killing_form(kH0, AlgebraElement::zero(3)), std::invalid_argument);

    // C = 2n tr(XY) on sl(n); n = 2 gives 4 tr(XY).
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        const AlgebraElement x = random_sl2(rng, 1.0);
        const AlgebraElement y = random_sl2(rng, 1.0);
        const double c = killing_form(x, y);
        const double expected = 4.0 * (x.mat() * y.mat()).trace();
        CHECK(std::abs(c - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
        CHECK(std::abs(c - killing_form(y, x)) <= 1e-12);
    }
}

TEST_CASE("cartan involution") {
    const AlgebraElement skew = AlgebraElement::sl2(0.0, 1.0, -1.0);
    CHECK(inf_gap(cartan_involution(skew).mat(), skew.mat()) == 0.0);
    CHECK(inf_gap(cartan_involution(kH0).mat(), (-kH0).mat()) == 0.0);
    CHECK(cartan_inner(kH0, kH0) == doctest::Approx(8.0).epsilon(1e-12));

    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
        const AlgebraElement x = random_sl2(rng, 2.0);
        CHECK(inf_gap(cartan_involution(cartan_involution(x)).mat(), x.mat()) == 0.0);
        CHECK(cartan_inner(x, x) > 0.0); // positive definite
    }
}

TEST_CASE("group exponential closed form") {
    const GroupElement diag = group_exp(kH0, 1.5);
    CHECK(diag(0, 0) == doctest::Approx(std::exp(1.5)).epsilon(1e-14));
    CHECK(diag(1, 1) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
    CHECK(diag(0, 1) == 0.0);

    CHECK(inf_gap(group_exp(kX0, 0.0).mat(), Eigen::Matrix2d::Identity()) == 0.0);

    // det X0 = -3/2: hyperbolic branch against the 30-term Taylor oracle.
    CHECK(inf_gap(group_exp(kX0).mat(), exp_taylor(kX0.mat())) <= 1e-12);

    // Rotation branch and nilpotent branch.
    const AlgebraElement rot = AlgebraElement::sl2(0.0, 1.0, -1.0);
    CHECK(inf_gap(group_exp(rot, 0.7).mat(), exp_taylor(0.7 * rot.mat())) <= 1e-13);
    CHECK(inf_gap(group_exp(kE12, 2.0).mat(), Eigen::Matrix2d{{1.0, 2.0}, {0.0, 1.0}}) == 0.0);
}

TEST_CASE("group exponential properties") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> tdist(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const AlgebraElement x = random_sl2(rng, 1.0);
        const double s = tdist(rng);
        const double t = tdist(rng);
        CHECK(group_exp(x, t).det_error() <= 1e-9);
        const Eigen::Matrix2d prod = group_exp(x, s).mat() * group_exp(x, t).mat();
        CHECK(inf_gap(group_exp(x, s + t).mat(), prod) <= 1e-9);
        const Eigen::Matrix2d inv = group_exp(x, t).mat() * group_exp(x, -t).mat();
        CHECK(inf_gap(inv, Eigen::Matrix2d::Identity()) <= 1e-9);
        CHECK(inf_gap(group_exp(x, t).mat(), exp_taylor(t * x.mat(), 30, true)) <= 1e-12);
    }
}

TEST_CASE("group exponential for sl(3) via scaling and squaring") {
    Eigen::Matrix3d m;
    m << 0.3, 1.0, 0.0, -0.4, 0.1, 0.2, 0.0, 0.5, -0.4;
    const AlgebraElement x{Eigen::MatrixXd(m)};
    CHECK(inf_gap(group_exp(x, 1.2).mat(), exp_taylor(1.2 * m, 40, true)) <= 1e-12);
    CHECK(group_exp(x, 1.2).det_error() <= 1e-9);
}

TEST_CASE("ad matrix for sl(3)") {
    // ad of diag(1, 0, -1) acts diagonally on the root vectors with the
    // entry differences as eigenvalues: {1, 2, 1, -1, 0, 0, -2, -1}.
    Eigen::Matrix3d d = Eigen::Vector3d(1.0, 0.0, -1.0).asDiagonal();
    const Eigen::MatrixXd ad = ad_matrix(AlgebraElement{Eigen::MatrixXd(d)});
    REQUIRE(ad.rows() == 8);
    Eigen::EigenSolver<Eigen::MatrixXd> es(ad);
    std::vector<double> eigs;
    for (Eigen::Index i = 0; i < 8; ++i) {
        CHECK(std::abs(es.eigenvalues()(i).imag()) <= 1e-12);
        eigs.push_back(es.eigenvalues()(i).real());
    }
    std::sort(eigs.begin(), eigs.end());
    const std::vector<double> expected = {-2.0, -1.0, -1.0, 0.0, 0.0, 1.0, 1.0, 2.0};
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(eigs[i] == doctest::Approx(expected[i]).epsilon(1e-10));
    }

    // Killing form stays 2n tr(XY) in sl(3).
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m(i, j) = u(rng);
    }
    m(2, 2) = -m(0, 0) - m(1, 1);
    const AlgebraElement x{Eigen::MatrixXd(m)};
    const double expected_c = 6.0 * (m * m).trace();
    CHECK(killing_form(x, x) == doctest::Approx(expected_c).epsilon(1e-10));
}

TEST_CASE("ad rank") {
    CHECK(ad_rank(kH0, kX0) == 3);
    CHECK(ad_rank(kH0, kH0) == 1);
    CHECK(ad_rank(kH0, kE12) == 1);
    CHECK(ad_rank(kH0, kE21) == 1);
    CHECK(ad_rank(kH0, AlgebraElement::sl2(0.0, 1.0, 1.0)) == 2);
}

TEST_SUITE_END();

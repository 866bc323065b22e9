#include "liectrl/jordan.hpp"

#include "test_helpers.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

using namespace liectrl;
using liectrl::testing::inf_gap;
using liectrl::testing::random_sl2;

namespace {
const AlgebraElement kH0 = AlgebraElement::sl2(1.0, 0.0, 0.0);
const AlgebraElement kX0 = AlgebraElement::sl2(1.0, 1.0, 0.5);
const AlgebraElement kE12 = AlgebraElement::sl2(0.0, 1.0, 0.0);

double commutator_residual(const JordanParts& p) {
    return std::max({bracket(p.elliptic, p.hyperbolic).norm_inf(),
                     bracket(p.elliptic, p.nilpotent).norm_inf(),
                     bracket(p.hyperbolic, p.nilpotent).norm_inf()});
}
} // namespace

TEST_SUITE_BEGIN("jordan");

TEST_CASE("pure cases decompose exactly") {
    const JordanParts hyp = jordan_decompose(kX0); // det = -3/2 < 0
    CHECK(hyp.elliptic.norm_inf() == 0.0);
    CHECK(hyp.nilpotent.norm_inf() == 0.0);
    CHECK(inf_gap(hyp.hyperbolic.mat(), kX0.mat()) == 0.0);

    const AlgebraElement rot = AlgebraElement::sl2(0.0, 1.0, -1.0);
    const JordanParts ell = jordan_decompose(rot);
    CHECK(inf_gap(ell.elliptic.mat(), rot.mat()) == 0.0);
    CHECK(ell.hyperbolic.norm_inf() == 0.0);
    CHECK(ell.nilpotent.norm_inf() == 0.0);

    const JordanParts nil = jordan_decompose(kE12);
    CHECK(inf_gap(nil.nilpotent.mat(), kE12.mat()) == 0.0);
    CHECK(nil.elliptic.norm_inf() == 0.0);
    CHECK(nil.hyperbolic.norm_inf() == 0.0);
}

TEST_CASE("random sl(2) reassembly and spectrum classes") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 200; ++i) {
        const AlgebraElement x = random_sl2(rng, 2.0);
        const JordanParts p = jordan_decompose(x);
        const Eigen::Matrix2d sum =
            p.elliptic.mat() + p.hyperbolic.mat() + p.nilpotent.mat();
        CHECK(inf_gap(sum, x.mat()) <= 1e-10);
        CHECK(commutator_residual(p) <= 1e-9);
        CHECK((p.nilpotent.mat() * p.nilpotent.mat()).cwiseAbs().maxCoeff() <= 1e-9);
        Eigen::EigenSolver<Eigen::Matrix2d> esh(p.hyperbolic.mat());
        Eigen::EigenSolver<Eigen::Matrix2d> ese(p.elliptic.mat());
        CHECK(esh.eigenvalues().imag().cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(ese.eigenvalues().real().cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("idempotent on its own hyperbolic output") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 50; ++i) {
        const JordanParts p = jordan_decompose(random_sl2(rng, 2.0));
        if (p.hyperbolic.norm_inf() == 0.0) continue;
        const JordanParts q = jordan_decompose(p.hyperbolic);
        CHECK(inf_gap(q.hyperbolic.mat(), p.hyperbolic.mat()) <= 1e-10);
    }
}

TEST_CASE("sl(3) mixed decomposition") {
    // Rotation block plus commuting diagonal: E and H both nonzero, N = 0.
    Eigen::Matrix3d m;
    m << 1.0, 1.0, 0.0, -1.0, 1.0, 0.0, 0.0, 0.0, -2.0;
    const JordanParts p = jordan_decompose(AlgebraElement{Eigen::MatrixXd(m)});
    Eigen::Matrix3d h_expected;
    h_expected << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -2.0;
    Eigen::Matrix3d e_expected;
    e_expected << 0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0;
    CHECK(inf_gap(p.hyperbolic.mat(), h_expected) <= 1e-9);
    CHECK(inf_gap(p.elliptic.mat(), e_expected) <= 1e-9);
    CHECK(p.nilpotent.norm_inf() <= 1e-9);
}

TEST_CASE("sl(3) defective block goes through the newton split") {
    // One 2x2 nilpotent block on top of a semisimple diagonal.
    Eigen::Matrix3d m;
    m << 1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -2.0;
    const JordanParts p = jordan_decompose(AlgebraElement{Eigen::MatrixXd(m)});
    Eigen::Matrix3d n_expected = Eigen::Matrix3d::Zero();
    n_expected(0, 1) = 1.0;
    CHECK(inf_gap(p.nilpotent.mat(), n_expected) <= 1e-8);
    CHECK(p.elliptic.norm_inf() <= 1e-8);
    CHECK(inf_gap(p.hyperbolic.mat(), m - n_expected) <= 1e-8);
    CHECK(commutator_residual(p) <= 1e-8);
}

TEST_CASE("sl(3) pure nilpotent") {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 1) = 1.0;
    m(1, 2) = 1.0;
    const JordanParts p = jordan_decompose(AlgebraElement{Eigen::MatrixXd(m)});
    CHECK(inf_gap(p.nilpotent.mat(), m) <= 1e-8);
    CHECK(p.hyperbolic.norm_inf() <= 1e-8);
    CHECK(p.elliptic.norm_inf() <= 1e-8);
}

TEST_CASE("eigenspace split of the diagonal generator") {
    const EigenspaceSplit split = eigenspace_split(kH0);
    REQUIRE(split.positive.size() == 1);
    REQUIRE(split.zero.size() == 1);
    REQUIRE(split.negative.size() == 1);
    CHECK(split.positive[0].tag == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(split.zero[0].tag == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(split.negative[0].tag == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(inf_gap(split.positive[0].element.mat(), kE12.mat()) <= 1e-12);
    CHECK(inf_gap(split.negative[0].element.mat(), AlgebraElement::sl2(0, 0, 1).mat()) <= 1e-12);
    CHECK(inf_gap(split.zero[0].element.mat(), kH0.mat()) <= 1e-12);
    CHECK(split.parabolic().size() == 2);

    const EigenspaceSplit scaled = eigenspace_split(AlgebraElement::sl2(2.0, 0.0, 0.0));
    CHECK(scaled.positive[0].tag == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(scaled.negative[0].tag == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("eigenspace split edge cases") {
    const EigenspaceSplit zero = eigenspace_split(AlgebraElement::zero(2));
    CHECK(zero.positive.empty());
    CHECK(zero.negative.empty());
    CHECK(zero.zero.size() == 3);

    // Nilpotent input: real (defective) spectrum, everything in the zero
    // class through the generalized-eigenspace path.
    const EigenspaceSplit nil = eigenspace_split(kE12);
    CHECK(nil.positive.empty());
    CHECK(nil.negative.empty());
    CHECK(nil.zero.size() == 3);

    // Elliptic input rejected.
    CHECK_THROWS_AS(eigenspace_split(AlgebraElement::sl2(0.0, 1.0, -1.0)), std::invalid_argument);
}

TEST_CASE("eigenspace split for sl(3)") {
    Eigen::Matrix3d d = Eigen::Vector3d(1.0, 0.0, -1.0).asDiagonal();
    const EigenspaceSplit split = eigenspace_split(AlgebraElement{Eigen::MatrixXd(d)});
    CHECK(split.positive.size() == 3);
    CHECK(split.zero.size() == 2);
    CHECK(split.negative.size() == 3);
    CHECK(split.total_dim() == 8);
    CHECK(split.parabolic().size() == 5);
    // Positive tags are the positive entry differences {1, 1, 2}.
    std::vector<double> tags;
    for (const auto& tv : split.positive) tags.push_back(tv.tag);
    std::sort(tags.begin(), tags.end());
    CHECK(tags[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(tags[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(tags[2] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("eigenspace split dimensions always sum to dim sl(2)") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 100; ++i) {
        const JordanParts p = jordan_decompose(random_sl2(rng, 2.0));
        const EigenspaceSplit split = eigenspace_split(p.hyperbolic);
        CHECK(split.total_dim() == 3);
        for (const auto& tv : split.positive) {
            const Eigen::VectorXd coords = basis_coordinates(tv.element.mat());
            CHECK((ad_matrix(p.hyperbolic) * coords - tv.tag * coords).cwiseAbs().maxCoeff() <=
                  1e-8);
        }
    }
}

TEST_CASE("drift-invariance of the positive eigenspace") {
    // exp(t H0) exp(s v) exp(-t H0) stays in exp(span{E12}) for v in n_H:
    // the log of the product has E21 and H0 components below 1e-8.
    const EigenspaceSplit split = eigenspace_split(kH0);
    const AlgebraElement v = split.positive[0].element;
    for (const double t : {-1.0, -0.3, 0.4, 1.0}) {
        for (const double s : {-1.0, -0.2, 0.7, 1.0}) {
            const Eigen::Matrix2d conj = group_exp(kH0, t).mat() * group_exp(v, s).mat() *
                                         group_exp(kH0, -t).mat();
            // exp of an upper-triangular nilpotent is I + N, so the log is
            // read off directly.
            const Eigen::Matrix2d log_m = conj - Eigen::Matrix2d::Identity();
            CHECK(std::abs(log_m(1, 0)) <= 1e-8);
            CHECK(std::abs(log_m(0, 0)) <= 1e-8);
            CHECK(std::abs(log_m(1, 1)) <= 1e-8);
        }
    }
}

TEST_CASE("condition report for the example pair") {
    const ConditionReport report = check_conditions(kH0, kX0, 0.1);
    CHECK(report.h_nonzero_diagonal);
    CHECK(report.hu_real_distinct);
    CHECK(report.ad_rank_basis);
    CHECK(report.all());
    // det(H0 + uX0) = -(1+u)^2 - u^2/2, maximal at u = -rho.
    CHECK(report.max_det_hu == doctest::Approx(-(0.9 * 0.9) - 0.005).epsilon(1e-12));

    CHECK_FALSE(check_conditions(AlgebraElement::zero(2), kX0, 0.1).h_nonzero_diagonal);
    const ConditionReport r3 = check_conditions(kH0, kH0, 0.1);
    CHECK_FALSE(r3.ad_rank_basis);
    CHECK(r3.rank == 1);
}

TEST_SUITE_END();

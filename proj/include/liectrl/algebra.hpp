#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace liectrl {

/// Thrown when an iterative or spectral computation fails to reach its
/// target residual; carries the offending residual in the message.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace tol {
/// Structural invariants (tracelessness, orthogonality of stored data).
inline constexpr double kStructAbs = 1e-12;
/// Group-level identities (unit determinant, flow identities).
inline constexpr double kGroupRel = 1e-9;
/// Eigenvalue sign classification: |lambda| below this counts as zero.
inline constexpr double kZeroEig = 1e-8;
} // namespace tol

/// Element of sl(n): real n x n traceless matrix. Immutable after
/// construction; arithmetic returns new values.
class AlgebraElement {
public:
    explicit AlgebraElement(Eigen::MatrixXd entries, double trace_tol = tol::kStructAbs);

    const Eigen::MatrixXd& mat() const { return entries_; }
    Eigen::Index dim() const { return entries_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

    static AlgebraElement zero(Eigen::Index n);
    /// Convenience for sl(2): [[a, b], [c, -a]].
    static AlgebraElement sl2(double a, double b, double c);

    AlgebraElement operator+(const AlgebraElement& other) const;
    AlgebraElement operator-(const AlgebraElement& other) const;
    AlgebraElement operator-() const;
    friend AlgebraElement operator*(double s, const AlgebraElement& x);

    double norm_inf() const { return entries_.cwiseAbs().maxCoeff(); }

private:
    Eigen::MatrixXd entries_;
};

/// Element of SL(n): real n x n matrix with unit determinant. The
/// determinant is validated relative to the matrix scale and never
/// renormalized; drift in det is a monitored invariant.
class GroupElement {
public:
    explicit GroupElement(Eigen::MatrixXd entries, double det_tol = tol::kGroupRel);

    const Eigen::MatrixXd& mat() const { return entries_; }
    Eigen::Index dim() const { return entries_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

    static GroupElement identity(Eigen::Index n);

    GroupElement operator*(const GroupElement& other) const;
    GroupElement inverse() const;

    /// |det - 1|, for monitoring determinant drift along trajectories.
    double det_error() const;

private:
    Eigen::MatrixXd entries_;
};

/// Control value range Omega = [-rho, rho]^m.
struct ControlRange {
    double rho;
    int m;

    ControlRange(double rho_, int m_);
    bool contains(const Eigen::VectorXd& c, double slack = 1e-12) const;
};

/// Commutator [X, Y] = XY - YX.
AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

/// Fixed ordered basis of sl(n). For n = 2 this is {H0 = E11 - E22, E12,
/// E21}. In general, positions are visited row-major; diagonal position
/// (i, i) with i < n-1 contributes H_i = E_ii - E_{i+1,i+1}, position
/// (n-1, n-1) is skipped, and off-diagonal (i, j) contributes E_ij.
const std::vector<AlgebraElement>& sl_basis(Eigen::Index n);

/// Coordinates of a traceless matrix in the fixed ordered basis.
Eigen::VectorXd basis_coordinates(const Eigen::MatrixXd& m);

/// Matrix built from coordinates in the fixed ordered basis.
AlgebraElement from_basis_coordinates(const Eigen::VectorXd& coords, Eigen::Index n);

/// Matrix of ad(X) = [X, .] in the fixed ordered basis; column k is
/// bracket(X, basis_k) expanded in the same basis.
Eigen::MatrixXd ad_matrix(const AlgebraElement& x);

/// Cartan-Killing form C(X, Y) = tr(ad(X) ad(Y)).
double killing_form(const AlgebraElement& x, const AlgebraElement& y);

/// Cartan involution of sl(n): X -> -X^T.
AlgebraElement cartan_involution(const AlgebraElement& x);

/// Inner product B(X, Y) = -C(X, involution(Y)); positive definite on sl(n).
double cartan_inner(const AlgebraElement& x, const AlgebraElement& y);

/// exp(tX). For n = 2 the closed form cosh(t*mu) I + sinh(t*mu)/mu X with
/// mu^2 = -det X is used (trigonometric branch for det X > 0, series limit
/// near det X = 0); larger n goes through scaling-and-squaring.
GroupElement group_exp(const AlgebraElement& x, double t = 1.0);

/// Rank of {X, [H, X], [H, [H, X]]} expanded in the fixed basis (n = 2
/// only). Value 3 means the family spans sl(2).
int ad_rank(const AlgebraElement& h, const AlgebraElement& x);

} // namespace liectrl

#pragma once

#include "liectrl/algebra.hpp"

namespace liectrl {

/// Commuting additive decomposition X = E + H + N with E elliptic (purely
/// imaginary spectrum), H hyperbolic (real spectrum) and N nilpotent.
struct JordanParts {
    AlgebraElement elliptic;
    AlgebraElement hyperbolic;
    AlgebraElement nilpotent;
};

/// One ad(H)-eigenvector (or generalized-eigenvector block member) together
/// with its eigenvalue tag. When ad(H) is defective the tag is the block's
/// clustered eigenvalue and the vector belongs to the generalized eigenspace.
struct TaggedVector {
    AlgebraElement element;
    double tag;
};

/// Split of sl(n) into the sums of real generalized eigenspaces of ad(H)
/// with positive, zero and negative eigenvalue.
struct EigenspaceSplit {
    std::vector<TaggedVector> positive; // n_H
    std::vector<TaggedVector> zero;     // z_H
    std::vector<TaggedVector> negative; // n_H^-

    Eigen::Index total_dim() const {
        return static_cast<Eigen::Index>(positive.size() + zero.size() + negative.size());
    }
    /// Basis of the parabolic subalgebra p_H = z_H + n_H.
    std::vector<TaggedVector> parabolic() const;
};

/// Report of the three structural conditions on a pair (H, X) with control
/// bound rho: H nonzero diagonal; H + uX uniformly hyperbolic on [-rho, rho]
/// (checked analytically through the quadratic u -> det(H + uX)); and
/// {X, [H,X], [H,[H,X]]} spanning sl(2).
struct ConditionReport {
    bool h_nonzero_diagonal = false;
    bool hu_real_distinct = false;
    bool ad_rank_basis = false;
    double max_det_hu = 0.0; // max of det(H + uX) over [-rho, rho]
    int rank = 0;

    bool all() const { return h_nonzero_diagonal && hu_real_distinct && ad_rank_basis; }
};

/// Additive Jordan decomposition. Eigenvalues within cluster_tol (relative
/// to the matrix scale) are merged; a defective cluster triggers a Newton
/// iteration on the squarefree characteristic factor to isolate the
/// semisimple part. Throws NumericalError when the iteration or the
/// eigensolver fails to converge.
JordanParts jordan_decompose(const AlgebraElement& x, double cluster_tol = tol::kZeroEig);

/// Eigenspace split of ad(H). Requires H to have real spectrum (what the
/// hyperbolic Jordan part satisfies); rejects inputs whose ad(H) spectrum
/// has imaginary parts beyond tolerance. Eigenvalues with |lambda| below
/// zero_tol are classified as zero.
EigenspaceSplit eigenspace_split(const AlgebraElement& h, double zero_tol = tol::kZeroEig);

/// Evaluate the three conditions for the sl(2) pipeline.
ConditionReport check_conditions(const AlgebraElement& h, const AlgebraElement& x, double rho);

} // namespace liectrl

#include "liectrl/jordan.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace liectrl {

namespace {

using Complex = std::complex<double>;

/// Remove round-off trace drift so derived parts stay valid sl(n) elements.
Eigen::MatrixXd detrace(Eigen::MatrixXd m) {
    const double tr = m.trace() / static_cast<double>(m.rows());
    m.diagonal().array() -= tr;
    return m;
}

/// Computed eigenvalues of a defective matrix carry errors of order
/// eps^(1/n); clustering tolerances must sit above that inflation.
double defect_inflation(Eigen::Index n) {
    return 50.0 * std::pow(std::numeric_limits<double>::epsilon(), 1.0 / static_cast<double>(n));
}

struct Clusters {
    std::vector<Complex> reps;  // cluster means
    std::vector<int> index;     // eigenvalue -> cluster
    bool defective = false;     // some cluster holds more than one eigenvalue
};

Clusters cluster_eigenvalues(const Eigen::VectorXcd& lambda, double tol_abs) {
    Clusters cl;
    cl.index.assign(static_cast<std::size_t>(lambda.size()), -1);
    std::vector<Complex> sums;
    std::vector<int> counts;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        int found = -1;
        for (std::size_t c = 0; c < cl.reps.size(); ++c) {
            if (std::abs(lambda(i) - cl.reps[c]) <= tol_abs) {
                found = static_cast<int>(c);
                break;
            }
        }
        if (found < 0) {
            cl.reps.push_back(lambda(i));
            sums.push_back(lambda(i));
            counts.push_back(1);
            found = static_cast<int>(cl.reps.size() - 1);
        } else {
            cl.defective = true;
            sums[static_cast<std::size_t>(found)] += lambda(i);
            counts[static_cast<std::size_t>(found)] += 1;
            cl.reps[static_cast<std::size_t>(found)] =
                sums[static_cast<std::size_t>(found)] / static_cast<double>(counts[found]);
        }
        cl.index[static_cast<std::size_t>(i)] = found;
    }
    for (auto& r : cl.reps) {
        if (std::abs(r.imag()) <= tol_abs) r = Complex(r.real(), 0.0);
    }
    return cl;
}

/// Real coefficients of q(z) = prod over cluster representatives (z - mu),
/// pairing conjugate representatives into real quadratics.
std::vector<double> squarefree_poly(const std::vector<Complex>& reps, double tol_abs) {
    std::vector<double> coeffs{1.0};
    auto mul_linear = [&coeffs](double a0) {
        // multiply by (z + a0)
        std::vector<double> out(coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            out[i] += coeffs[i] * a0;
            out[i + 1] += coeffs[i];
        }
        coeffs = std::move(out);
    };
    auto mul_quadratic = [&coeffs](double b, double c) {
        // multiply by (z^2 + b z + c)
        std::vector<double> out(coeffs.size() + 2, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            out[i] += coeffs[i] * c;
            out[i + 1] += coeffs[i] * b;
            out[i + 2] += coeffs[i];
        }
        coeffs = std::move(out);
    };
    std::vector<bool> used(reps.size(), false);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        if (reps[i].imag() == 0.0) {
            mul_linear(-reps[i].real());
            continue;
        }
        std::size_t partner = i;
        for (std::size_t j = i + 1; j < reps.size(); ++j) {
            if (!used[j] && std::abs(reps[j] - std::conj(reps[i])) <= 4 * tol_abs) {
                partner = j;
                break;
            }
        }
        if (partner == i) {
            throw NumericalError("eigenvalue clustering lost a conjugate pair");
        }
        used[partner] = true;
        mul_quadratic(-2.0 * reps[i].real(), std::norm(reps[i]));
    }
    return coeffs; // coeffs[k] multiplies z^k
}

Eigen::MatrixXd eval_poly(const std::vector<double>& coeffs, const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        acc = acc * m;
        acc.diagonal().array() += coeffs[k];
    }
    return acc;
}

std::vector<double> differentiate(const std::vector<double>& coeffs) {
    std::vector<double> d(coeffs.size() > 1 ? coeffs.size() - 1 : 1, 0.0);
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
        d[k - 1] = coeffs[k] * static_cast<double>(k);
    }
    return d;
}

/// Semisimple part of m via Newton iteration on the squarefree factor q:
/// S <- S - q(S) q'(S)^{-1}, starting from S = m.
Eigen::MatrixXd semisimple_newton(const Eigen::MatrixXd& m, const std::vector<double>& q,
                                  double target) {
    const std::vector<double> dq = differentiate(q);
    Eigen::MatrixXd s = m;
    for (int iter = 0; iter < 40; ++iter) {
        const Eigen::MatrixXd qs = eval_poly(q, s);
        if (qs.cwiseAbs().maxCoeff() <= target) return s;
        const Eigen::MatrixXd dqs = eval_poly(dq, s);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(dqs);
        if (!lu.isInvertible()) {
            throw NumericalError("semisimple split: q'(S) is singular");
        }
        s -= lu.solve(qs);
    }
    const double residual = eval_poly(q, s).cwiseAbs().maxCoeff();
    std::ostringstream os;
    os << "semisimple split did not converge: residual " << residual;
    throw NumericalError(os.str());
}

/// sl(2): eigenvalues are +-sqrt(-det), so det alone classifies the element
/// as hyperbolic (det < 0), elliptic (det > 0) or nilpotent (det = 0).
JordanParts jordan_sl2(const AlgebraElement& x) {
    const double scale = std::max(1.0, x.norm_inf());
    const double d = x.mat().determinant();
    const AlgebraElement zero = AlgebraElement::zero(2);
    if (std::abs(d) <= 1e-10 * scale * scale) {
        return JordanParts{zero, zero, x};
    }
    if (d < 0.0) {
        return JordanParts{zero, x, zero};
    }
    return JordanParts{x, zero, zero};
}

} // namespace

std::vector<TaggedVector> EigenspaceSplit::parabolic() const {
    std::vector<TaggedVector> p = zero;
    p.insert(p.end(), positive.begin(), positive.end());
    return p;
}

JordanParts jordan_decompose(const AlgebraElement& x, double cluster_tol) {
    const Eigen::Index n = x.dim();
    if (n == 2) return jordan_sl2(x);

    const double scale = std::max(1.0, x.norm_inf());
    const double tol_abs = std::max(cluster_tol, defect_inflation(n)) * scale;

    Eigen::EigenSolver<Eigen::MatrixXd> es(x.mat());
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigen-decomposition of the drift failed to converge");
    }
    const Eigen::VectorXcd lambda = es.eigenvalues();
    const Clusters cl = cluster_eigenvalues(lambda, tol_abs);

    Eigen::MatrixXd s;
    Eigen::VectorXcd s_lambda;
    Eigen::MatrixXcd s_vectors;
    if (!cl.defective) {
        s = x.mat();
        s_lambda = lambda;
        s_vectors = es.eigenvectors();
    } else {
        const std::vector<double> q = squarefree_poly(cl.reps, tol_abs);
        s = detrace(semisimple_newton(x.mat(), q,
                                      1e-12 * std::max(1.0, std::pow(scale, static_cast<double>(n)))));
        Eigen::EigenSolver<Eigen::MatrixXd> es2(s);
        if (es2.info() != Eigen::Success) {
            throw NumericalError("eigen-decomposition of the semisimple part failed");
        }
        s_lambda = es2.eigenvalues();
        s_vectors = es2.eigenvectors();
    }

    // H acts as the real parts of the spectrum, E = S - H. Pure cases
    // short-circuit so they come out exactly zero.
    const double max_im = s_lambda.imag().cwiseAbs().maxCoeff();
    const double max_re = s_lambda.real().cwiseAbs().maxCoeff();
    Eigen::MatrixXd h;
    if (max_im <= tol_abs) {
        h = s;
    } else if (max_re <= tol_abs) {
        h = Eigen::MatrixXd::Zero(n, n);
    } else {
        Eigen::MatrixXcd hc = s_vectors * s_lambda.real().asDiagonal() * s_vectors.inverse();
        if (hc.imag().cwiseAbs().maxCoeff() > 1e-8 * scale) {
            throw NumericalError("hyperbolic part came out non-real");
        }
        h = detrace(hc.real());
    }

    AlgebraElement hyperbolic(h);
    AlgebraElement elliptic(detrace(s - h));
    AlgebraElement nilpotent(detrace(x.mat() - s));

    // Gross-failure guard; tight residuals are asserted by the test suite.
    const double reassembly =
        (elliptic.mat() + hyperbolic.mat() + nilpotent.mat() - x.mat()).cwiseAbs().maxCoeff();
    const double commutators =
        std::max({bracket(elliptic, hyperbolic).norm_inf(), bracket(elliptic, nilpotent).norm_inf(),
                  bracket(hyperbolic, nilpotent).norm_inf()});
    if (reassembly > 1e-6 * scale || commutators > 1e-6 * scale * scale) {
        std::ostringstream os;
        os << "jordan decomposition inconsistent: reassembly " << reassembly << ", commutators "
           << commutators;
        throw NumericalError(os.str());
    }
    return JordanParts{std::move(elliptic), std::move(hyperbolic), std::move(nilpotent)};
}

EigenspaceSplit eigenspace_split(const AlgebraElement& h, double zero_tol) {
    const Eigen::Index n = h.dim();
    const double scale = std::max(1.0, h.norm_inf());

    // Reject inputs without real spectrum. Computed eigenvalues of defective
    // matrices carry inflated imaginary parts, so the threshold sits above
    // the inflation level; genuinely elliptic inputs are far beyond it.
    if (n == 2) {
        if (h.mat().determinant() > 1e-10 * scale * scale) {
            throw std::invalid_argument("eigenspace split needs H with real spectrum");
        }
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> esh(h.mat());
        if (esh.info() != Eigen::Success) {
            throw NumericalError("eigen-decomposition of H failed to converge");
        }
        if (esh.eigenvalues().imag().cwiseAbs().maxCoeff() > defect_inflation(n) * scale) {
            throw std::invalid_argument("eigenspace split needs H with real spectrum");
        }
    }

    const Eigen::MatrixXd ad = ad_matrix(h);
    const Eigen::Index d = ad.rows();
    Eigen::EigenSolver<Eigen::MatrixXd> es(ad);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigen-decomposition of ad(H) failed to converge");
    }
    if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > defect_inflation(d) * scale) {
        throw std::invalid_argument("ad(H) spectrum is not real within tolerance");
    }

    EigenspaceSplit split;
    auto classify = [&](const Eigen::VectorXd& coords, double tag) {
        TaggedVector tv{from_basis_coordinates(coords, n), tag};
        if (tag > zero_tol) {
            split.positive.push_back(std::move(tv));
        } else if (tag < -zero_tol) {
            split.negative.push_back(std::move(tv));
        } else {
            split.zero.push_back(std::move(tv));
        }
    };

    // Primary path: ad(H) diagonalizable with well-separated eigenvectors.
    bool ok = true;
    std::vector<std::pair<double, Eigen::VectorXd>> vectors;
    for (Eigen::Index k = 0; k < d && ok; ++k) {
        const double tag = es.eigenvalues()(k).real();
        Eigen::VectorXcd v = es.eigenvectors().col(k);
        Eigen::Index pivot;
        v.cwiseAbs().maxCoeff(&pivot);
        v *= std::conj(v(pivot)) / std::abs(v(pivot));
        Eigen::VectorXd vr = v.real();
        const double imag_left = v.imag().cwiseAbs().maxCoeff();
        vr.normalize();
        if (imag_left > 1e-8 || (ad * vr - tag * vr).cwiseAbs().maxCoeff() > 1e-8 * scale) {
            ok = false;
            break;
        }
        vectors.emplace_back(tag, std::move(vr));
    }
    if (ok) {
        Eigen::MatrixXd vm(d, d);
        for (Eigen::Index k = 0; k < d; ++k) {
            vm.col(k) = vectors[static_cast<std::size_t>(k)].second;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(vm);
        lu.setThreshold(1e-8);
        ok = lu.rank() == d;
    }
    if (ok) {
        std::stable_sort(vectors.begin(), vectors.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (auto& [tag, v] : vectors) classify(v, tag);
        return split;
    }

    // Defective fallback: generalized eigenspaces as kernels of
    // (ad - mu)^mult per eigenvalue cluster; members are tagged with the
    // cluster value and land in its sign class.
    const Clusters cl =
        cluster_eigenvalues(es.eigenvalues(), std::max(zero_tol, defect_inflation(d)) * scale);
    std::vector<std::pair<double, Eigen::MatrixXd>> blocks;
    for (std::size_t c = 0; c < cl.reps.size(); ++c) {
        if (cl.reps[c].imag() != 0.0) {
            throw std::invalid_argument("ad(H) spectrum is not real within tolerance");
        }
        const double mu = cl.reps[c].real();
        const Eigen::Index mult = static_cast<Eigen::Index>(
            std::count(cl.index.begin(), cl.index.end(), static_cast<int>(c)));
        const Eigen::MatrixXd shifted = ad - mu * Eigen::MatrixXd::Identity(d, d);
        Eigen::MatrixXd power = Eigen::MatrixXd::Identity(d, d);
        for (Eigen::Index i = 0; i < mult; ++i) power *= shifted;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(power);
        lu.setThreshold(1e-8);
        Eigen::MatrixXd kernel = lu.kernel();
        if (kernel.cols() != mult) {
            throw NumericalError("generalized eigenspace dimension mismatch in ad(H) split");
        }
        blocks.emplace_back(mu, std::move(kernel));
    }
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [mu, kernel] : blocks) {
        for (Eigen::Index k = 0; k < kernel.cols(); ++k) {
            Eigen::VectorXd v = kernel.col(k).normalized();
            classify(v, mu);
        }
    }
    if (split.total_dim() != d) {
        throw NumericalError("eigenspace split dimensions do not sum to dim sl(n)");
    }
    return split;
}

ConditionReport check_conditions(const AlgebraElement& h, const AlgebraElement& x, double rho) {
    if (h.dim() != 2 || x.dim() != 2) {
        throw std::invalid_argument("check_conditions is defined for sl(2) inputs");
    }
    if (!(rho > 0.0)) {
        throw std::invalid_argument("rho must be positive");
    }
    ConditionReport report;

    const Eigen::Matrix2d hm = h.mat();
    const Eigen::Matrix2d xm = x.mat();
    const double offdiag = std::max(std::abs(hm(0, 1)), std::abs(hm(1, 0)));
    report.h_nonzero_diagonal = offdiag <= tol::kStructAbs && h.norm_inf() > tol::kStructAbs;

    // det(H + uX) is quadratic in u; for sl(2) the eigenvalues of H + uX are
    // +-sqrt(-det), so a pair of distinct real eigenvalues means det < 0.
    const double c0 = hm.determinant();
    const double c1 = hm(0, 0) * xm(1, 1) + xm(0, 0) * hm(1, 1) - hm(0, 1) * xm(1, 0) -
                      xm(0, 1) * hm(1, 0);
    const double c2 = xm.determinant();
    auto det_hu = [&](double u) { return c0 + c1 * u + c2 * u * u; };
    double max_det = std::max(det_hu(-rho), det_hu(rho));
    if (c2 < 0.0) {
        const double vertex = -c1 / (2.0 * c2);
        if (std::abs(vertex) <= rho) {
            max_det = std::max(max_det, det_hu(vertex));
        }
    }
    report.max_det_hu = max_det;
    report.hu_real_distinct = max_det < 0.0;

    report.rank = ad_rank(h, x);
    report.ad_rank_basis = report.rank == 3;
    return report;
}

} // namespace liectrl

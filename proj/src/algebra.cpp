#include "liectrl/algebra.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace liectrl {

namespace {

std::string dim_mismatch_msg(Eigen::Index a, Eigen::Index b) {
    std::ostringstream os;
    os << "dimension mismatch: " << a << " vs " << b;
    return os.str();
}

} // namespace

AlgebraElement::AlgebraElement(Eigen::MatrixXd entries, double trace_tol)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("algebra element must be square");
    }
    if (entries_.rows() < 2) {
        throw std::invalid_argument("algebra element needs n >= 2");
    }
    const double tr = entries_.trace();
    if (std::abs(tr) > trace_tol) {
        std::ostringstream os;
        os << "matrix not traceless: trace = " << tr;
        throw std::invalid_argument(os.str());
    }
}

AlgebraElement AlgebraElement::zero(Eigen::Index n) {
    return AlgebraElement(Eigen::MatrixXd::Zero(n, n));
}

AlgebraElement AlgebraElement::sl2(double a, double b, double c) {
    Eigen::Matrix2d m;
    m << a, b, c, -a;
    return AlgebraElement(m);
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
    if (dim() != other.dim()) {
        throw std::invalid_argument(dim_mismatch_msg(dim(), other.dim()));
    }
    return AlgebraElement(entries_ + other.entries_);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& other) const {
    if (dim() != other.dim()) {
        throw std::invalid_argument(dim_mismatch_msg(dim(), other.dim()));
    }
    return AlgebraElement(entries_ - other.entries_);
}

AlgebraElement AlgebraElement::operator-() const {
    return AlgebraElement(-entries_);
}

AlgebraElement operator*(double s, const AlgebraElement& x) {
    return AlgebraElement(s * x.entries_);
}

GroupElement::GroupElement(Eigen::MatrixXd entries, double det_tol)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("group element must be square");
    }
    const double det = entries_.determinant();
    // Scale-aware check: det is a degree-n polynomial in the entries, so the
    // attainable accuracy degrades with the matrix magnitude.
    const double scale = std::max(1.0, std::pow(entries_.cwiseAbs().maxCoeff(),
                                                static_cast<double>(entries_.rows())));
    if (std::abs(det - 1.0) > det_tol * scale) {
        std::ostringstream os;
        os << "matrix not in SL(n): det = " << det;
        throw std::invalid_argument(os.str());
    }
}

GroupElement GroupElement::identity(Eigen::Index n) {
    return GroupElement(Eigen::MatrixXd::Identity(n, n));
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
    if (dim() != other.dim()) {
        throw std::invalid_argument(dim_mismatch_msg(dim(), other.dim()));
    }
    return GroupElement(entries_ * other.entries_);
}

GroupElement GroupElement::inverse() const {
    return GroupElement(entries_.inverse());
}

double GroupElement::det_error() const {
    return std::abs(entries_.determinant() - 1.0);
}

ControlRange::ControlRange(double rho_, int m_) : rho(rho_), m(m_) {
    if (!(rho > 0.0)) {
        throw std::invalid_argument("rho must be positive");
    }
    if (m < 1) {
        throw std::invalid_argument("control range needs m >= 1 channels");
    }
}

bool ControlRange::contains(const Eigen::VectorXd& c, double slack) const {
    if (c.size() != m) return false;
    return c.cwiseAbs().maxCoeff() <= rho + slack;
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
    if (x.dim() != y.dim()) {
        throw std::invalid_argument(dim_mismatch_msg(x.dim(), y.dim()));
    }
    return AlgebraElement(x.mat() * y.mat() - y.mat() * x.mat());
}

const std::vector<AlgebraElement>& sl_basis(Eigen::Index n) {
    static std::map<Eigen::Index, std::vector<AlgebraElement>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<AlgebraElement> basis;
    basis.reserve(static_cast<std::size_t>(n * n - 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) {
                if (i == n - 1) continue;
                Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
                m(i, i) = 1.0;
                m(i + 1, i + 1) = -1.0;
                basis.emplace_back(std::move(m));
            } else {
                Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
                m(i, j) = 1.0;
                basis.emplace_back(std::move(m));
            }
        }
    }
    return cache.emplace(n, std::move(basis)).first->second;
}

Eigen::VectorXd basis_coordinates(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    Eigen::VectorXd coords(n * n - 1);
    // Diagonal: m_ii = x_i - x_{i-1} with x_{n-1} = 0, so x_i is the
    // partial sum of the leading diagonal entries.
    double partial = 0.0;
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) {
                if (i == n - 1) continue;
                partial += m(i, i);
                coords(k++) = partial;
            } else {
                coords(k++) = m(i, j);
            }
        }
    }
    return coords;
}

AlgebraElement from_basis_coordinates(const Eigen::VectorXd& coords, Eigen::Index n) {
    if (coords.size() != n * n - 1) {
        throw std::invalid_argument("coordinate vector has wrong length");
    }
    const auto& basis = sl_basis(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < coords.size(); ++k) {
        m += coords(k) * basis[static_cast<std::size_t>(k)].mat();
    }
    return AlgebraElement(std::move(m));
}

Eigen::MatrixXd ad_matrix(const AlgebraElement& x) {
    const Eigen::Index n = x.dim();
    const auto& basis = sl_basis(n);
    const Eigen::Index d = n * n - 1;
    Eigen::MatrixXd ad(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        ad.col(k) = basis_coordinates(bracket(x, basis[static_cast<std::size_t>(k)]).mat());
    }
    return ad;
}

double killing_form(const AlgebraElement& x, const AlgebraElement& y) {
    if (x.dim() != y.dim()) {
        throw std::invalid_argument(dim_mismatch_msg(x.dim(), y.dim()));
    }
    return (ad_matrix(x) * ad_matrix(y)).trace();
}

AlgebraElement cartan_involution(const AlgebraElement& x) {
    return AlgebraElement(-x.mat().transpose());
}

double cartan_inner(const AlgebraElement& x, const AlgebraElement& y) {
    return -killing_form(x, cartan_involution(y));
}

GroupElement group_exp(const AlgebraElement& x, double t) {
    const Eigen::Index n = x.dim();
    if (n == 2) {
        // Traceless 2x2: X^2 = -det(X) I, so exp(tX) = c(t) I + k(t) X with
        // c, k depending only on d = det X.
        const double d = x.mat().determinant();
        double c, k;
        if (d < -tol::kStructAbs) {
            const double mu = std::sqrt(-d);
            c = std::cosh(t * mu);
            k = std::sinh(t * mu) / mu;
        } else if (d > tol::kStructAbs) {
            const double omega = std::sqrt(d);
            c = std::cos(t * omega);
            k = std::sin(t * omega) / omega;
        } else {
            // Removable singularity: series in t^2 * d.
            c = 1.0 - d * t * t / 2.0;
            k = t * (1.0 - d * t * t / 6.0);
        }
        return GroupElement(c * Eigen::Matrix2d::Identity() + k * x.mat());
    }
    Eigen::MatrixXd e = (t * x.mat()).exp();
    return GroupElement(std::move(e));
}

int ad_rank(const AlgebraElement& h, const AlgebraElement& x) {
    if (h.dim() != 2 || x.dim() != 2) {
        throw std::invalid_argument("ad_rank is defined for sl(2) inputs");
    }
    const AlgebraElement b1 = bracket(h, x);
    const AlgebraElement b2 = bracket(h, b1);
    Eigen::Matrix3d coords;
    coords.col(0) = basis_coordinates(x.mat());
    coords.col(1) = basis_coordinates(b1.mat());
    coords.col(2) = basis_coordinates(b2.mat());
    Eigen::FullPivLU<Eigen::Matrix3d> lu(coords);
    lu.setThreshold(1e-10);
    return static_cast<int>(lu.rank());
}

} // namespace liectrl

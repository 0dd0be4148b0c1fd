#ifndef GLMSEL_NUMERICS_LINALG_HPP
#define GLMSEL_NUMERICS_LINALG_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace glmsel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a symmetric system cannot be factorized even after the maximum
/// diagonal jitter.
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Dense symmetric matrix of small order.
 *
 * The stored entries are symmetrized on construction, so `(i, j)` and
 * `(j, i)` always compare equal. Orders above `max_order` are rejected.
 */
class SymMatrix {
public:
    static constexpr Eigen::Index max_order = 64;

    SymMatrix() = default;

    explicit SymMatrix(Eigen::Index order) : m_(Matrix::Zero(order, order)) {
        check_order(order);
    }

    explicit SymMatrix(const Matrix& m) {
        if (m.rows() != m.cols()) {
            throw std::invalid_argument("SymMatrix: matrix is not square");
        }
        check_order(m.rows());
        m_ = 0.5 * (m + m.transpose());
    }

    static SymMatrix identity(Eigen::Index order) {
        return SymMatrix(Matrix::Identity(order, order));
    }

    static SymMatrix diagonal(const Vector& d) {
        return SymMatrix(Matrix(d.asDiagonal()));
    }

    Eigen::Index order() const noexcept { return m_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
    const Matrix& matrix() const noexcept { return m_; }
    double trace() const { return m_.trace(); }

    SymMatrix operator-() const {
        SymMatrix out;
        out.m_ = -m_;
        return out;
    }

    friend Vector operator*(const SymMatrix& a, const Vector& x) { return a.m_ * x; }

private:
    static void check_order(Eigen::Index order) {
        if (order < 1 || order > max_order) {
            throw std::invalid_argument("SymMatrix: order " + std::to_string(order) +
                                        " outside [1, 64]");
        }
    }

    Matrix m_;
};

namespace detail {

// Cholesky that also rejects numerically rank-deficient pivots, which LLT on
// an exactly singular PSD matrix can otherwise report as success.
inline bool try_cholesky(const Matrix& a, Eigen::LLT<Matrix>& llt) {
    llt.compute(a);
    if (llt.info() != Eigen::Success) {
        return false;
    }
    const Vector diag = llt.matrixLLT().diagonal();
    const double scale = a.diagonal().cwiseAbs().maxCoeff();
    const double min_pivot = diag.cwiseAbs2().minCoeff();
    return std::isfinite(min_pivot) && min_pivot > 1e-13 * scale;
}

}  // namespace detail

/// Jitter schedule: 1e-10 * trace/p, escalated x10 until 1e-4 * trace/p.
struct JitterPolicy {
    double initial = 1e-10;
    double maximum = 1e-4;
    double factor = 10.0;
};

/**
 * Solves `A x = rhs` for a symmetric positive semidefinite `A`.
 *
 * A plain Cholesky factorization is tried first; on failure the diagonal is
 * loaded with increasing jitter relative to the mean diagonal entry.
 */
inline Vector solve_psd(const SymMatrix& a, const Vector& rhs, JitterPolicy policy = {}) {
    if (rhs.size() != a.order()) {
        throw std::invalid_argument("solve_psd: dimension mismatch");
    }
    if (!a.matrix().allFinite() || !rhs.allFinite()) {
        throw SingularSystemError("solve_psd: non-finite system");
    }
    Eigen::LLT<Matrix> llt;
    if (detail::try_cholesky(a.matrix(), llt)) {
        return llt.solve(rhs);
    }
    const double p = static_cast<double>(a.order());
    double mean_diag = std::abs(a.trace()) / p;
    if (mean_diag == 0.0) {
        mean_diag = 1.0;
    }
    for (double rel = policy.initial; rel <= policy.maximum * (1.0 + 1e-9); rel *= policy.factor) {
        Matrix loaded = a.matrix();
        loaded.diagonal().array() += rel * mean_diag;
        if (detail::try_cholesky(loaded, llt)) {
            return llt.solve(rhs);
        }
    }
    throw SingularSystemError("solve_psd: matrix is rank-deficient beyond maximum jitter");
}

struct EigenExtremes {
    double lambda_min;
    double lambda_max;
};

inline EigenExtremes eig_extremes(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
    const Vector& ev = solver.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

/// log det of a positive definite matrix; +inf when the factorization fails.
inline double log_det_pd(const SymMatrix& a) {
    Eigen::LLT<Matrix> llt;
    if (!detail::try_cholesky(a.matrix(), llt)) {
        return std::numeric_limits<double>::infinity();
    }
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace glmsel

#endif  // GLMSEL_NUMERICS_LINALG_HPP

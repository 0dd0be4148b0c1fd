#ifndef GLMSEL_ESTIMATION_HPP
#define GLMSEL_ESTIMATION_HPP

#include "glmsel/family.hpp"
#include "glmsel/numerics/linalg.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace glmsel {

/// Subset of predictor columns; bit j set means column j (0-based) is included.
using ColumnMask = std::uint32_t;

/**
 * Fixed design, responses and observation weights.
 *
 * Construction validates dimensions, finiteness and positivity of the weights,
 * and records the weight bound and the largest absolute design entry.
 */
class Dataset {
public:
    Dataset(Matrix x, Vector y) : Dataset(std::move(x), std::move(y), Vector()) {}

    Dataset(Matrix x, Vector y, Vector w) : x_(std::move(x)), y_(std::move(y)), w_(std::move(w)) {
        if (w_.size() == 0) {
            w_ = Vector::Ones(y_.size());
        }
        if (x_.rows() < 1 || x_.cols() < 1) {
            throw std::invalid_argument("Dataset: need at least one row and one column");
        }
        if (y_.size() != x_.rows() || w_.size() != x_.rows()) {
            throw std::invalid_argument("Dataset: X, y and w disagree on the number of rows");
        }
        if (!x_.allFinite() || !y_.allFinite() || !w_.allFinite()) {
            throw std::invalid_argument("Dataset: non-finite entry");
        }
        if ((w_.array() <= 0.0).any()) {
            throw std::invalid_argument("Dataset: weights must be positive");
        }
        weight_bound_ = w_.maxCoeff();
        max_abs_x_ = x_.cwiseAbs().maxCoeff();
    }

    Eigen::Index n() const noexcept { return x_.rows(); }
    Eigen::Index p() const noexcept { return x_.cols(); }
    const Matrix& x() const noexcept { return x_; }
    const Vector& y() const noexcept { return y_; }
    const Vector& w() const noexcept { return w_; }
    double weight_bound() const noexcept { return weight_bound_; }
    double max_abs_x() const noexcept { return max_abs_x_; }

    /// Dataset restricted to the columns in `alpha`, in increasing column order.
    Dataset columns(ColumnMask alpha) const {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < p(); ++j) {
            if ((alpha >> j) & 1u) idx.push_back(j);
        }
        if (idx.empty()) {
            throw std::invalid_argument("Dataset::columns: empty column subset");
        }
        if (p() < 32 && (alpha >> p()) != 0) {
            throw std::invalid_argument("Dataset::columns: mask references a missing column");
        }
        return Dataset(x_(Eigen::all, idx), y_, w_);
    }

    /// The first `rows` observations.
    Dataset head(Eigen::Index rows) const {
        if (rows < 1 || rows > n()) {
            throw std::invalid_argument("Dataset::head: row count out of range");
        }
        return Dataset(x_.topRows(rows), y_.head(rows), w_.head(rows));
    }

    Dataset with_weights(Vector w) const { return Dataset(x_, y_, std::move(w)); }

private:
    Matrix x_;
    Vector y_;
    Vector w_;
    double weight_bound_ = 1.0;
    double max_abs_x_ = 0.0;
};

struct SolverOptions {
    double tol_score = 1e-8;
    double tol_rel_loglik = 1e-12;
    int max_iter = 100;
    int max_step_halvings = 30;
    double separation_bound = 1e3;
};

struct FitResult {
    Vector beta_hat;
    double loglik = -std::numeric_limits<double>::infinity();
    double score_norm = std::numeric_limits<double>::infinity();  ///< sup-norm
    SymMatrix fisher;
    int iterations = 0;
    bool converged = false;
    bool separation_flag = false;
    std::vector<double> loglik_trace;  ///< accepted iterates, starting at beta = 0
};

namespace detail {

inline void check_beta(const Dataset& ds, const Vector& beta) {
    if (beta.size() != ds.p()) {
        throw std::invalid_argument("beta has " + std::to_string(beta.size()) + " entries, design has " +
                                    std::to_string(ds.p()) + " columns");
    }
}

}  // namespace detail

inline double weighted_loglik(const Dataset& ds, const FamilyModel& fam, const Vector& beta) {
    detail::check_beta(ds, beta);
    const Vector eta = ds.x() * beta;
    double total = 0.0;
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
        total += ds.w()(i) * loglik_contrib(fam, ds.y()(i), eta(i));
    }
    return total;
}

/// Sum of w_i x_i u'(eta_i) (y_i - mean_i).
inline Vector score(const Dataset& ds, const FamilyModel& fam, const Vector& beta) {
    detail::check_beta(ds, beta);
    const Vector eta = ds.x() * beta;
    Vector r(ds.n());
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
        detail::check_support(fam, ds.y()(i));
        r(i) = ds.w()(i) * observation_terms(fam, ds.y()(i), eta(i)).score_weight;
    }
    return ds.x().transpose() * r;
}

/// Sum of w_i u'^2 b'' x_i x_i^T.
inline SymMatrix fisher_info(const Dataset& ds, const FamilyModel& fam, const Vector& beta) {
    detail::check_beta(ds, beta);
    const Vector eta = ds.x() * beta;
    Vector d(ds.n());
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
        d(i) = ds.w()(i) * observation_terms(fam, ds.y()(i), eta(i)).info_weight;
    }
    return SymMatrix(Matrix(ds.x().transpose() * d.asDiagonal() * ds.x()));
}

/// Observed Hessian of the weighted log-likelihood, including the u''(y - mean)
/// term that the Fisher information drops.
inline SymMatrix observed_hessian(const Dataset& ds, const FamilyModel& fam, const Vector& beta) {
    detail::check_beta(ds, beta);
    const Vector eta = ds.x() * beta;
    Vector d(ds.n());
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
        const ObservationTerms t = observation_terms(fam, ds.y()(i), eta(i));
        d(i) = ds.w()(i) * (t.hess_resid - t.info_weight);
    }
    return SymMatrix(Matrix(ds.x().transpose() * d.asDiagonal() * ds.x()));
}

/**
 * Weighted maximum likelihood by Fisher scoring with step halving.
 *
 * Starts from beta = 0. Each iteration solves I(beta) step = S(beta) and
 * halves the step until the weighted log-likelihood does not decrease (up to
 * a 1e-13 relative rounding allowance). Iteration stops when the score
 * sup-norm drops below `tol_score`, or when both the relative log-likelihood
 * change and the step have stalled; `converged` is the score test. For Bernoulli
 * families an iterate with |beta_j| above `separation_bound` sets
 * `separation_flag` and ends the fit; so does a final iterate whose fitted
 * probabilities all match the 0/1 responses to within 1e-4.
 */
inline FitResult fit(const Dataset& ds, const FamilyModel& fam, const SolverOptions& opts = {}) {
    if (opts.max_iter < 1 || opts.max_step_halvings < 0 || !(opts.tol_score > 0.0)) {
        throw std::invalid_argument("fit: invalid solver options");
    }
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
        detail::check_support(fam, ds.y()(i));
    }

    FitResult res;
    Vector beta = Vector::Zero(ds.p());
    double ll = weighted_loglik(ds, fam, beta);
    res.loglik_trace.push_back(ll);
    Vector s = score(ds, fam, beta);
    SymMatrix info = fisher_info(ds, fam, beta);

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if (s.lpNorm<Eigen::Infinity>() < opts.tol_score) break;

        Vector step;
        try {
            step = solve_psd(info, s);
        } catch (const SingularSystemError&) {
            break;
        }

        // Log-likelihood values closer than this are equal up to summation rounding.
        const double rounding = 1e-13 * std::max(1.0, std::abs(ll));
        double t = 1.0;
        bool accepted = false;
        Vector candidate;
        double cand_ll = 0.0;
        for (int h = 0; h <= opts.max_step_halvings; ++h, t *= 0.5) {
            candidate = beta + t * step;
            cand_ll = weighted_loglik(ds, fam, candidate);
            if (std::isfinite(cand_ll) && cand_ll >= ll - rounding) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;

        const double rel_change = std::abs(cand_ll - ll) / std::max(1.0, std::abs(ll));
        const double step_size = t * step.lpNorm<Eigen::Infinity>();
        beta = std::move(candidate);
        ll = cand_ll;
        res.loglik_trace.push_back(ll);
        res.iterations = iter + 1;
        s = score(ds, fam, beta);
        info = fisher_info(ds, fam, beta);

        if (fam.bernoulli() && beta.lpNorm<Eigen::Infinity>() > opts.separation_bound) {
            res.separation_flag = true;
            break;
        }
        // Stalled: neither the objective nor the iterate moves any more.
        if (rel_change < opts.tol_rel_loglik && step_size <= 1e-12 * (1.0 + beta.lpNorm<Eigen::Infinity>())) break;
    }

    if (fam.bernoulli() && !res.separation_flag) {
        // Under complete separation the score vanishes geometrically while
        // beta only grows linearly, so a tiny score is not evidence of an MLE.
        const Vector eta = ds.x() * beta;
        double max_resid = 0.0;
        for (Eigen::Index i = 0; i < ds.n(); ++i) {
            max_resid = std::max(max_resid, std::abs(ds.y()(i) - mean(fam, eta(i))));
        }
        res.separation_flag = max_resid < 1e-4;
    }

    res.beta_hat = std::move(beta);
    res.loglik = ll;
    res.score_norm = s.lpNorm<Eigen::Infinity>();
    res.fisher = std::move(info);
    res.converged = !res.separation_flag && res.score_norm < opts.tol_score;
    return res;
}

/// Fit restricted to the columns in `alpha`; identical to fitting `ds.columns(alpha)`.
inline FitResult fit_columns(const Dataset& ds, ColumnMask alpha, const FamilyModel& fam,
                             const SolverOptions& opts = {}) {
    return fit(ds.columns(alpha), fam, opts);
}

/// Scatters sub-model coefficients back into a length-p vector (zeros elsewhere).
inline Vector embed(const Vector& beta_sub, ColumnMask alpha, Eigen::Index p) {
    Vector out = Vector::Zero(p);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
        if ((alpha >> j) & 1u) {
            if (k >= beta_sub.size()) throw std::invalid_argument("embed: mask larger than coefficient vector");
            out(j) = beta_sub(k++);
        }
    }
    if (k != beta_sub.size()) throw std::invalid_argument("embed: mask and coefficient vector disagree");
    return out;
}

inline int mask_size(ColumnMask alpha) noexcept { return std::popcount(alpha); }

}  // namespace glmsel

#endif  // GLMSEL_ESTIMATION_HPP

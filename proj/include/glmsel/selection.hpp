#ifndef GLMSEL_SELECTION_HPP
#define GLMSEL_SELECTION_HPP

#include "glmsel/estimation.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace glmsel {

enum class CriterionKind { aic, bic, scc, custom };
enum class CriterionScale { total, per_observation };

/**
 * Penalty C(n, beta_hat(alpha)) and the scale the criterion is reported on.
 *
 * On the total scale the criterion is `-loglik + C`; per observation it is
 * `-loglik / n + C / n`, except that Gaussian fits use `log(RSS / n)` as the
 * data-fit term there. `custom_penalty` gives the total-scale penalty as a
 * function of (n, p_alpha) and must increase in p_alpha.
 */
struct CriterionSpec {
    CriterionKind kind = CriterionKind::bic;
    CriterionScale scale = CriterionScale::total;
    double scc_epsilon = 1.0;
    std::function<double(double n, int p_alpha)> custom_penalty;
    std::string custom_name = "custom";

    static CriterionSpec make(CriterionKind k, CriterionScale s) {
        CriterionSpec c;
        c.kind = k;
        c.scale = s;
        return c;
    }
    static CriterionSpec aic(CriterionScale s = CriterionScale::total) { return make(CriterionKind::aic, s); }
    static CriterionSpec bic(CriterionScale s = CriterionScale::total) { return make(CriterionKind::bic, s); }
    static CriterionSpec scc(double eps = 1.0, CriterionScale s = CriterionScale::total) {
        CriterionSpec c = make(CriterionKind::scc, s);
        c.scc_epsilon = eps;
        return c;
    }
    static CriterionSpec custom(std::function<double(double, int)> pen, std::string name,
                                CriterionScale s = CriterionScale::total) {
        CriterionSpec c = make(CriterionKind::custom, s);
        c.custom_penalty = std::move(pen);
        c.custom_name = std::move(name);
        return c;
    }
};

inline std::string criterion_name(const CriterionSpec& spec) {
    switch (spec.kind) {
        case CriterionKind::aic: return "AIC";
        case CriterionKind::bic: return "BIC";
        case CriterionKind::scc: return "SCC";
        case CriterionKind::custom: return spec.custom_name;
    }
    return "unknown";
}

inline CriterionSpec criterion_from_tag(std::string_view tag, CriterionScale scale) {
    if (tag == "aic" || tag == "AIC") return CriterionSpec::aic(scale);
    if (tag == "bic" || tag == "BIC") return CriterionSpec::bic(scale);
    if (tag == "scc" || tag == "SCC") return CriterionSpec::scc(1.0, scale);
    throw std::invalid_argument("unknown criterion '" + std::string(tag) + "'");
}

struct CandidateModel {
    ColumnMask alpha = 0;
    int p_alpha = 0;
    FitResult fit;
    double criterion_value = std::numeric_limits<double>::infinity();
};

enum class SelectionLabel { correct, overfit, underfit };

inline std::string_view label_name(SelectionLabel l) {
    switch (l) {
        case SelectionLabel::correct: return "correct";
        case SelectionLabel::overfit: return "overfit";
        case SelectionLabel::underfit: return "underfit";
    }
    return "unknown";
}

struct SelectionOutcome {
    CandidateModel chosen;
    SelectionLabel label = SelectionLabel::underfit;
    double beta_full_error = 0.0;  ///< ||embed(beta_hat(chosen)) - beta0||^2
};

inline constexpr int max_enumeration_p = 20;

/// All non-empty column subsets of {0..p-1}, in increasing mask order.
inline std::vector<ColumnMask> enumerate_candidates(int p) {
    if (p < 1 || p > max_enumeration_p) {
        throw std::invalid_argument("enumerate_candidates: p must be in [1, 20]");
    }
    std::vector<ColumnMask> out;
    out.reserve((std::size_t{1} << p) - 1);
    for (ColumnMask m = 1; m < (ColumnMask{1} << p); ++m) out.push_back(m);
    return out;
}

/**
 * Penalty on the scale given by `spec.scale`.
 *
 * Total: AIC p, BIC (1/2) p log n, SCC (1/2) log det I + sum_{i>=2} log(|beta_i| + eps n^{-1/4}).
 * Per observation: AIC p / n, BIC p log n / n, SCC and custom divided by n.
 * A singular information matrix makes the SCC penalty +inf.
 */
inline double penalty(const CriterionSpec& spec, double n, const FitResult& fit, int p_alpha) {
    if (!(n >= 1.0)) throw std::invalid_argument("penalty: n must be >= 1");
    if (p_alpha < 1) throw std::invalid_argument("penalty: p_alpha must be >= 1");
    const bool per_obs = spec.scale == CriterionScale::per_observation;
    switch (spec.kind) {
        case CriterionKind::aic: return per_obs ? p_alpha / n : static_cast<double>(p_alpha);
        case CriterionKind::bic: return per_obs ? p_alpha * std::log(n) / n : 0.5 * p_alpha * std::log(n);
        case CriterionKind::scc: {
            if (fit.fisher.order() != p_alpha || fit.beta_hat.size() != p_alpha) {
                throw std::invalid_argument("penalty: SCC needs the sub-model fit");
            }
            double total = 0.5 * log_det_pd(fit.fisher);
            const double floor = spec.scc_epsilon * std::pow(n, -0.25);
            for (int i = 1; i < p_alpha; ++i) {
                total += std::log(std::abs(fit.beta_hat(i)) + floor);
            }
            return per_obs ? total / n : total;
        }
        case CriterionKind::custom: {
            if (!spec.custom_penalty) throw std::invalid_argument("penalty: custom criterion without a penalty");
            const double total = spec.custom_penalty(n, p_alpha);
            return per_obs ? total / n : total;
        }
    }
    throw std::logic_error("penalty: unknown criterion");
}

/// Residual sum of squares of a Gaussian sub-model fit.
inline double residual_sum_squares(const Dataset& ds, ColumnMask alpha, const Vector& beta_sub) {
    const Vector r = ds.y() - ds.x() * embed(beta_sub, alpha, ds.p());
    return r.squaredNorm();
}

/// S_n(alpha) for a fitted candidate; +inf when the fit did not converge.
inline double criterion_value(const CriterionSpec& spec, const Dataset& ds, const FamilyModel& fam,
                              const CandidateModel& cand) {
    if (!cand.fit.converged) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(ds.n());
    const double pen = penalty(spec, n, cand.fit, cand.p_alpha);
    if (spec.scale == CriterionScale::total) return -cand.fit.loglik + pen;
    if (fam.kind == FamilyKind::gaussian_identity) {
        return std::log(residual_sum_squares(ds, cand.alpha, cand.fit.beta_hat) / n) + pen;
    }
    return -cand.fit.loglik / n + pen;
}

/// Fits every non-empty sub-model of `ds`; criterion values are left unset.
inline std::vector<CandidateModel> fit_candidates(const Dataset& ds, const FamilyModel& fam,
                                                  const SolverOptions& opts = {}) {
    std::vector<CandidateModel> out;
    for (ColumnMask alpha : enumerate_candidates(static_cast<int>(ds.p()))) {
        out.push_back({alpha, mask_size(alpha), fit_columns(ds, alpha, fam, opts),
                       std::numeric_limits<double>::infinity()});
    }
    return out;
}

inline SelectionLabel classify(ColumnMask chosen, ColumnMask alpha0) {
    if (chosen == alpha0) return SelectionLabel::correct;
    if ((chosen & alpha0) == alpha0) return SelectionLabel::overfit;
    return SelectionLabel::underfit;
}

namespace detail {

inline void check_truth(const Dataset& ds, ColumnMask alpha0, const Vector& beta0) {
    if (alpha0 == 0) throw std::invalid_argument("select: alpha0 must be non-empty");
    if (beta0.size() != ds.p()) throw std::invalid_argument("select: beta0 length differs from column count");
    for (Eigen::Index j = 0; j < ds.p(); ++j) {
        const bool in_support = beta0(j) != 0.0;
        const bool in_alpha0 = ((alpha0 >> j) & 1u) != 0;
        if (in_support != in_alpha0) throw std::invalid_argument("select: beta0 support differs from alpha0");
    }
    if (ds.p() < 32 && (alpha0 >> ds.p()) != 0) throw std::invalid_argument("select: alpha0 out of range");
}

}  // namespace detail

/**
 * Argmin of the criterion over pre-fitted candidates. Ties go to the smaller
 * model, then to the smaller mask. If no candidate converged the outcome is
 * labelled underfit with infinite criterion value and coefficient error.
 */
inline SelectionOutcome choose(const CriterionSpec& spec, const Dataset& ds, const FamilyModel& fam,
                               const std::vector<CandidateModel>& candidates, ColumnMask alpha0,
                               const Vector& beta0) {
    detail::check_truth(ds, alpha0, beta0);
    if (candidates.empty()) throw std::invalid_argument("choose: no candidates");
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const double v = criterion_value(spec, ds, fam, candidates[k]);
        if (!std::isfinite(v)) continue;
        const auto& c = candidates[k];
        const auto& b = candidates[best];
        if (!any || v < best_value ||
            (v == best_value && (c.p_alpha < b.p_alpha || (c.p_alpha == b.p_alpha && c.alpha < b.alpha)))) {
            best = k;
            best_value = v;
            any = true;
        }
    }
    SelectionOutcome out;
    out.chosen = candidates[best];
    out.chosen.criterion_value = best_value;
    out.label = any ? classify(out.chosen.alpha, alpha0) : SelectionLabel::underfit;
    out.beta_full_error = any ? (embed(out.chosen.fit.beta_hat, out.chosen.alpha, ds.p()) - beta0).squaredNorm()
                              : std::numeric_limits<double>::infinity();
    return out;
}

/// Exhaustive best-subset selection: fit all 2^p - 1 candidates and take the argmin.
inline SelectionOutcome select(const CriterionSpec& spec, const Dataset& ds, const FamilyModel& fam,
                               ColumnMask alpha0, const Vector& beta0, const SolverOptions& opts = {}) {
    detail::check_truth(ds, alpha0, beta0);
    return choose(spec, ds, fam, fit_candidates(ds, fam, opts), alpha0, beta0);
}

}  // namespace glmsel

#endif  // GLMSEL_SELECTION_HPP

#ifndef GLMSEL_FAMILY_HPP
#define GLMSEL_FAMILY_HPP

#include "glmsel/numerics/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace glmsel {

enum class FamilyKind { gaussian_identity, bernoulli_logit, bernoulli_probit, poisson_log, negbin_log };

/**
 * One exponential-family GLM written through its relation function u and
 * cumulant b: the per-observation log-likelihood is `y u(eta) - b(u(eta))`.
 *
 * `dispersion` is the known negative-binomial size theta; the other families
 * ignore it and keep the conventional value 1.
 */
struct FamilyModel {
    FamilyKind kind = FamilyKind::gaussian_identity;
    double dispersion = 1.0;

    static FamilyModel gaussian() { return {FamilyKind::gaussian_identity, 1.0}; }
    static FamilyModel logit() { return {FamilyKind::bernoulli_logit, 1.0}; }
    static FamilyModel probit() { return {FamilyKind::bernoulli_probit, 1.0}; }
    static FamilyModel poisson() { return {FamilyKind::poisson_log, 1.0}; }
    static FamilyModel negbin(double theta) {
        if (!(theta > 0.0) || !std::isfinite(theta)) {
            throw std::invalid_argument("negbin: theta must be positive and finite");
        }
        return {FamilyKind::negbin_log, theta};
    }

    bool canonical() const noexcept {
        return kind == FamilyKind::gaussian_identity || kind == FamilyKind::bernoulli_logit ||
               kind == FamilyKind::poisson_log;
    }
    bool bernoulli() const noexcept {
        return kind == FamilyKind::bernoulli_logit || kind == FamilyKind::bernoulli_probit;
    }

    friend bool operator==(const FamilyModel&, const FamilyModel&) = default;
};

/// Config tags: "gaussian", "logit", "probit", "poisson", "negbin".
inline FamilyModel family_from_tag(std::string_view tag, double theta = 0.0) {
    if (tag == "gaussian") return FamilyModel::gaussian();
    if (tag == "logit") return FamilyModel::logit();
    if (tag == "probit") return FamilyModel::probit();
    if (tag == "poisson") return FamilyModel::poisson();
    if (tag == "negbin") {
        if (theta <= 0.0) throw std::invalid_argument("family 'negbin' requires a positive theta");
        return FamilyModel::negbin(theta);
    }
    throw std::invalid_argument("unknown family tag '" + std::string(tag) + "'");
}

inline std::string_view family_tag(const FamilyModel& fam) {
    switch (fam.kind) {
        case FamilyKind::gaussian_identity: return "gaussian";
        case FamilyKind::bernoulli_logit: return "logit";
        case FamilyKind::bernoulli_probit: return "probit";
        case FamilyKind::poisson_log: return "poisson";
        case FamilyKind::negbin_log: return "negbin";
    }
    return "unknown";
}

struct RelationDerivs {
    double u;
    double du;
    double d2u;
};

namespace detail {

// exp() capped so that count-family terms saturate instead of overflowing.
inline double capped_exp(double x) { return std::exp(std::min(x, 700.0)); }

inline double log1p_exp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

inline double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// log(theta + e^eta) without overflow.
inline double log_theta_plus_exp(double log_theta, double eta) {
    return std::max(log_theta, eta) + log1p_exp(-std::abs(eta - log_theta));
}

// Mills-type ratios phi/Phi and phi/(1 - Phi), formed in log space.
struct ProbitRatios {
    LogNormalCdf logs;
    double lower;  // phi / Phi
    double upper;  // phi / (1 - Phi)
};

inline ProbitRatios probit_ratios(double eta) {
    const LogNormalCdf l = log_phi_cdf(eta);
    const double lpdf = normal_log_pdf(eta);
    return {l, std::exp(lpdf - l.log_phi), std::exp(lpdf - l.log_1m_phi)};
}

inline void check_support(const FamilyModel& fam, double y) {
    if (!std::isfinite(y)) throw std::domain_error("response is not finite");
    switch (fam.kind) {
        case FamilyKind::gaussian_identity: return;
        case FamilyKind::bernoulli_logit:
        case FamilyKind::bernoulli_probit:
            if (y != 0.0 && y != 1.0) throw std::domain_error("Bernoulli response must be 0 or 1");
            return;
        case FamilyKind::poisson_log:
        case FamilyKind::negbin_log:
            if (y < 0.0 || y != std::floor(y)) throw std::domain_error("count response must be a nonnegative integer");
            return;
    }
}

}  // namespace detail

/// u(eta), u'(eta), u''(eta). Canonical families return (eta, 1, 0) exactly.
inline RelationDerivs u_derivs(const FamilyModel& fam, double eta) {
    switch (fam.kind) {
        case FamilyKind::gaussian_identity:
        case FamilyKind::bernoulli_logit:
        case FamilyKind::poisson_log:
            return {eta, 1.0, 0.0};
        case FamilyKind::bernoulli_probit: {
            // u = log Phi - log(1 - Phi); u' = phi/Phi + phi/(1-Phi);
            // u'' = -u' (eta + phi/Phi - phi/(1-Phi)).
            const auto r = detail::probit_ratios(eta);
            const double du = r.lower + r.upper;
            return {r.logs.log_phi - r.logs.log_1m_phi, du, -du * (eta + r.lower - r.upper)};
        }
        case FamilyKind::negbin_log: {
            const double theta = fam.dispersion;
            const double lt = std::log(theta);
            const double du = detail::logistic(lt - eta);  // theta / (theta + e^eta)
            return {eta - detail::log_theta_plus_exp(lt, eta), du, -du * (1.0 - du)};
        }
    }
    throw std::logic_error("u_derivs: unknown family");
}

/// b(u(eta)) as displayed for each family (negbin: theta log(theta + e^eta)).
inline double cumulant(const FamilyModel& fam, double eta) {
    switch (fam.kind) {
        case FamilyKind::gaussian_identity: return 0.5 * eta * eta;
        case FamilyKind::bernoulli_logit: return detail::log1p_exp(eta);
        case FamilyKind::bernoulli_probit: return -log_phi_cdf(eta).log_1m_phi;
        case FamilyKind::poisson_log: return detail::capped_exp(eta);
        case FamilyKind::negbin_log:
            return fam.dispersion * detail::log_theta_plus_exp(std::log(fam.dispersion), eta);
    }
    throw std::logic_error("cumulant: unknown family");
}

/// E(y) = b'(u(eta)).
inline double mean(const FamilyModel& fam, double eta) {
    switch (fam.kind) {
        case FamilyKind::gaussian_identity: return eta;
        case FamilyKind::bernoulli_logit: return detail::logistic(eta);
        case FamilyKind::bernoulli_probit: return normal_cdf(eta);
        case FamilyKind::poisson_log:
        case FamilyKind::negbin_log: return detail::capped_exp(eta);
    }
    throw std::logic_error("mean: unknown family");
}

/// Var(y) = b''(u(eta)); negbin gives mu + mu^2 / theta.
inline double variance(const FamilyModel& fam, double eta) {
    switch (fam.kind) {
        case FamilyKind::gaussian_identity: return 1.0;
        case FamilyKind::bernoulli_logit: {
            const double p = detail::logistic(eta);
            return p * detail::logistic(-eta);
        }
        case FamilyKind::bernoulli_probit: {
            const LogNormalCdf l = log_phi_cdf(eta);
            return std::exp(l.log_phi + l.log_1m_phi);
        }
        case FamilyKind::poisson_log: return detail::capped_exp(eta);
        case FamilyKind::negbin_log: {
            const double mu = detail::capped_exp(eta);
            return mu + mu * mu / fam.dispersion;
        }
    }
    throw std::logic_error("variance: unknown family");
}

/**
 * Per-observation log-likelihood, up to a term that depends on y only.
 *
 * Probit uses `y log Phi(eta) + (1 - y) log(1 - Phi(eta))`. Negbin adds the
 * constant `theta log theta` to `y u - b`, which makes the y = 0 term the exact
 * log probability mass.
 */
inline double loglik_contrib(const FamilyModel& fam, double y, double eta) {
    detail::check_support(fam, y);
    switch (fam.kind) {
        case FamilyKind::gaussian_identity: return y * eta - 0.5 * eta * eta;
        case FamilyKind::bernoulli_logit: return y * eta - detail::log1p_exp(eta);
        case FamilyKind::bernoulli_probit: {
            const LogNormalCdf l = log_phi_cdf(eta);
            return y == 1.0 ? l.log_phi : l.log_1m_phi;
        }
        case FamilyKind::poisson_log: return y * eta - detail::capped_exp(eta);
        case FamilyKind::negbin_log: {
            const double theta = fam.dispersion;
            const double lt = std::log(theta);
            return y * eta - (theta + y) * detail::log_theta_plus_exp(lt, eta) + theta * lt;
        }
    }
    throw std::logic_error("loglik_contrib: unknown family");
}

/// Score and Fisher-information multipliers for one observation:
/// `score_weight = u' (y - mean)`, `info_weight = u'^2 b''`, `hess_resid = u'' (y - mean)`.
struct ObservationTerms {
    double score_weight;
    double info_weight;
    double hess_resid;
};

inline ObservationTerms observation_terms(const FamilyModel& fam, double y, double eta) {
    const RelationDerivs d = u_derivs(fam, eta);
    const double resid = y - mean(fam, eta);
    if (fam.kind == FamilyKind::bernoulli_probit) {
        // u'^2 Phi (1 - Phi) = phi (phi/Phi + phi/(1-Phi)) stays finite in both tails.
        return {d.du * resid, normal_pdf(eta) * d.du, d.d2u * resid};
    }
    return {d.du * resid, d.du * d.du * variance(fam, eta), d.d2u * resid};
}

}  // namespace glmsel

#endif  // GLMSEL_FAMILY_HPP

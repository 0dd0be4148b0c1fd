#ifndef GLMSEL_SIMULATE_HPP
#define GLMSEL_SIMULATE_HPP

#include "glmsel/family.hpp"
#include "glmsel/numerics/linalg.hpp"
#include "glmsel/numerics/random.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace glmsel {

enum class CovariateLaw { uniform01, uniform_bounds };

struct DesignSpec {
    Eigen::Index n = 0;
    Eigen::Index p_signal = 0;
    Eigen::Index p_noise = 0;
    CovariateLaw law = CovariateLaw::uniform01;
    double lower = 0.0;  ///< uniform_bounds only
    double upper = 1.0;  ///< uniform_bounds only
    RngStream seed{0, 0};

    Eigen::Index columns() const noexcept { return p_signal + p_noise; }
    /// Bound L on |x_ij| guaranteed by the covariate law.
    double bound() const {
        return law == CovariateLaw::uniform01 ? 1.0 : std::max(std::abs(lower), std::abs(upper));
    }
};

/// n x (p_signal + p_noise) design of iid uniform covariates, filled row by row.
inline Matrix gen_design(const DesignSpec& spec) {
    if (spec.n < 1 || spec.p_signal < 0 || spec.p_noise < 0 || spec.columns() < 1) {
        throw std::invalid_argument("gen_design: invalid dimensions");
    }
    UniformDist law{0.0, 1.0};
    if (spec.law == CovariateLaw::uniform_bounds) {
        if (!(spec.lower < spec.upper)) throw std::invalid_argument("gen_design: lower must be < upper");
        law = {spec.lower, spec.upper};
    }
    RngStream s = spec.seed;
    Matrix x(spec.n, spec.columns());
    for (Eigen::Index i = 0; i < spec.n; ++i) {
        for (Eigen::Index j = 0; j < spec.columns(); ++j) x(i, j) = sample(s, law);
    }
    return x;
}

/// One draw from the family's response law at linear predictor `eta`.
/// Negbin uses the Poisson-Gamma mixture with Gamma shape theta and mean e^eta.
inline double sample_response(RngStream& s, const FamilyModel& fam, double eta) {
    switch (fam.kind) {
        case FamilyKind::gaussian_identity: return sample(s, NormalDist{eta, 1.0});
        case FamilyKind::bernoulli_logit:
        case FamilyKind::bernoulli_probit: return sample(s, BernoulliDist{mean(fam, eta)});
        case FamilyKind::poisson_log: return sample(s, PoissonDist{mean(fam, eta)});
        case FamilyKind::negbin_log: {
            const double rate = sample(s, GammaDist::with_mean(fam.dispersion, mean(fam, eta)));
            return sample(s, PoissonDist{rate});
        }
    }
    throw std::logic_error("sample_response: unknown family");
}

inline Vector gen_glm_responses(const Matrix& x, const FamilyModel& fam, const Vector& beta0, RngStream stream) {
    if (beta0.size() != x.cols()) throw std::invalid_argument("gen_glm_responses: beta0 length mismatch");
    const Vector eta = x * beta0;
    Vector y(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) y(i) = sample_response(stream, fam, eta(i));
    return y;
}

enum class ErrorKind { iid, ar1, ma };

/**
 * Zero-mean error process with Gaussian innovations e_i ~ N(0, innovation_sd^2).
 *
 * - iid: eps_i = e_i
 * - ar1: eps_i = ar_coeff eps_{i-1} + e_i, started from the stationary law
 * - ma:  eps_i = e_i + sum_k ma_coeffs[k] e_{i-k-1}; q-dependent for q coefficients
 */
struct ErrorProcessSpec {
    ErrorKind kind = ErrorKind::iid;
    double ar_coeff = 0.0;
    std::vector<double> ma_coeffs;
    double innovation_sd = 1.0;

    static ErrorProcessSpec iid(double sd = 1.0) { return {ErrorKind::iid, 0.0, {}, sd}; }
    static ErrorProcessSpec ar1(double phi, double sd = 1.0) { return {ErrorKind::ar1, phi, {}, sd}; }
    static ErrorProcessSpec ma(std::vector<double> coeffs, double sd = 1.0) {
        return {ErrorKind::ma, 0.0, std::move(coeffs), sd};
    }

    /// Stationary marginal variance.
    double variance() const {
        const double s2 = innovation_sd * innovation_sd;
        switch (kind) {
            case ErrorKind::iid: return s2;
            case ErrorKind::ar1: return s2 / (1.0 - ar_coeff * ar_coeff);
            case ErrorKind::ma: {
                double v = 1.0;
                for (double c : ma_coeffs) v += c * c;
                return s2 * v;
            }
        }
        return s2;
    }
};

inline void validate(const ErrorProcessSpec& err) {
    if (!(err.innovation_sd > 0.0)) throw std::invalid_argument("error process: innovation_sd must be > 0");
    if (err.kind == ErrorKind::ar1 && !(std::abs(err.ar_coeff) < 1.0)) {
        throw std::invalid_argument("error process: |ar_coeff| must be < 1 for stationarity");
    }
}

inline Vector gen_errors(Eigen::Index n, const ErrorProcessSpec& err, RngStream stream) {
    validate(err);
    const NormalDist innov{0.0, err.innovation_sd};
    Vector eps(n);
    switch (err.kind) {
        case ErrorKind::iid:
            for (Eigen::Index i = 0; i < n; ++i) eps(i) = sample(stream, innov);
            break;
        case ErrorKind::ar1: {
            double prev = sample(stream, NormalDist{0.0, std::sqrt(err.variance())});
            for (Eigen::Index i = 0; i < n; ++i) {
                if (i > 0) prev = err.ar_coeff * prev + sample(stream, innov);
                eps(i) = prev;
            }
            break;
        }
        case ErrorKind::ma: {
            const auto q = static_cast<Eigen::Index>(err.ma_coeffs.size());
            Vector e(n + q);
            for (Eigen::Index i = 0; i < n + q; ++i) e(i) = sample(stream, innov);
            for (Eigen::Index i = 0; i < n; ++i) {
                double v = e(i + q);
                for (Eigen::Index k = 0; k < q; ++k) v += err.ma_coeffs[k] * e(i + q - k - 1);
                eps(i) = v;
            }
            break;
        }
    }
    return eps;
}

/// y_i = x_i^T beta0 + eps_i with eps from `err`.
inline Vector gen_dependent_lm(const Matrix& x, const Vector& beta0, const ErrorProcessSpec& err,
                               RngStream stream) {
    if (beta0.size() != x.cols()) throw std::invalid_argument("gen_dependent_lm: beta0 length mismatch");
    return x * beta0 + gen_errors(x.rows(), err, stream);
}

/// y_i = mean(x_i^T beta0) + eps_i. Only the Gaussian family keeps y in its support.
inline Vector gen_dependent_glm(const Matrix& x, const FamilyModel& fam, const Vector& beta0,
                                const ErrorProcessSpec& err, RngStream stream) {
    if (fam.kind != FamilyKind::gaussian_identity) {
        throw std::invalid_argument("gen_dependent_glm: additive dependent errors need the gaussian family, got '" +
                                    std::string(family_tag(fam)) + "'");
    }
    if (beta0.size() != x.cols()) throw std::invalid_argument("gen_dependent_glm: beta0 length mismatch");
    const Vector eta = x * beta0;
    Vector mu(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) mu(i) = mean(fam, eta(i));
    return mu + gen_errors(x.rows(), err, stream);
}

/// Sample autocovariance at `lag` (divisor N, mean removed).
inline double autocovariance(const Vector& v, Eigen::Index lag) {
    const Eigen::Index n = v.size();
    if (lag < 0 || lag >= n) throw std::invalid_argument("autocovariance: lag out of range");
    const double m = v.mean();
    double acc = 0.0;
    for (Eigen::Index i = lag; i < n; ++i) acc += (v(i) - m) * (v(i - lag) - m);
    return acc / static_cast<double>(n);
}

inline double autocorrelation(const Vector& v, Eigen::Index lag) { return autocovariance(v, lag) / autocovariance(v, 0); }

}  // namespace glmsel

#endif  // GLMSEL_SIMULATE_HPP

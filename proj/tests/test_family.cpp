#include "glmsel/family.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace glmsel;

namespace {

std::vector<FamilyModel> all_families() {
    return {FamilyModel::gaussian(), FamilyModel::logit(), FamilyModel::probit(), FamilyModel::poisson(),
            FamilyModel::negbin(10.0)};
}

// A response value inside each family's support.
double typical_y(const FamilyModel& f) {
    switch (f.kind) {
        case FamilyKind::gaussian_identity: return 0.7;
        case FamilyKind::bernoulli_logit:
        case FamilyKind::bernoulli_probit: return 1.0;
        default: return 3.0;
    }
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Family, LoglikExamples) {
    EXPECT_NEAR(loglik_contrib(FamilyModel::probit(), 1.0, 0.0), std::log(0.5), 1e-15);
    // 10 log 10 - 10 log 11 (mpmath), the exact log pmf at y = 0.
    EXPECT_NEAR(loglik_contrib(FamilyModel::negbin(10.0), 0.0, 0.0), -0.95310179804324860044, 1e-13);
    EXPECT_NEAR(loglik_contrib(FamilyModel::poisson(), 3.0, 1.0), 0.28171817154095476, 1e-14);
}

TEST(Family, MeanAndVarianceExamples) {
    EXPECT_DOUBLE_EQ(mean(FamilyModel::logit(), 0.0), 0.5);
    EXPECT_DOUBLE_EQ(mean(FamilyModel::negbin(10.0), 0.0), 1.0);
    EXPECT_DOUBLE_EQ(mean(FamilyModel::gaussian(), 2.5), 2.5);
    EXPECT_DOUBLE_EQ(variance(FamilyModel::logit(), 0.0), 0.25);
    EXPECT_NEAR(variance(FamilyModel::negbin(10.0), 0.0), 1.1, 1e-15);
    EXPECT_DOUBLE_EQ(variance(FamilyModel::gaussian(), -3.0), 1.0);
}

TEST(Family, RelationDerivativeExamples) {
    const auto c = u_derivs(FamilyModel::poisson(), 7.0);
    EXPECT_EQ(c.u, 7.0);
    EXPECT_EQ(c.du, 1.0);
    EXPECT_EQ(c.d2u, 0.0);

    // Symbolic values from tests/oracles/pointwise.py.
    const auto nb = u_derivs(FamilyModel::negbin(10.0), 0.0);
    EXPECT_NEAR(nb.u, -std::log(11.0), 1e-15);
    EXPECT_NEAR(nb.du, 10.0 / 11.0, 1e-15);
    EXPECT_NEAR(nb.d2u, -10.0 / 121.0, 1e-15);

    const auto pb = u_derivs(FamilyModel::probit(), 0.0);
    EXPECT_NEAR(pb.u, 0.0, 1e-15);
    EXPECT_NEAR(pb.du, 1.5957691216057307, 1e-14);
    EXPECT_NEAR(pb.d2u, 0.0, 1e-15);

    const auto pb13 = u_derivs(FamilyModel::probit(), 1.3);
    EXPECT_NEAR(pb13.u, 2.2332914759947874, 1e-13);
    EXPECT_NEAR(pb13.du, 1.9600628677789107, 1e-13);
    EXPECT_NEAR(pb13.d2u, 0.5499795222490892, 1e-12);
}

TEST(Family, CanonicalFamiliesHaveIdentityRelation) {
    for (const auto& f : all_families()) {
        if (!f.canonical()) continue;
        for (double eta = -10.0; eta <= 10.0; eta += 0.5) {
            const auto d = u_derivs(f, eta);
            EXPECT_EQ(d.u, eta);
            EXPECT_EQ(d.du, 1.0);
            EXPECT_EQ(d.d2u, 0.0);
        }
    }
}

TEST(Family, NegbinRelationAndCumulantMatchClosedForms) {
    const auto f = FamilyModel::negbin(10.0);
    for (double eta = -10.0; eta <= 10.0; eta += 0.25) {
        EXPECT_NEAR(u_derivs(f, eta).u, eta - std::log(10.0 + std::exp(eta)), 1e-12);
        EXPECT_NEAR(cumulant(f, eta), 10.0 * std::log(10.0 + std::exp(eta)), 1e-11);
        const double mu = std::exp(eta);
        EXPECT_NEAR(variance(f, eta), mu + mu * mu / 10.0, 1e-10 * (1 + mu * mu));
    }
}

TEST(Family, FiniteDifferenceDerivativesOnGrid) {
    const double h = 1e-5;
    for (const auto& f : all_families()) {
        for (double eta = -10.0; eta <= 10.0; eta += 0.25) {
            const auto d = u_derivs(f, eta);
            const auto up = u_derivs(f, eta + h);
            const auto dn = u_derivs(f, eta - h);
            EXPECT_LT(rel_err((up.u - dn.u) / (2 * h), d.du), 1e-6) << family_tag(f) << " eta " << eta;
            EXPECT_LT(rel_err((up.du - dn.du) / (2 * h), d.d2u), 1e-6) << family_tag(f) << " eta " << eta;
            // d/deta b(u(eta)) = b'(u) u' = mean * u'
            const double db = (cumulant(f, eta + h) - cumulant(f, eta - h)) / (2 * h);
            EXPECT_LT(rel_err(db, mean(f, eta) * d.du), 1e-6) << family_tag(f) << " eta " << eta;
        }
    }
}

TEST(Family, LoglikDerivativeIsScoreSummand) {
    const double h = 1e-5;
    for (const auto& f : all_families()) {
        const double y = typical_y(f);
        for (double eta = -10.0; eta <= 10.0; eta += 0.25) {
            const double fd = (loglik_contrib(f, y, eta + h) - loglik_contrib(f, y, eta - h)) / (2 * h);
            const double analytic = u_derivs(f, eta).du * (y - mean(f, eta));
            EXPECT_LT(rel_err(fd, analytic), 1e-6) << family_tag(f) << " eta " << eta;
            EXPECT_DOUBLE_EQ(observation_terms(f, y, eta).score_weight, analytic);
        }
    }
}

TEST(Family, VarianceNonnegativeAndMeanIncreasing) {
    for (const auto& f : all_families()) {
        double prev = -std::numeric_limits<double>::infinity();
        double prev_upper = std::numeric_limits<double>::infinity();
        for (double eta = -10.0; eta <= 10.0; eta += 0.1) {
            EXPECT_GE(variance(f, eta), 0.0);
            const double m = mean(f, eta);
            if (f.bernoulli()) {
                // Phi(eta) rounds to 1 past eta ~ 8.3; compare the upper tail mass instead.
                const double upper = f.kind == FamilyKind::bernoulli_probit ? log_phi_cdf(eta).log_1m_phi
                                                                            : -detail::log1p_exp(eta);
                EXPECT_LT(upper, prev_upper) << family_tag(f) << " eta " << eta;
                prev_upper = upper;
            } else {
                EXPECT_GT(m, prev) << family_tag(f) << " eta " << eta;
            }
            prev = m;
        }
    }
}

TEST(Family, ProbitSymmetry) {
    const auto f = FamilyModel::probit();
    for (double eta = -12.0; eta <= 12.0; eta += 0.3) {
        for (double y : {0.0, 1.0}) {
            EXPECT_EQ(loglik_contrib(f, y, eta), loglik_contrib(f, 1.0 - y, -eta));
        }
        EXPECT_NEAR(loglik_contrib(f, 1.0, eta), std::log(normal_cdf(eta)), 1e-10 * std::max(1.0, std::abs(eta * eta)));
    }
}

TEST(Family, ProbitInformationWeightEqualsUdotSquaredTimesVariance) {
    const auto f = FamilyModel::probit();
    for (double eta = -6.0; eta <= 6.0; eta += 0.5) {
        const auto d = u_derivs(f, eta);
        EXPECT_NEAR(observation_terms(f, 1.0, eta).info_weight, d.du * d.du * variance(f, eta), 1e-12);
    }
}

TEST(Family, ExtremeLinearPredictorsStayFinite) {
    for (const auto& f : all_families()) {
        for (double eta : {-40.0, -39.0, 39.0, 40.0}) {
            const double y = f.bernoulli() ? 1.0 : (f.kind == FamilyKind::gaussian_identity ? 0.0 : 2.0);
            EXPECT_TRUE(std::isfinite(loglik_contrib(f, y, eta))) << family_tag(f) << " " << eta;
            if (f.bernoulli()) {
                EXPECT_TRUE(std::isfinite(loglik_contrib(f, 0.0, eta)));
            }
            const auto t = observation_terms(f, y, eta);
            EXPECT_TRUE(std::isfinite(t.score_weight) && std::isfinite(t.info_weight) && std::isfinite(t.hess_resid))
                << family_tag(f) << " " << eta;
        }
    }
    EXPECT_TRUE(std::isfinite(loglik_contrib(FamilyModel::poisson(), 2.0, 1e4)));
}

TEST(Family, SupportViolations) {
    EXPECT_THROW(loglik_contrib(FamilyModel::logit(), 0.5, 0.0), std::domain_error);
    EXPECT_THROW(loglik_contrib(FamilyModel::probit(), 2.0, 0.0), std::domain_error);
    EXPECT_THROW(loglik_contrib(FamilyModel::poisson(), -1.0, 0.0), std::domain_error);
    EXPECT_THROW(loglik_contrib(FamilyModel::negbin(10.0), 1.5, 0.0), std::domain_error);
    EXPECT_THROW(loglik_contrib(FamilyModel::gaussian(), std::nan(""), 0.0), std::domain_error);
    EXPECT_NO_THROW(loglik_contrib(FamilyModel::gaussian(), -3.2, 0.0));
}

TEST(Family, Tags) {
    for (const auto& f : all_families()) {
        EXPECT_EQ(family_from_tag(family_tag(f), 10.0), f);
    }
    EXPECT_THROW(family_from_tag("negbin"), std::invalid_argument);
    EXPECT_THROW(family_from_tag("gamma"), std::invalid_argument);
    EXPECT_THROW(FamilyModel::negbin(-1.0), std::invalid_argument);
}

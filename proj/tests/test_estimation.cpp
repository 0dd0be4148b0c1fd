#include "glmsel/estimation.hpp"
#include "glmsel/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace glmsel;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
    Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : r) {
        Eigen::Index j = 0;
        for (double x : row) m(i, j++) = x;
        ++i;
    }
    return m;
}

std::vector<FamilyModel> all_families() {
    return {FamilyModel::gaussian(), FamilyModel::logit(), FamilyModel::probit(), FamilyModel::poisson(),
            FamilyModel::negbin(10.0)};
}

// Random instance with bounded covariates and responses drawn from the family.
Dataset random_instance(const FamilyModel& fam, RngStream s, Eigen::Index n = 60, Eigen::Index p = 3) {
    Matrix x(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) x(i, j) = sample(s, UniformDist{-1.0, 1.0});
    Vector beta(p);
    for (Eigen::Index j = 0; j < p; ++j) beta(j) = sample(s, UniformDist{-0.8, 0.8});
    Vector w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = sample(s, UniformDist{0.5, 2.0});
    return Dataset(x, gen_glm_responses(x, fam, beta, s.substream(9)), w);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-3, std::abs(b)); }

}  // namespace

TEST(Dataset, ValidatesAndRecordsBounds) {
    const Dataset ds(rows({{1, -3}, {2, 0.5}}), vec({0, 1}), vec({0.5, 2.0}));
    EXPECT_DOUBLE_EQ(ds.weight_bound(), 2.0);
    EXPECT_DOUBLE_EQ(ds.max_abs_x(), 3.0);
    EXPECT_TRUE(Dataset(rows({{1}}), vec({1})).w().isOnes());
    EXPECT_THROW(Dataset(rows({{1}}), vec({1, 2})), std::invalid_argument);
    EXPECT_THROW(Dataset(rows({{1}}), vec({1}), vec({0.0})), std::invalid_argument);
    EXPECT_THROW(Dataset(rows({{std::nan("")}}), vec({1})), std::invalid_argument);
    EXPECT_THROW(ds.columns(0), std::invalid_argument);
    EXPECT_THROW(ds.columns(0b100), std::invalid_argument);
}

TEST(WeightedLoglik, Examples) {
    EXPECT_EQ(weighted_loglik(Dataset(rows({{1}}), vec({0})), FamilyModel::gaussian(), vec({0})), 0.0);
    EXPECT_NEAR(weighted_loglik(Dataset(rows({{1}, {-1}}), vec({1, 0})), FamilyModel::logit(), vec({0})),
                -1.3862943611198906, 1e-15);
    EXPECT_NEAR(weighted_loglik(Dataset(rows({{1}}), vec({0})), FamilyModel::negbin(10.0), vec({0})),
                -0.95310179804324860044, 1e-13);
    EXPECT_THROW(weighted_loglik(Dataset(rows({{1}}), vec({0})), FamilyModel::gaussian(), vec({0, 0})),
                 std::invalid_argument);
    EXPECT_THROW(weighted_loglik(Dataset(rows({{1}}), vec({2})), FamilyModel::logit(), vec({0})), std::domain_error);
}

TEST(Score, Examples) {
    const Vector s = score(Dataset(rows({{1, 2}}), vec({1})), FamilyModel::logit(), vec({0, 0}));
    EXPECT_NEAR(s(0), 0.5, 1e-15);
    EXPECT_NEAR(s(1), 1.0, 1e-15);

    // Normal equations solution has zero Gaussian score.
    RngStream rs(4, 0);
    const Dataset ds = random_instance(FamilyModel::gaussian(), rs);
    const Matrix xtw = ds.x().transpose() * ds.w().asDiagonal();
    const Vector ols = (xtw * ds.x()).ldlt().solve(xtw * ds.y());
    EXPECT_LT(score(ds, FamilyModel::gaussian(), ols).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(Score, MatchesFiniteDifferencesOnRandomInstances) {
    const double h = 1e-6;
    for (const auto& fam : all_families()) {
        for (int inst = 0; inst < 20; ++inst) {
            RngStream s(100 + inst, static_cast<std::uint64_t>(fam.kind));
            const Dataset ds = random_instance(fam, s);
            Vector beta(ds.p());
            for (Eigen::Index j = 0; j < ds.p(); ++j) beta(j) = sample(s, UniformDist{-1.0, 1.0});
            const Vector analytic = score(ds, fam, beta);
            for (Eigen::Index j = 0; j < ds.p(); ++j) {
                Vector up = beta, dn = beta;
                up(j) += h;
                dn(j) -= h;
                const double fd = (weighted_loglik(ds, fam, up) - weighted_loglik(ds, fam, dn)) / (2 * h);
                EXPECT_LT(rel(analytic(j), fd), 1e-6) << family_tag(fam) << " instance " << inst << " j " << j;
            }
        }
    }
}

TEST(FisherInfo, Examples) {
    RngStream s(5, 0);
    const Dataset ds = random_instance(FamilyModel::gaussian(), s);
    const Matrix xtwx = ds.x().transpose() * ds.w().asDiagonal() * ds.x();
    EXPECT_TRUE(fisher_info(ds, FamilyModel::gaussian(), vec({0.3, -1, 2})).matrix().isApprox(xtwx, 1e-14));

    const SymMatrix lg = fisher_info(Dataset(rows({{1, 1}}), vec({1})), FamilyModel::logit(), vec({0, 0}));
    EXPECT_TRUE(lg.matrix().isApprox(0.25 * Matrix::Ones(2, 2)));

    const SymMatrix nb = fisher_info(Dataset(rows({{1}}), vec({0})), FamilyModel::negbin(10.0), vec({0}));
    EXPECT_NEAR(nb(0, 0), 10.0 / 11.0, 1e-15);
}

TEST(ObservedHessian, CanonicalFamiliesEqualNegativeFisher) {
    for (const auto& fam : all_families()) {
        if (!fam.canonical()) continue;
        RngStream s(6, static_cast<std::uint64_t>(fam.kind));
        const Dataset ds = random_instance(fam, s);
        const Vector beta = vec({0.2, -0.4, 0.1});
        const Matrix h = observed_hessian(ds, fam, beta).matrix();
        const Matrix f = fisher_info(ds, fam, beta).matrix();
        EXPECT_LT((h + f).cwiseAbs().maxCoeff(), 1e-12) << family_tag(fam);
    }
}

TEST(ObservedHessian, ResidualTermVanishesAtFittedMeans) {
    // eta_i = log k_i with y_i = k_i puts every response at its mean.
    const auto fam = FamilyModel::negbin(10.0);
    const Matrix x = rows({{std::log(2.0), 0.0}, {0.0, std::log(3.0)}, {std::log(5.0), std::log(1.0)}});
    const Vector y = vec({2, 3, 5});
    const Dataset ds(x, y);
    const Vector beta = vec({1.0, 1.0});
    const Matrix h = observed_hessian(ds, fam, beta).matrix();
    const Matrix f = fisher_info(ds, fam, beta).matrix();
    EXPECT_LT((h + f).cwiseAbs().maxCoeff(), 1e-13 * f.cwiseAbs().maxCoeff());
}

TEST(ObservedHessian, ProbitMatchesSecondOrderFiniteDifferences) {
    const auto fam = FamilyModel::probit();
    RngStream s(7, 0);
    const Dataset ds = random_instance(fam, s);
    const Vector beta = vec({0.3, -0.6, 0.9});
    const Matrix h = observed_hessian(ds, fam, beta).matrix();
    const double step = 1e-4;
    for (Eigen::Index a = 0; a < 3; ++a) {
        for (Eigen::Index b = 0; b < 3; ++b) {
            auto at = [&](double da, double db) {
                Vector v = beta;
                v(a) += da;
                v(b) += db;
                return weighted_loglik(ds, fam, v);
            };
            const double fd = (at(step, step) - at(step, -step) - at(-step, step) + at(-step, -step)) / (4 * step * step);
            EXPECT_LT(rel(h(a, b), fd), 1e-5) << a << "," << b;
        }
    }
}

TEST(Fit, GaussianEqualsWeightedLeastSquares) {
    for (int inst = 0; inst < 10; ++inst) {
        RngStream s(8, inst);
        const Dataset ds = random_instance(FamilyModel::gaussian(), s, 50, 4);
        const FitResult f = fit(ds, FamilyModel::gaussian());
        const Matrix xtw = ds.x().transpose() * ds.w().asDiagonal();
        const Vector wls = (xtw * ds.x()).llt().solve(xtw * ds.y());
        ASSERT_TRUE(f.converged);
        EXPECT_LT((f.beta_hat - wls).lpNorm<Eigen::Infinity>(), 1e-8);
    }
}

// Instance and maximizer from tests/oracles/logit_grid.py (grid spacing 1e-3).
TEST(Fit, LogitMatchesBruteForceGridOracle) {
    const Matrix x = rows({{-0.732, -0.181}, {-0.042, 0.707}, {0.288, -0.777}, {0.054, -0.399}, {-0.108, -0.006},
                           {0.544, -0.87},   {0.434, -0.609},  {-0.159, 0.099}, {-0.095, 0.888}, {-0.763, 0.826},
                           {-0.745, 0.384},  {0.731, 0.57},    {0.843, 0.082},  {0.43, 0.327},   {0.152, -0.956},
                           {-0.057, 0.41},   {-0.142, -0.308}, {-0.506, 0.77},  {0.265, 0.192},  {-0.159, -0.615}});
    const Vector y = vec({0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0});
    const FitResult f = fit(Dataset(x, y), FamilyModel::logit());
    ASSERT_TRUE(f.converged);
    EXPECT_NEAR(f.beta_hat(0), 2.406, 2e-3);
    EXPECT_NEAR(f.beta_hat(1), -0.184, 2e-3);
    EXPECT_NEAR(f.loglik, -11.497996033118506, 1e-5);
}

TEST(Fit, PerfectSeparationIsFlagged) {
    const Matrix x = rows({{1, -2}, {1, -1}, {1, -0.5}, {1, 0.5}, {1, 1}, {1, 2}});
    const Vector y = vec({0, 0, 0, 1, 1, 1});
    for (const auto& fam : {FamilyModel::logit(), FamilyModel::probit()}) {
        const FitResult f = fit(Dataset(x, y), fam);
        EXPECT_TRUE(!f.converged || f.separation_flag) << family_tag(fam);
        EXPECT_TRUE(f.separation_flag) << family_tag(fam);
        EXPECT_FALSE(f.converged) << family_tag(fam);
    }
}

TEST(Fit, InvariantsOnRandomInstances) {
    for (const auto& fam : all_families()) {
        for (int inst = 0; inst < 15; ++inst) {
            RngStream s(9, 100 * static_cast<std::uint64_t>(fam.kind) + inst);
            const Dataset ds = random_instance(fam, s, 80, 3);
            const FitResult f = fit(ds, fam);
            ASSERT_TRUE(f.converged) << family_tag(fam) << " " << inst;
            EXPECT_LT(f.score_norm, SolverOptions{}.tol_score);
            EXPECT_LT(score(ds, fam, f.beta_hat).lpNorm<Eigen::Infinity>(), 1e-8);
            for (std::size_t k = 1; k < f.loglik_trace.size(); ++k) {
                EXPECT_GE(f.loglik_trace[k], f.loglik_trace[k - 1] - 1e-13 * std::abs(f.loglik_trace[k - 1]));
            }
            EXPECT_GE(f.loglik, weighted_loglik(ds, fam, Vector::Zero(ds.p())));
            EXPECT_GE(eig_extremes(f.fisher).lambda_min, -1e-12);

            // Scaling every weight leaves the maximizer unchanged.
            const FitResult g = fit(ds.with_weights(3.7 * ds.w()), fam);
            EXPECT_LT((g.beta_hat - f.beta_hat).lpNorm<Eigen::Infinity>(), 1e-7) << family_tag(fam);
        }
    }
}

TEST(Fit, SubModelEmbeddingIsBitwiseIdentical) {
    RngStream s(10, 0);
    const Dataset ds = random_instance(FamilyModel::poisson(), s, 70, 4);
    for (ColumnMask alpha : {0b0001u, 0b0101u, 0b1110u, 0b1111u}) {
        const FitResult a = fit_columns(ds, alpha, FamilyModel::poisson());
        const FitResult b = fit(ds.columns(alpha), FamilyModel::poisson());
        ASSERT_EQ(a.beta_hat.size(), b.beta_hat.size());
        for (Eigen::Index j = 0; j < a.beta_hat.size(); ++j) EXPECT_EQ(a.beta_hat(j), b.beta_hat(j));
        EXPECT_EQ(a.loglik, b.loglik);
    }
}

TEST(Fit, RankDeficientDesignDoesNotThrow) {
    const Matrix x = rows({{1, 1}, {2, 2}, {3, 3}, {4, 4}});
    const FitResult f = fit(Dataset(x, vec({1, 2, 2, 5})), FamilyModel::poisson());
    EXPECT_TRUE(f.beta_hat.allFinite());
}

TEST(Fit, RejectsInvalidInputs) {
    EXPECT_THROW(fit(Dataset(rows({{1}}), vec({0.5})), FamilyModel::logit()), std::domain_error);
    SolverOptions bad;
    bad.max_iter = 0;
    EXPECT_THROW(fit(Dataset(rows({{1}}), vec({0})), FamilyModel::logit(), bad), std::invalid_argument);
}

TEST(Embed, ScattersIntoFullVector) {
    const Vector e = embed(vec({1.5, -2}), 0b1010, 4);
    EXPECT_TRUE(e.isApprox(vec({0, 1.5, 0, -2})));
    EXPECT_THROW(embed(vec({1}), 0b11, 2), std::invalid_argument);
}

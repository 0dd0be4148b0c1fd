#ifndef GLMSEL_HARNESS_EXPERIMENT_HPP
#define GLMSEL_HARNESS_EXPERIMENT_HPP

#include "glmsel/harness/config.hpp"
#include "glmsel/harness/parallel.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <vector>

namespace glmsel::harness {

struct TableRow {
    std::string model;
    std::string method;
    Eigen::Index sample_size = 0;
    double correct_rate = 0.0;
    double overfit_rate = 0.0;
    double underfit_rate = 0.0;
    double mse = 0.0;
};

struct ExperimentResult {
    std::vector<TableRow> rows;          ///< one per criterion, in config order
    std::size_t failed_fits = 0;         ///< non-converged candidate fits over all reps
    std::size_t reps_without_model = 0;  ///< reps where no candidate converged
};

/// Per-replication outcome for each configured criterion.
struct ReplicationReport {
    std::uint64_t rep_id = 0;
    std::vector<SelectionLabel> labels;
    std::vector<double> errors;
    std::size_t failed_fits = 0;
};

/// Data for replication `rep`: design from substream 0, responses from substream 1
/// of stream (base_seed, rep).
inline Dataset replication_data(const ExperimentConfig& cfg, std::uint64_t rep) {
    const RngStream stream(cfg.base_seed, rep);
    DesignSpec design;
    design.n = cfg.n;
    design.p_signal = cfg.beta0.size();
    design.seed = stream.substream(0);
    Matrix x = gen_design(design);
    Vector y = cfg.dependent_errors ? gen_dependent_lm(x, cfg.beta0, cfg.errors, stream.substream(1))
                                    : gen_glm_responses(x, cfg.family, cfg.beta0, stream.substream(1));
    return Dataset(std::move(x), std::move(y));
}

inline ReplicationReport run_replication(const ExperimentConfig& cfg, std::uint64_t rep) {
    const Dataset ds = replication_data(cfg, rep);
    const auto candidates = fit_candidates(ds, cfg.family);
    ReplicationReport out;
    out.rep_id = rep;
    for (const auto& c : candidates) out.failed_fits += c.fit.converged ? 0 : 1;
    for (const auto& spec : cfg.criteria) {
        const SelectionOutcome o = choose(spec, ds, cfg.family, candidates, cfg.alpha0(), cfg.beta0);
        out.labels.push_back(o.label);
        out.errors.push_back(o.beta_full_error);
    }
    return out;
}

/**
 * Replication study: every rep draws its own data, fits all non-empty
 * sub-models once and applies each criterion to the shared fits. Rates and
 * the mean squared coefficient error are aggregated in rep order, so the rows
 * are identical for any worker count. Reps where no candidate converged are
 * counted as underfit and left out of the MSE.
 */
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto reports = parallel_map(cfg.reps, cfg.workers, [&cfg](std::size_t r) { return run_replication(cfg, r); });

    ExperimentResult res;
    const std::size_t total_candidates = (std::size_t{1} << cfg.beta0.size()) - 1;
    for (const auto& rep : reports) {
        res.failed_fits += rep.failed_fits;
        res.reps_without_model += rep.failed_fits == total_candidates ? 1 : 0;
    }
    for (std::size_t k = 0; k < cfg.criteria.size(); ++k) {
        std::size_t counts[3] = {0, 0, 0};
        double err_sum = 0.0;
        std::size_t err_count = 0;
        for (const auto& rep : reports) {
            ++counts[static_cast<int>(rep.labels[k])];
            if (std::isfinite(rep.errors[k])) {
                err_sum += rep.errors[k];
                ++err_count;
            }
        }
        const double reps = static_cast<double>(cfg.reps);
        TableRow row;
        row.model = model_tag(cfg.model);
        row.method = criterion_name(cfg.criteria[k]);
        row.sample_size = cfg.n;
        row.correct_rate = counts[0] / reps;
        row.overfit_rate = counts[1] / reps;
        row.underfit_rate = counts[2] / reps;
        row.mse = err_count ? err_sum / err_count : std::numeric_limits<double>::quiet_NaN();
        res.rows.push_back(row);
    }
    return res;
}

struct AsymptoticsRow {
    std::uint64_t rep_id = 0;
    Eigen::Index n = 0;
    std::optional<double> ratio;
    std::optional<double> gap_correct;
    std::optional<double> gap_wrong_per_n;
};

struct AsymptoticsSummary {
    std::string scenario;
    std::size_t reps = 0;
    std::vector<Eigen::Index> grid;
    std::optional<LilBounds> bounds;
    LilSummary lil;
    double gap_correct_nonnegative_rate = 0.0;  ///< gap_correct >= -1e-6
    double gap_wrong_negative_rate = 0.0;       ///< gap_wrong_per_n < 0, over grid points n >= 500
    std::size_t failed_gap_points = 0;
};

struct AsymptoticsResult {
    std::vector<AsymptoticsRow> rows;
    std::vector<LilTrajectory> trajectories;
    AsymptoticsSummary summary;
};

/// The wrong model used for gap rows: the correct model without its last column.
inline ColumnMask drop_last_column(ColumnMask alpha) {
    return alpha & ~(ColumnMask{1} << (31 - std::countl_zero(alpha)));
}

/**
 * LIL trajectories and log-likelihood gaps on nested prefixes, one sample per
 * rep drawn from stream (base_seed, rep). Scenarios with pre-registered bounds
 * get boundedness and non-degeneracy verdicts in the summary.
 */
inline AsymptoticsResult run_asymptotics(const AsymptoticsConfig& cfg) {
    validate(cfg);
    const Scenario sc = scenarios::by_name(cfg.scenario);
    const ColumnMask wrong = drop_last_column(sc.alpha_correct);

    struct RepOut {
        LilTrajectory traj;
        std::vector<AsymptoticsRow> rows;
    };
    const auto per_rep = parallel_map(cfg.reps, cfg.workers, [&](std::size_t r) {
        const Dataset sample = generate_sample(sc, cfg.grid.back(), RngStream(cfg.base_seed, r));
        RepOut out;
        out.traj = lil_trajectory(sample, sc, cfg.grid, r);
        for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
            AsymptoticsRow row{r, cfg.grid[k], out.traj.ratios[k], std::nullopt, std::nullopt};
            if (wrong != 0) {
                try {
                    const GapReport g = gap_report(sample.head(cfg.grid[k]), sc.family, sc.beta0, sc.alpha_correct, wrong);
                    row.gap_correct = g.gap_correct;
                    row.gap_wrong_per_n = g.gap_wrong_per_n;
                } catch (const FitFailure&) {
                }
            }
            out.rows.push_back(row);
        }
        return out;
    });

    AsymptoticsResult res;
    std::size_t gc_total = 0, gc_ok = 0, gw_total = 0, gw_ok = 0;
    for (auto& rep : per_rep) {
        res.trajectories.push_back(rep.traj);
        for (const auto& row : rep.rows) {
            if (!row.gap_correct) {
                ++res.summary.failed_gap_points;
            } else {
                ++gc_total;
                gc_ok += *row.gap_correct >= -1e-6 ? 1 : 0;
                if (row.n >= 500) {
                    ++gw_total;
                    gw_ok += *row.gap_wrong_per_n < 0.0 ? 1 : 0;
                }
            }
            res.rows.push_back(row);
        }
    }
    auto& s = res.summary;
    s.scenario = cfg.scenario;
    s.reps = cfg.reps;
    s.grid = cfg.grid;
    s.gap_correct_nonnegative_rate = gc_total ? static_cast<double>(gc_ok) / gc_total : 0.0;
    s.gap_wrong_negative_rate = gw_total ? static_cast<double>(gw_ok) / gw_total : 0.0;
    try {
        s.bounds = calibrated_lil_bounds(cfg.scenario);
    } catch (const std::invalid_argument&) {
        s.bounds.reset();
    }
    s.lil = summarize_lil(res.trajectories, s.bounds.value_or(LilBounds{std::numeric_limits<double>::infinity(), 0.0}));
    return res;
}

}  // namespace glmsel::harness

#endif  // GLMSEL_HARNESS_EXPERIMENT_HPP

#ifndef GLMSEL_HARNESS_REPORT_HPP
#define GLMSEL_HARNESS_REPORT_HPP

#include "glmsel/harness/experiment.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace glmsel::harness {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string opt(const std::optional<double>& v) { return v ? general(*v) : std::string(); }

}  // namespace detail

inline constexpr const char* table_csv_header = "model,method,sample_size,correct_rate,overfit_rate,underfit_rate,mse";

/// Table rows as CSV; rates and mse in 6-decimal fixed point.
inline void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows, bool header = true) {
    if (header) out << table_csv_header << '\n';
    for (const auto& r : rows) {
        out << r.model << ',' << r.method << ',' << r.sample_size << ',' << detail::fixed6(r.correct_rate) << ','
            << detail::fixed6(r.overfit_rate) << ',' << detail::fixed6(r.underfit_rate) << ',' << detail::fixed6(r.mse)
            << '\n';
    }
}

inline constexpr const char* asymptotics_csv_header = "rep_id,n,ratio,gap_correct,gap_wrong_per_n";

/// Missing values (non-converged fits) are written as empty fields.
inline void write_asymptotics_csv(std::ostream& out, const std::vector<AsymptoticsRow>& rows) {
    out << asymptotics_csv_header << '\n';
    for (const auto& r : rows) {
        out << r.rep_id << ',' << r.n << ',' << detail::opt(r.ratio) << ',' << detail::opt(r.gap_correct) << ','
            << detail::opt(r.gap_wrong_per_n) << '\n';
    }
}

inline nlohmann::ordered_json summary_json(const AsymptoticsSummary& s) {
    nlohmann::ordered_json j;
    j["scenario"] = s.scenario;
    j["reps"] = s.reps;
    j["grid"] = s.grid;
    j["missing_points"] = s.lil.missing_points;
    j["boundedness_pass_rate"] = s.lil.boundedness_pass_rate;
    j["median_ratio_at_max_n"] = s.lil.median_ratio_at_max_n;
    if (s.bounds) {
        j["ratio_ceiling"] = s.bounds->ceiling;
        j["ratio_floor"] = s.bounds->floor;
        j["boundedness_pass"] = s.lil.boundedness_pass;
        j["nondegeneracy_pass"] = s.lil.nondegeneracy_pass;
    } else {
        j["ratio_ceiling"] = nullptr;
        j["ratio_floor"] = nullptr;
        j["boundedness_pass"] = nullptr;
        j["nondegeneracy_pass"] = nullptr;
    }
    j["gap_correct_nonnegative_rate"] = s.gap_correct_nonnegative_rate;
    j["gap_wrong_negative_rate"] = s.gap_wrong_negative_rate;
    j["failed_gap_points"] = s.failed_gap_points;
    return j;
}

inline nlohmann::ordered_json fit_json(const FitResult& f) {
    nlohmann::ordered_json j;
    j["beta_hat"] = std::vector<double>(f.beta_hat.data(), f.beta_hat.data() + f.beta_hat.size());
    j["loglik"] = f.loglik;
    j["score_norm"] = f.score_norm;
    j["iterations"] = f.iterations;
    j["converged"] = f.converged;
    j["separation_flag"] = f.separation_flag;
    std::vector<std::vector<double>> info;
    for (Eigen::Index i = 0; i < f.fisher.order(); ++i) {
        info.emplace_back();
        for (Eigen::Index k = 0; k < f.fisher.order(); ++k) info.back().push_back(f.fisher(i, k));
    }
    j["fisher"] = info;
    return j;
}

/// Opens `path` for writing, or throws IoError naming the path.
inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

/**
 * Reads a CSV with a header row: one column named `y`, every other column is
 * a predictor in file order. Fields are plain decimal numbers.
 */
inline Dataset read_dataset_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw IoError(origin + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) header.push_back(glmsel::harness::detail::trim(f));
    }
    const auto y_it = std::find(header.begin(), header.end(), "y");
    if (y_it == header.end()) throw IoError(origin + ": header has no 'y' column");
    const auto y_col = static_cast<std::size_t>(y_it - header.begin());
    if (header.size() < 2) throw IoError(origin + ": need at least one predictor column");

    std::vector<double> ys, xs;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (glmsel::harness::detail::trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string f;
        std::size_t col = 0;
        while (std::getline(ss, f, ',')) {
            double v = 0.0;
            try {
                v = glmsel::harness::detail::to_double(header.at(col), glmsel::harness::detail::trim(f));
            } catch (const std::exception&) {
                throw IoError(origin + ":" + std::to_string(lineno) + ": bad field in column " + std::to_string(col + 1));
            }
            (col == y_col ? ys : xs).push_back(v);
            ++col;
        }
        if (col != header.size()) {
            throw IoError(origin + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) + " fields");
        }
    }
    const auto n = static_cast<Eigen::Index>(ys.size());
    const auto p = static_cast<Eigen::Index>(header.size() - 1);
    if (n == 0) throw IoError(origin + ": no data rows");
    Matrix x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(xs.data(), n, p);
    return Dataset(std::move(x), Eigen::Map<const Vector>(ys.data(), n));
}

inline Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_dataset_csv(in, path);
}

}  // namespace glmsel::harness

#endif  // GLMSEL_HARNESS_REPORT_HPP

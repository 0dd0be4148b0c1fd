#ifndef GLMSEL_HARNESS_CONFIG_HPP
#define GLMSEL_HARNESS_CONFIG_HPP

#include "glmsel/asymptotics.hpp"
#include "glmsel/selection.hpp"
#include "glmsel/simulate.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace glmsel::harness {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ModelPreset { nbr, probit, dep_lm_mr2, dep_lm_mr3, custom };

inline std::string model_tag(ModelPreset m) {
    switch (m) {
        case ModelPreset::nbr: return "nbr";
        case ModelPreset::probit: return "probit";
        case ModelPreset::dep_lm_mr2: return "dep-lm-mr2";
        case ModelPreset::dep_lm_mr3: return "dep-lm-mr3";
        case ModelPreset::custom: return "custom";
    }
    return "unknown";
}

inline ModelPreset model_from_tag(const std::string& tag) {
    for (auto m : {ModelPreset::nbr, ModelPreset::probit, ModelPreset::dep_lm_mr2, ModelPreset::dep_lm_mr3,
                   ModelPreset::custom}) {
        if (model_tag(m) == tag) return m;
    }
    throw ConfigError("unknown model '" + tag + "' (expected nbr, probit, dep-lm-mr2, dep-lm-mr3, custom)");
}

/**
 * One cell family of the replication study. `family` and `errors` describe
 * how responses are drawn: dependent-error models use the Gaussian family
 * with an additive error process, the others draw independent responses.
 */
struct ExperimentConfig {
    ModelPreset model = ModelPreset::nbr;
    Eigen::Index n = 300;
    std::size_t reps = 500;
    Vector beta0;
    double theta = 10.0;
    FamilyModel family = FamilyModel::negbin(10.0);
    ErrorProcessSpec errors = ErrorProcessSpec::iid();
    bool dependent_errors = false;
    std::vector<CriterionSpec> criteria;
    std::uint64_t base_seed = 42;
    unsigned workers = 1;

    ColumnMask alpha0() const {
        ColumnMask a = 0;
        for (Eigen::Index j = 0; j < beta0.size(); ++j) {
            if (beta0(j) != 0.0) a |= ColumnMask{1} << j;
        }
        return a;
    }
};

/// Covariates U(0,1), beta0 = (0.5, 0.5, 0.5, 0, 0, 0), theta = 10,
/// MA errors (0.5, 0.3) or (0.5, 0.3, 0.2); BIC and AIC on the per-observation scale.
inline ExperimentConfig preset(ModelPreset m) {
    ExperimentConfig c;
    c.model = m;
    c.beta0 = scenarios::half_signal_beta();
    c.criteria = {CriterionSpec::bic(CriterionScale::per_observation),
                  CriterionSpec::aic(CriterionScale::per_observation)};
    switch (m) {
        case ModelPreset::nbr:
            c.theta = 10.0;
            c.family = FamilyModel::negbin(c.theta);
            break;
        case ModelPreset::probit: c.family = FamilyModel::probit(); break;
        case ModelPreset::dep_lm_mr2:
            c.family = FamilyModel::gaussian();
            c.errors = ErrorProcessSpec::ma({0.5, 0.3});
            c.dependent_errors = true;
            break;
        case ModelPreset::dep_lm_mr3:
            c.family = FamilyModel::gaussian();
            c.errors = ErrorProcessSpec::ma({0.5, 0.3, 0.2});
            c.dependent_errors = true;
            break;
        case ModelPreset::custom: break;
    }
    return c;
}

inline void validate(const ExperimentConfig& c) {
    if (c.n < 1) throw ConfigError("n must be >= 1");
    if (c.reps < 1) throw ConfigError("reps must be >= 1");
    if (c.workers < 1) throw ConfigError("workers must be >= 1");
    if (c.beta0.size() < 1 || c.beta0.size() > max_enumeration_p) throw ConfigError("beta0 must have 1..20 entries");
    if (c.alpha0() == 0) throw ConfigError("beta0 must have at least one nonzero entry");
    if (c.criteria.empty()) throw ConfigError("at least one criterion is required");
    if (c.dependent_errors && c.family.kind != FamilyKind::gaussian_identity) {
        throw ConfigError("dependent errors require the gaussian family");
    }
    try {
        glmsel::validate(c.errors);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    }
}

inline std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        const unsigned long long d = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + v + "' is not a nonnegative integer");
    }
}

}  // namespace detail

inline std::vector<double> parse_real_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : detail::split(v, ',')) out.push_back(detail::to_double(key, item));
    return out;
}

inline std::vector<Eigen::Index> parse_grid(const std::string& v) {
    std::vector<Eigen::Index> out;
    for (const auto& item : detail::split(v, ',')) out.push_back(static_cast<Eigen::Index>(detail::to_u64("grid", item)));
    return out;
}

/// "iid", "ar1:<phi>" or "ma:<c1>,<c2>,..."
inline ErrorProcessSpec parse_errors(const std::string& v) {
    if (v == "iid") return ErrorProcessSpec::iid();
    const auto colon = v.find(':');
    const std::string kind = v.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : v.substr(colon + 1);
    if (kind == "ar1") return ErrorProcessSpec::ar1(detail::to_double("errors", args));
    if (kind == "ma") return ErrorProcessSpec::ma(parse_real_list("errors", args));
    throw ConfigError("errors: expected iid, ar1:<phi> or ma:<c1,...>, got '" + v + "'");
}

inline CriterionScale parse_scale(const std::string& v) {
    if (v == "total") return CriterionScale::total;
    if (v == "per-observation") return CriterionScale::per_observation;
    throw ConfigError("scale must be 'total' or 'per-observation'");
}

/// Parses "key = value" lines; '#' starts a comment. Duplicate keys are rejected.
inline std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        if (!kv.emplace(key, detail::trim(line.substr(eq + 1))).second) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

/// Builds an experiment config from flat key-value pairs. Named presets fix
/// beta0, theta, family and errors; those keys are only accepted for `custom`.
inline ExperimentConfig experiment_from_key_values(const std::map<std::string, std::string>& kv) {
    const auto get = [&kv](const std::string& k) -> const std::string* {
        const auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };
    static const std::vector<std::string> known = {"model", "n", "reps", "beta0", "theta", "family", "errors",
                                                   "criteria", "scale", "base_seed", "workers"};
    for (const auto& [k, v] : kv) {
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown key '" + k + "'");
    }
    const ModelPreset model = get("model") ? model_from_tag(*get("model")) : ModelPreset::nbr;
    ExperimentConfig c = preset(model);
    if (model != ModelPreset::custom) {
        for (const char* k : {"beta0", "theta", "family", "errors"}) {
            if (get(k)) throw ConfigError(std::string("key '") + k + "' is fixed by preset '" + model_tag(model) + "'");
        }
    } else {
        const std::string* b = get("beta0");
        if (!b) throw ConfigError("custom model requires beta0");
        const auto vals = parse_real_list("beta0", *b);
        c.beta0 = Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
        if (const auto* t = get("theta")) c.theta = detail::to_double("theta", *t);
        const std::string fam = get("family") ? *get("family") : "gaussian";
        try {
            c.family = family_from_tag(fam, c.theta);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (const auto* e = get("errors")) {
            c.errors = parse_errors(*e);
            c.dependent_errors = c.errors.kind != ErrorKind::iid || c.family.kind == FamilyKind::gaussian_identity;
        } else {
            c.dependent_errors = c.family.kind == FamilyKind::gaussian_identity;
        }
    }
    if (const auto* v = get("n")) c.n = static_cast<Eigen::Index>(detail::to_u64("n", *v));
    if (const auto* v = get("reps")) c.reps = detail::to_u64("reps", *v);
    if (const auto* v = get("base_seed")) c.base_seed = detail::to_u64("base_seed", *v);
    if (const auto* v = get("workers")) c.workers = static_cast<unsigned>(detail::to_u64("workers", *v));
    const CriterionScale scale = get("scale") ? parse_scale(*get("scale")) : CriterionScale::per_observation;
    if (const auto* v = get("criteria")) {
        c.criteria.clear();
        for (const auto& tag : detail::split(*v, ',')) {
            try {
                c.criteria.push_back(criterion_from_tag(tag, scale));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    } else {
        for (auto& cr : c.criteria) cr.scale = scale;
    }
    validate(c);
    return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return experiment_from_key_values(parse_key_values(in, path));
}

/// GLMSEL_SEED, when set, replaces the configured base seed.
inline void apply_env_overrides(ExperimentConfig& c) {
    if (const char* s = std::getenv("GLMSEL_SEED"); s && *s) c.base_seed = detail::to_u64("GLMSEL_SEED", s);
}

struct AsymptoticsConfig {
    std::string scenario = "gaussian-iid";
    std::vector<Eigen::Index> grid = {200, 500, 1000, 2000, 5000};
    std::size_t reps = 50;
    std::uint64_t base_seed = 42;
    unsigned workers = 1;
};

inline void validate(const AsymptoticsConfig& c) {
    if (c.reps < 1) throw ConfigError("reps must be >= 1");
    if (c.workers < 1) throw ConfigError("workers must be >= 1");
    try {
        validate_grid(c.grid);
        (void)scenarios::by_name(c.scenario);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace glmsel::harness

#endif  // GLMSEL_HARNESS_CONFIG_HPP

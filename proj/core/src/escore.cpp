#include "iscore/escore.hpp"

#include "iscore/error.hpp"
#include "iscore/numeric.hpp"
#include "iscore/parallel.hpp"
#include "iscore/rng.hpp"
#include "score_common.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace iscore {

namespace {

using DrawProvider =
    std::function<std::vector<Dataset>(const Dataset& table, int j, std::uint64_t var_seed)>;

void validate_completion(const Dataset& data, const Dataset& imputed) {
    if (!data.same_schema(imputed)) {
        throw Error("imputed dataset does not match the data's shape or kinds");
    }
    std::string offending;
    int n_bad = 0;
    for (int j = 0; j < data.n_cols(); ++j) {
        for (int i = 0; i < data.n_rows(); ++i) {
            const bool data_missing = data.is_missing(i, j);
            const bool imp_missing = imputed.is_missing(i, j);
            const bool disagree =
                imp_missing || (!data_missing && imputed.get(i, j) != data.get(i, j));
            if (!disagree) continue;
            ++n_bad;
            if (n_bad <= 5) {
                offending += (offending.empty() ? "" : ", ") + std::string("(row ") +
                             std::to_string(i + 1) + ", " + data.name(j) + ")";
            }
        }
    }
    if (n_bad > 0) {
        throw Error("imputed dataset is not a completion of the data: " + std::to_string(n_bad) +
                    " bad cell(s), first at " + offending);
    }
}

VariableScore score_one_variable(const Dataset& data, const Dataset& imputed,
                                 const PatternIndex& idx, int j, const DrawProvider& provider,
                                 const ScoreOptions& opts) {
    VariableScore out;
    out.column = j;
    const auto& miss = idx.rows_missing[static_cast<std::size_t>(j)];
    const auto& obs = idx.rows_observed[static_cast<std::size_t>(j)];
    const double n = static_cast<double>(data.n_rows());
    out.weight = (static_cast<double>(miss.size()) * static_cast<double>(obs.size())) / (n * n);
    out.n_test = static_cast<int>(obs.size());
    if (static_cast<int>(miss.size()) < opts.min_rows) {
        out.skipped = true;
        out.skip_reason = "fewer than " + std::to_string(opts.min_rows) + " missing rows";
        return out;
    }
    if (static_cast<int>(obs.size()) < opts.min_rows) {
        out.skipped = true;
        out.skip_reason = "fewer than " + std::to_string(opts.min_rows) + " observed rows";
        return out;
    }

    try {
        out.companions = scoring_companions(data, idx, j, &out.fallback_used);
        const Dataset table = build_scoring_table(data, imputed, idx, j, out.companions);
        const std::uint64_t var_seed =
            derive_seed(derive_seed(opts.seed, "escore.var"), static_cast<std::uint64_t>(j));
        const std::vector<Dataset> completions = provider(table, j, var_seed);
        if (static_cast<int>(completions.size()) != opts.n_draws) {
            throw Error("draw provider returned " + std::to_string(completions.size()) +
                        " completions, expected " + std::to_string(opts.n_draws));
        }

        KahanSum total;
        for (int i : obs) {
            const ImputationDraws draws =
                detail::collect_draws(completions, i, data.kind(j), data.name(j));
            const std::vector<double> test = detail::test_point(data.kind(j), data.get(i, j));
            total.add(empirical_energy_score(draws, std::span<const double>(test)));
        }
        out.score = total.value() / static_cast<double>(obs.size());
    } catch (const std::exception& e) {
        out.skipped = true;
        out.skip_reason = std::string("method failed: ") + e.what();
        out.score = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

ScoreReport run_score(const Dataset& data, const Dataset& imputed, const DrawProvider& provider,
                      const ScoreOptions& opts) {
    if (opts.n_draws < 1) throw Error("n_draws must be >= 1");
    if (opts.min_rows < 1) throw Error("min_rows must be >= 1");
    validate_completion(data, imputed);
    const PatternIndex idx = compute_pattern_index(data);
    if (idx.scored.empty()) throw Error("nothing to score: dataset has no missing values");

    ScoreReport report;
    report.score_type = "energy-i-score";
    report.n_draws = opts.n_draws;
    report.min_rows = opts.min_rows;
    report.weighted = opts.weighted;
    report.seed = opts.seed;
    report.per_variable.resize(idx.scored.size());

    parallel_for(idx.scored.size(), opts.threads, [&](std::size_t t) {
        const int j = idx.scored[t];
        report.per_variable[t] = score_one_variable(data, imputed, idx, j, provider, opts);
    });

    KahanSum agg;
    int n_scored = 0;
    for (const auto& v : report.per_variable) {
        if (v.skipped) continue;
        ++n_scored;
        agg.add(opts.weighted ? v.weight * v.score : v.score);
    }
    if (n_scored == 0) throw Error("no scorable variables");
    report.n_scored = n_scored;
    report.aggregate = agg.value() / static_cast<double>(n_scored);
    return report;
}

} // namespace

std::vector<int> scoring_companions(const Dataset& data, const PatternIndex& idx, int j,
                                    bool* fallback_used) {
    const auto& companions = idx.companions[static_cast<std::size_t>(j)];
    if (fallback_used) *fallback_used = companions.empty();
    if (!companions.empty()) return companions;
    return {fallback_companion(data, idx, j)};
}

Dataset build_scoring_table(const Dataset& data, const Dataset& imputed, const PatternIndex& idx,
                            int j, const std::vector<int>& companions) {
    std::vector<int> cols;
    cols.reserve(companions.size() + 1);
    cols.push_back(j);
    for (int k : companions) cols.push_back(k);
    Dataset table = imputed.select_columns(cols);
    for (int i : idx.rows_observed[static_cast<std::size_t>(j)]) {
        table.set(i, 0, std::numeric_limits<double>::quiet_NaN());
    }
    return table;
}

ScoreReport energy_i_score(const Dataset& data, const Dataset& imputed, const Imputer& method,
                           const ScoreOptions& opts) {
    const DrawProvider provider = [&method, &opts](const Dataset& table, int /*j*/,
                                                   std::uint64_t var_seed) {
        auto fitted = method.clone();
        fitted->fit(table, derive_seed(var_seed, "fit"));
        return fitted->impute(opts.n_draws, derive_seed(var_seed, "draws"));
    };
    return run_score(data, imputed, provider, opts);
}

ScoreReport energy_i_score_with_draws(const Dataset& data, const Dataset& imputed,
                                      const std::map<int, std::vector<Dataset>>& draws_by_column,
                                      const ScoreOptions& opts) {
    const DrawProvider provider = [&draws_by_column](const Dataset& table, int j,
                                                     std::uint64_t /*var_seed*/) {
        const auto it = draws_by_column.find(j);
        if (it == draws_by_column.end()) {
            throw Error("no draw files supplied for this column");
        }
        for (const auto& d : it->second) {
            if (d.n_rows() != table.n_rows() || d.n_cols() != table.n_cols() ||
                d.names() != table.names()) {
                throw Error("draw file does not match the scoring table layout");
            }
        }
        return it->second;
    };
    return run_score(data, imputed, provider, opts);
}

StandardizedScores standardize_scores(const std::vector<double>& raw) {
    StandardizedScores out;
    out.values = raw;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    int n_finite = 0;
    for (double v : raw) {
        if (!std::isfinite(v)) continue;
        ++n_finite;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (n_finite < 2) {
        out.insufficient = true;
        return out;
    }
    if (hi == lo) {
        out.degenerate = true;
        for (double& v : out.values) {
            if (std::isfinite(v)) v = 0.0;
        }
        return out;
    }
    for (double& v : out.values) {
        if (std::isfinite(v)) v = (v - hi) / (hi - lo);
    }
    return out;
}

} // namespace iscore

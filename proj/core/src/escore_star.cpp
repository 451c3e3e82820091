#include "iscore/escore_star.hpp"

#include "iscore/error.hpp"
#include "iscore/numeric.hpp"
#include "iscore/parallel.hpp"
#include "iscore/rng.hpp"
#include "score_common.hpp"

#include <algorithm>
#include <cmath>

namespace iscore {

namespace {

struct PatternPool {
    std::vector<int> ids;     // ascending pattern ids present in the test set
    std::vector<double> cum;  // cumulative relative frequencies, last == 1
};

int draw_pattern(const PatternPool& pool, Rng& rng) {
    const double u = rng.uniform01();
    for (std::size_t a = 0; a < pool.cum.size(); ++a) {
        if (u < pool.cum[a]) return pool.ids[a];
    }
    return pool.ids.back();
}

VariableScore score_one_variable(const Dataset& data, const PatternIndex& idx, int j,
                                 const Imputer& method, const StarConfig& cfg) {
    VariableScore out;
    out.column = j;
    const auto& obs = idx.rows_observed[static_cast<std::size_t>(j)];
    if (static_cast<int>(obs.size()) < cfg.min_rows) {
        out.skipped = true;
        out.skip_reason = "fewer than " + std::to_string(cfg.min_rows) + " observed rows";
        return out;
    }

    const std::uint64_t var_seed =
        derive_seed(derive_seed(cfg.seed, "star.var"), static_cast<std::uint64_t>(j));

    try {
        // Test set within the rows that observe j.
        const int n_test =
            static_cast<int>(std::ceil(cfg.test_fraction * static_cast<double>(obs.size())));
        Rng test_rng(derive_seed(var_seed, "test"));
        const std::vector<int> picks =
            sample_without_replacement(test_rng, static_cast<int>(obs.size()), n_test);
        std::vector<int> test_rows;
        test_rows.reserve(picks.size());
        for (int p : picks) test_rows.push_back(obs[static_cast<std::size_t>(p)]);
        std::vector<char> in_test(static_cast<std::size_t>(data.n_rows()), 0);
        for (int i : test_rows) in_test[static_cast<std::size_t>(i)] = 1;
        std::vector<int> train_rows;
        train_rows.reserve(static_cast<std::size_t>(data.n_rows()) - test_rows.size());
        for (int i = 0; i < data.n_rows(); ++i) {
            if (!in_test[static_cast<std::size_t>(i)]) train_rows.push_back(i);
        }
        out.n_test = n_test;

        // One imputation of the training complement.
        const Dataset train_sub = data.select_rows(train_rows);
        Dataset train_imputed = train_sub;
        if (train_sub.n_missing() > 0) {
            auto fitted = method.clone();
            fitted->fit(train_sub, derive_seed(var_seed, "train.fit"));
            train_imputed = fitted->impute(1, derive_seed(var_seed, "train.impute"))[0];
        }

        // Empirical pattern distribution within the test set.
        std::vector<int> count_by_pattern(idx.patterns.size(), 0);
        for (int i : test_rows) {
            ++count_by_pattern[static_cast<std::size_t>(idx.row_pattern[static_cast<std::size_t>(i)])];
        }
        PatternPool pool;
        for (std::size_t p = 0; p < count_by_pattern.size(); ++p) {
            if (count_by_pattern[p] > 0) pool.ids.push_back(static_cast<int>(p));
        }
        double acc = 0.0;
        for (int id : pool.ids) {
            acc += static_cast<double>(count_by_pattern[static_cast<std::size_t>(id)]) /
                   static_cast<double>(test_rows.size());
            pool.cum.push_back(acc);
        }
        pool.cum.back() = 1.0;

        const int R = cfg.pattern_draws > 0 ? cfg.pattern_draws
                                            : 5 * static_cast<int>(pool.ids.size());

        KahanSum pattern_scores;
        int n_ok = 0;
        std::string last_failure;
        for (int r = 0; r < R; ++r) {
            Rng prng(derive_seed(derive_seed(var_seed, "pattern"), static_cast<std::uint64_t>(r)));
            const int pattern_id = draw_pattern(pool, prng);
            const Mask& m = idx.patterns[static_cast<std::size_t>(pattern_id)];
            std::vector<int> tm_rows;
            for (int i : test_rows) {
                if (idx.row_pattern[static_cast<std::size_t>(i)] == pattern_id) tm_rows.push_back(i);
            }

            try {
                const std::vector<int> cond = star_conditioning_columns(m, j);
                std::vector<int> cols;
                cols.reserve(cond.size() + 1);
                cols.push_back(j);
                for (int k : cond) cols.push_back(k);

                Dataset table(
                    [&] {
                        std::vector<std::string> names;
                        for (int c : cols) names.push_back(data.name(c));
                        return names;
                    }(),
                    [&] {
                        std::vector<ColumnKind> kinds;
                        for (int c : cols) kinds.push_back(data.kind(c));
                        return kinds;
                    }(),
                    static_cast<int>(tm_rows.size() + train_rows.size()));
                for (std::size_t t = 0; t < tm_rows.size(); ++t) {
                    const int i = tm_rows[t];
                    for (std::size_t c = 1; c < cols.size(); ++c) {
                        table.set(static_cast<int>(t), static_cast<int>(c),
                                  data.get(i, cols[c]));
                    }
                }
                for (std::size_t t = 0; t < train_rows.size(); ++t) {
                    for (std::size_t c = 0; c < cols.size(); ++c) {
                        table.set(static_cast<int>(tm_rows.size() + t), static_cast<int>(c),
                                  train_imputed.get(static_cast<int>(t), cols[c]));
                    }
                }

                auto fitted = method.clone();
                fitted->fit(table, derive_seed(derive_seed(var_seed, "fit"),
                                               static_cast<std::uint64_t>(r)));
                const auto completions =
                    fitted->impute(cfg.n_draws, derive_seed(derive_seed(var_seed, "draws"),
                                                            static_cast<std::uint64_t>(r)));

                KahanSum total;
                for (std::size_t t = 0; t < tm_rows.size(); ++t) {
                    const ImputationDraws draws = detail::collect_draws(
                        completions, static_cast<int>(t), data.kind(j), data.name(j));
                    const std::vector<double> test =
                        detail::test_point(data.kind(j), data.get(tm_rows[t], j));
                    total.add(empirical_energy_score(draws, std::span<const double>(test)));
                }
                pattern_scores.add(total.value() / static_cast<double>(tm_rows.size()));
                ++n_ok;
            } catch (const std::exception& e) {
                last_failure = e.what();
            }
        }
        if (n_ok == 0) {
            throw Error("all pattern draws failed" +
                        (last_failure.empty() ? std::string() : ": " + last_failure));
        }
        out.score = pattern_scores.value() / static_cast<double>(n_ok);
    } catch (const std::exception& e) {
        out.skipped = true;
        out.skip_reason = std::string("method failed: ") + e.what();
        out.score = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

} // namespace

std::vector<int> star_conditioning_columns(const Mask& pattern, int j) {
    std::vector<int> cols;
    for (int l = 0; l < static_cast<int>(pattern.size()); ++l) {
        if (l != j && pattern[static_cast<std::size_t>(l)] == 0) cols.push_back(l);
    }
    return cols;
}

ScoreReport energy_i_score_star(const Dataset& data, const Imputer& method,
                                const StarConfig& cfg) {
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
        throw Error("test_fraction must be in (0,1)");
    }
    if (cfg.n_draws < 1) throw Error("n_draws must be >= 1");
    if (cfg.pattern_draws < 0) throw Error("pattern_draws must be >= 0");
    const PatternIndex idx = compute_pattern_index(data);
    if (idx.scored.empty()) throw Error("nothing to score: dataset has no missing values");

    ScoreReport report;
    report.score_type = "energy-i-score-star";
    report.n_draws = cfg.n_draws;
    report.min_rows = cfg.min_rows;
    report.weighted = false;
    report.seed = cfg.seed;
    report.per_variable.resize(idx.scored.size());

    parallel_for(idx.scored.size(), cfg.threads, [&](std::size_t t) {
        report.per_variable[t] = score_one_variable(data, idx, idx.scored[t], method, cfg);
    });

    KahanSum agg;
    int n_scored = 0;
    for (const auto& v : report.per_variable) {
        if (v.skipped) continue;
        ++n_scored;
        agg.add(v.score);
    }
    if (n_scored == 0) throw Error("no scorable variables");
    report.n_scored = n_scored;
    report.aggregate = agg.value() / static_cast<double>(n_scored);
    return report;
}

} // namespace iscore

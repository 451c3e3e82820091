#pragma once

#include "iscore/dataset.hpp"
#include "iscore/energy.hpp"
#include "iscore/imputers.hpp"
#include "iscore/patterns.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace iscore {

struct ScoreOptions {
    int n_draws = 50;  // N, replicates drawn per scored cell
    int min_rows = 10; // variables with fewer missing or observed rows skip
    bool weighted = true;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct VariableScore {
    int column = -1;
    bool skipped = false;
    std::string skip_reason;
    double score = std::numeric_limits<double>::quiet_NaN();
    double weight = std::numeric_limits<double>::quiet_NaN();
    int n_test = 0;
    std::vector<int> companions; // conditioning columns actually used
    bool fallback_used = false;
};

struct ScoreReport {
    std::string score_type;
    std::vector<VariableScore> per_variable; // ascending column id
    double aggregate = std::numeric_limits<double>::quiet_NaN();
    int n_scored = 0; // variables that were not skipped
    int n_draws = 0;
    int min_rows = 0;
    bool weighted = true;
    std::uint64_t seed = 0;
};

// The energy-I-Score. For each variable j with missing values the candidate
// method is asked to redraw artificially masked copies of j's observed
// cells, conditioning only on columns observed in every pattern that
// observes j, and the draws are scored against the held-out values with the
// empirical energy score:
//
//   1. skip j when its missing or observed row count is below min_rows;
//   2. conditioning set = companions(j), or the single best-overlap column
//      when empty;
//   3. build a table over columns {j} u companions, all rows in original
//      order, taking every value from `imputed`, then blank column j on the
//      rows where the data observes it;
//   4. refit the method on that table and impute it n_draws times;
//   5. average empirical_energy_score(draws_i, x_ij) over the blanked rows
//      (one-hot vectors on both sides when j is categorical);
//   6. weight w_j = |missing rows| * |observed rows| / n^2.
//
// Aggregate = mean over non-skipped j of w_j * S_j (weighted) or of S_j
// (unweighted). A method failure on one variable skips that variable, not
// the run; having no scorable variable at all is an error.
//
// `imputed` must be a completion of `data`: identical schema, no missing
// cells, observed cells bitwise equal.
//
// Seed streams, with V = derive(derive(seed, "escore.var"), j):
//   refit     method.fit(table, derive(V, "fit"))
//   draws     method.impute(n_draws, derive(V, "draws"))
// Variables may be scored on parallel threads; results do not depend on the
// schedule.
ScoreReport energy_i_score(const Dataset& data, const Dataset& imputed, const Imputer& method,
                           const ScoreOptions& opts = {});

// Same score, but step 4's draw sets are supplied by the caller: for each
// scored column, n_draws completions of that column's scoring table (see
// build_scoring_table). Used to score draws produced outside the library.
ScoreReport energy_i_score_with_draws(const Dataset& data, const Dataset& imputed,
                                      const std::map<int, std::vector<Dataset>>& draws_by_column,
                                      const ScoreOptions& opts = {});

// Conditioning columns for variable j (companions or fallback singleton).
std::vector<int> scoring_companions(const Dataset& data, const PatternIndex& idx, int j,
                                    bool* fallback_used = nullptr);

// The step-3 table: columns [j, companions...] in that order, all rows.
Dataset build_scoring_table(const Dataset& data, const Dataset& imputed, const PatternIndex& idx,
                            int j, const std::vector<int>& companions);

// Affine rescaling of a pooled batch of raw scores onto [-1, 0]:
// s -> (s - max) / (max - min). Non-finite entries pass through untouched;
// a zero range maps every finite score to 0; fewer than two finite scores
// leave the batch unchanged (insufficient set). Rank order is preserved.
struct StandardizedScores {
    std::vector<double> values;
    bool degenerate = false;
    bool insufficient = false;
};
StandardizedScores standardize_scores(const std::vector<double>& raw);

} // namespace iscore

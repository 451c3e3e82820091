#pragma once

#include "iscore/escore.hpp"

#include <cstdint>

namespace iscore {

struct StarConfig {
    double test_fraction = 0.2; // share of each variable's observed rows held out
    int pattern_draws = 0;      // R; 0 = 5 x number of distinct patterns in the test set
    int n_draws = 50;           // N
    int min_rows = 10;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Projection-free variant of the energy-I-Score. Instead of restricting to
// the columns observed in every pattern, each variable is scored within
// randomly drawn patterns, conditioning on everything that pattern observes:
//
//   1. skip j when it has fewer than min_rows observed rows;
//   2. hold out a test set T, ceil(test_fraction * |observed rows|) of them,
//      sampled without replacement;
//   3. impute the complement T^c once with the candidate method;
//   4. repeat R times: draw a pattern M from the empirical pattern
//      frequencies within T (with replacement), stack the T_M rows on top of
//      the imputed T^c rows over columns {j} u observed(M) \ {j}, blank
//      column j on the T_M rows, impute that table n_draws times, and score
//      the draws against the held-out values as in the energy-I-Score;
//   5. S_j = mean of the R per-pattern scores; draws whose table the method
//      cannot fit are dropped from the mean, and the variable skips when
//      every draw failed.
//
// Aggregate = unweighted mean over non-skipped variables.
//
// Seed streams, with V = derive(derive(seed, "star.var"), j):
//   test set      sample_without_replacement(Rng(derive(V, "test")), ...)
//   T^c fit       method.fit(subset, derive(V, "train.fit"))
//   T^c impute    method.impute(1, derive(V, "train.impute"))
//   pattern r     Rng(derive(derive(V, "pattern"), r)).uniform01() against
//                 the cumulative pattern frequencies, ascending pattern id
//   table fit r   method.fit(table, derive(derive(V, "fit"), r))
//   draws r       method.impute(n_draws, derive(derive(V, "draws"), r))
ScoreReport energy_i_score_star(const Dataset& data, const Imputer& method,
                                const StarConfig& cfg = {});

// Conditioning columns used for a pattern draw: the columns the pattern
// observes, minus j. Coincides with scoring_companions(j) when only one
// pattern observes j.
std::vector<int> star_conditioning_columns(const Mask& pattern, int j);

} // namespace iscore

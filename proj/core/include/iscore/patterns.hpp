#pragma once

#include "iscore/dataset.hpp"

#include <cstdint>
#include <vector>

namespace iscore {

using Mask = std::vector<std::uint8_t>;

// Index of the distinct missingness patterns of a dataset and the derived
// per-variable sets driving both scores:
//
//   rows_observed(j)  rows whose pattern observes variable j
//   rows_missing(j)   rows whose pattern masks variable j
//   companions(j)     columns observed in *every* pattern that observes j
//                     (empty when no column qualifies; see fallback_companion)
//   scored            variables with at least one missing cell
//
// Patterns are sorted lexicographically so ids do not depend on row order.
struct PatternIndex {
    std::vector<Mask> patterns;
    std::vector<int> row_pattern;                  // n entries, index into patterns
    std::vector<std::vector<int>> rows_observed;   // per variable, ascending rows
    std::vector<std::vector<int>> rows_missing;
    std::vector<std::vector<int>> companions;      // per variable, ascending columns
    std::vector<int> scored;                       // ascending variable ids

    const Mask& pattern_of_row(int i) const { return patterns[static_cast<std::size_t>(row_pattern[static_cast<std::size_t>(i)])]; }
};

PatternIndex compute_pattern_index(const Dataset& data);

// When companions(j) is empty: the single column sharing the largest number
// of jointly observed cells with column j, smallest index on ties.
int fallback_companion(const Dataset& data, const PatternIndex& idx, int j);

} // namespace iscore

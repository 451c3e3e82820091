#pragma once

// Internal helpers shared by the two score estimators.

#include "iscore/dataset.hpp"
#include "iscore/energy.hpp"
#include "iscore/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace iscore::detail {

// Draw set for one test row: column 0 of every completion at `table_row`,
// expanded to one-hot when the scored variable is categorical.
inline ImputationDraws collect_draws(const std::vector<Dataset>& completions, int table_row,
                                     const ColumnKind& kind, const std::string& col_name) {
    const bool categorical = kind.is_categorical();
    const int arity = categorical ? kind.n_levels() : 1;
    ImputationDraws draws;
    draws.n_draws = static_cast<int>(completions.size());
    draws.arity = arity;
    draws.values.resize(static_cast<std::size_t>(draws.n_draws) * static_cast<std::size_t>(arity));
    for (int l = 0; l < draws.n_draws; ++l) {
        const double v = completions[static_cast<std::size_t>(l)].get(table_row, 0);
        if (std::isnan(v)) {
            throw Error("draw " + std::to_string(l + 1) + " left cells of '" + col_name +
                        "' missing");
        }
        if (categorical) {
            const auto hot = one_hot_value(kind, v);
            std::copy(hot.begin(), hot.end(),
                      draws.values.begin() + static_cast<std::size_t>(l) * static_cast<std::size_t>(arity));
        } else {
            draws.values[static_cast<std::size_t>(l)] = v;
        }
    }
    return draws;
}

inline std::vector<double> test_point(const ColumnKind& kind, double value) {
    if (kind.is_categorical()) return one_hot_value(kind, value);
    return {value};
}

} // namespace iscore::detail

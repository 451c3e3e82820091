#include "iscore/patterns.hpp"

#include "iscore/error.hpp"

#include <algorithm>
#include <map>

namespace iscore {

PatternIndex compute_pattern_index(const Dataset& data) {
    const int n = data.n_rows();
    const int d = data.n_cols();
    if (n < 1) throw Error("no rows");
    if (d < 2) throw Error("pattern index needs at least 2 columns");

    std::map<Mask, int> ids;
    std::vector<Mask> row_masks;
    row_masks.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        row_masks.push_back(data.row_mask(i));
        ids.emplace(row_masks.back(), 0);
    }

    PatternIndex out;
    out.patterns.reserve(ids.size());
    for (auto& [mask, id] : ids) { // std::map iterates in lexicographic order
        id = static_cast<int>(out.patterns.size());
        out.patterns.push_back(mask);
    }
    out.row_pattern.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.row_pattern[static_cast<std::size_t>(i)] = ids[row_masks[static_cast<std::size_t>(i)]];
    }

    out.rows_observed.assign(static_cast<std::size_t>(d), {});
    out.rows_missing.assign(static_cast<std::size_t>(d), {});
    for (int i = 0; i < n; ++i) {
        const Mask& m = row_masks[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) {
            if (m[static_cast<std::size_t>(j)]) {
                out.rows_missing[static_cast<std::size_t>(j)].push_back(i);
            } else {
                out.rows_observed[static_cast<std::size_t>(j)].push_back(i);
            }
        }
    }

    // companions(j): intersection over the patterns that observe j of their
    // observed column sets, minus j itself. The intersection over an empty
    // pattern family is all columns.
    out.companions.assign(static_cast<std::size_t>(d), {});
    for (int j = 0; j < d; ++j) {
        std::vector<bool> always(static_cast<std::size_t>(d), true);
        for (const Mask& m : out.patterns) {
            if (m[static_cast<std::size_t>(j)]) continue; // pattern masks j
            for (int l = 0; l < d; ++l) {
                if (m[static_cast<std::size_t>(l)]) always[static_cast<std::size_t>(l)] = false;
            }
        }
        for (int l = 0; l < d; ++l) {
            if (l != j && always[static_cast<std::size_t>(l)]) {
                out.companions[static_cast<std::size_t>(j)].push_back(l);
            }
        }
    }

    for (int j = 0; j < d; ++j) {
        if (!out.rows_missing[static_cast<std::size_t>(j)].empty()) out.scored.push_back(j);
    }
    return out;
}

int fallback_companion(const Dataset& data, const PatternIndex& idx, int j) {
    const int d = data.n_cols();
    long best_count = 0;
    int best = -1;
    for (int k = 0; k < d; ++k) {
        if (k == j) continue;
        long count = 0;
        for (int i : idx.rows_observed[static_cast<std::size_t>(j)]) {
            if (!data.is_missing(i, k)) ++count;
        }
        if (count > best_count) {
            best_count = count;
            best = k;
        }
    }
    if (best < 0) throw Error("no usable companion column for '" + data.name(j) + "'");
    return best;
}

} // namespace iscore

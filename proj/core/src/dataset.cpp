#include "iscore/dataset.hpp"

#include "iscore/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace iscore {

std::optional<int> ColumnKind::level_index(const std::string& label) const {
    const auto it = std::lower_bound(levels.begin(), levels.end(), label);
    if (it == levels.end() || *it != label) return std::nullopt;
    return static_cast<int>(it - levels.begin());
}

ColumnKind ColumnKind::categorical(std::vector<std::string> levels) {
    if (levels.empty()) throw Error("categorical column needs at least one level");
    std::sort(levels.begin(), levels.end());
    const auto dup = std::adjacent_find(levels.begin(), levels.end());
    if (dup != levels.end()) throw Error("categorical levels must be unique: '" + *dup + "'");
    ColumnKind k;
    k.type = ColumnType::Categorical;
    k.levels = std::move(levels);
    return k;
}

Dataset::Dataset(std::vector<std::string> names, std::vector<ColumnKind> kinds, int n_rows)
    : n_rows_(n_rows), names_(std::move(names)), kinds_(std::move(kinds)) {
    if (names_.size() != kinds_.size()) throw Error("Dataset: names/kinds size mismatch");
    if (n_rows_ < 0) throw Error("Dataset: negative row count");
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second) throw Error("Dataset: duplicate column name '" + n + "'");
    }
    cols_.assign(names_.size(), std::vector<double>(static_cast<std::size_t>(n_rows_),
                                                    std::numeric_limits<double>::quiet_NaN()));
}

int Dataset::column_index(const std::string& name) const {
    for (int j = 0; j < n_cols(); ++j) {
        if (names_[static_cast<std::size_t>(j)] == name) return j;
    }
    return -1;
}

void Dataset::set(int i, int j, double v) {
    auto& col = cols_[static_cast<std::size_t>(j)];
    if (std::isnan(v)) {
        col[static_cast<std::size_t>(i)] = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    const auto& k = kind(j);
    if (k.is_categorical()) {
        const double r = std::round(v);
        if (r != v || r < 0.0 || r >= static_cast<double>(k.n_levels())) {
            throw Error("set: value " + std::to_string(v) + " is not a level index of column '" +
                        name(j) + "'");
        }
    } else if (!std::isfinite(v)) {
        throw Error("set: non-finite value in continuous column '" + name(j) + "'");
    }
    col[static_cast<std::size_t>(i)] = v;
}

bool Dataset::is_missing(int i, int j) const {
    return std::isnan(get(i, j));
}

std::size_t Dataset::n_missing() const {
    std::size_t count = 0;
    for (const auto& col : cols_) {
        for (double v : col) count += std::isnan(v) ? 1 : 0;
    }
    return count;
}

const std::string& Dataset::label(int i, int j) const {
    const auto& k = kind(j);
    if (!k.is_categorical()) throw Error("label: column '" + name(j) + "' is continuous");
    if (is_missing(i, j)) throw Error("label: cell is missing");
    return k.levels[static_cast<std::size_t>(get(i, j))];
}

std::vector<std::uint8_t> Dataset::row_mask(int i) const {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(n_cols()));
    for (int j = 0; j < n_cols(); ++j) m[static_cast<std::size_t>(j)] = is_missing(i, j) ? 1 : 0;
    return m;
}

Dataset Dataset::select_columns(const std::vector<int>& cols) const {
    std::vector<std::string> names;
    std::vector<ColumnKind> kinds;
    names.reserve(cols.size());
    kinds.reserve(cols.size());
    for (int j : cols) {
        names.push_back(name(j));
        kinds.push_back(kind(j));
    }
    Dataset out(std::move(names), std::move(kinds), n_rows_);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out.cols_[c] = cols_[static_cast<std::size_t>(cols[c])];
    }
    return out;
}

Dataset Dataset::select_rows(const std::vector<int>& rows) const {
    Dataset out(names_, kinds_, static_cast<int>(rows.size()));
    for (std::size_t j = 0; j < cols_.size(); ++j) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out.cols_[j][r] = cols_[j][static_cast<std::size_t>(rows[r])];
        }
    }
    return out;
}

bool Dataset::same_schema(const Dataset& other) const {
    if (n_rows_ != other.n_rows_ || names_ != other.names_) return false;
    for (std::size_t j = 0; j < kinds_.size(); ++j) {
        if (kinds_[j].type != other.kinds_[j].type || kinds_[j].levels != other.kinds_[j].levels)
            return false;
    }
    return true;
}

std::vector<double> one_hot_value(const ColumnKind& kind, double level_index) {
    if (!kind.is_categorical()) throw Error("one_hot_value: continuous column");
    const int p = kind.n_levels();
    std::vector<double> v(static_cast<std::size_t>(p), 0.0);
    if (std::isnan(level_index)) {
        std::fill(v.begin(), v.end(), std::numeric_limits<double>::quiet_NaN());
        return v;
    }
    const double r = std::round(level_index);
    if (r != level_index || r < 0.0 || r >= static_cast<double>(p)) {
        throw Error("one_hot_value: unseen level index " + std::to_string(level_index));
    }
    v[static_cast<std::size_t>(r)] = 1.0;
    return v;
}

std::vector<std::vector<double>> one_hot_column(const Dataset& data, int j) {
    const auto& k = data.kind(j);
    if (!k.is_categorical()) throw Error("one_hot_column: column '" + data.name(j) + "' is continuous");
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(data.n_rows()));
    for (int i = 0; i < data.n_rows(); ++i) {
        rows.push_back(one_hot_value(k, data.get(i, j)));
    }
    return rows;
}

} // namespace iscore

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace iscore {

enum class ColumnType { Continuous, Categorical };

// Level labels of a categorical column are kept sorted and unique; the
// stored cell value of a categorical column is the level index.
struct ColumnKind {
    ColumnType type = ColumnType::Continuous;
    std::vector<std::string> levels;

    bool is_categorical() const { return type == ColumnType::Categorical; }
    int n_levels() const { return static_cast<int>(levels.size()); }
    std::optional<int> level_index(const std::string& label) const;

    static ColumnKind continuous() { return {}; }
    static ColumnKind categorical(std::vector<std::string> levels);
};

// Incomplete tabular data. Cells are doubles stored column-major; a missing
// cell is NaN and the missingness mask is defined by exactly that, so mask
// and values can never disagree. Categorical cells hold the level index.
//
// A "complete" dataset in the rest of the library is a Dataset whose cells
// are all observed; call sites that require one validate via is_complete().
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> names, std::vector<ColumnKind> kinds, int n_rows);

    int n_rows() const { return n_rows_; }
    int n_cols() const { return static_cast<int>(names_.size()); }

    const std::string& name(int j) const { return names_[static_cast<std::size_t>(j)]; }
    const std::vector<std::string>& names() const { return names_; }
    const ColumnKind& kind(int j) const { return kinds_[static_cast<std::size_t>(j)]; }
    const std::vector<ColumnKind>& kinds() const { return kinds_; }
    int column_index(const std::string& name) const; // -1 if absent

    double get(int i, int j) const { return cols_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; }
    // v must be finite (continuous) or an integral level index (categorical);
    // NaN blanks the cell.
    void set(int i, int j, double v);

    bool is_missing(int i, int j) const;
    std::size_t n_missing() const;
    bool is_complete() const { return n_missing() == 0; }

    std::span<const double> column(int j) const {
        return {cols_[static_cast<std::size_t>(j)].data(), static_cast<std::size_t>(n_rows_)};
    }

    // Label of an observed categorical cell.
    const std::string& label(int i, int j) const;

    // Row mask: 1 marks a missing cell.
    std::vector<std::uint8_t> row_mask(int i) const;

    Dataset select_columns(const std::vector<int>& cols) const;
    Dataset select_rows(const std::vector<int>& rows) const;

    bool same_schema(const Dataset& other) const;

private:
    int n_rows_ = 0;
    std::vector<std::string> names_;
    std::vector<ColumnKind> kinds_;
    std::vector<std::vector<double>> cols_;
};

// One-hot encoding of column j (must be categorical with p levels): an
// n x p matrix of 0/1 rows; a missing cell encodes as a row of NaN.
std::vector<std::vector<double>> one_hot_column(const Dataset& data, int j);

// One-hot vector for a single level index; throws on values outside [0, p).
std::vector<double> one_hot_value(const ColumnKind& kind, double level_index);

} // namespace iscore

#include "iscore/imputers.hpp"

#include "iscore/error.hpp"
#include "iscore/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iscore {

namespace {

class MarginalSampleImputer : public Imputer {
public:
    std::string name() const override { return "marginal-sample"; }
    bool multiple_capable() const override { return true; }
    std::unique_ptr<Imputer> clone() const override {
        return std::make_unique<MarginalSampleImputer>(*this);
    }

    void fit(const Dataset& data, std::uint64_t /*seed*/) override {
        data_ = data;
        observed_.assign(static_cast<std::size_t>(data.n_cols()), {});
        for (int j = 0; j < data.n_cols(); ++j) {
            auto& pool = observed_[static_cast<std::size_t>(j)];
            bool has_missing = false;
            for (int i = 0; i < data.n_rows(); ++i) {
                if (data.is_missing(i, j)) {
                    has_missing = true;
                } else {
                    pool.push_back(data.get(i, j));
                }
            }
            if (has_missing && pool.empty()) {
                throw Error("marginal-sample: column '" + data.name(j) + "' has only missing values");
            }
        }
        fitted_ = true;
    }

    Dataset impute_one(std::uint64_t seed) const override {
        if (!fitted_) throw Error("marginal-sample: impute before fit");
        Dataset out = data_;
        Rng rng(seed);
        for (int j = 0; j < data_.n_cols(); ++j) {
            const auto& pool = observed_[static_cast<std::size_t>(j)];
            for (int i = 0; i < data_.n_rows(); ++i) {
                if (data_.is_missing(i, j)) out.set(i, j, pool[rng.uniform_int(pool.size())]);
            }
        }
        return out;
    }

private:
    Dataset data_;
    std::vector<std::vector<double>> observed_;
    bool fitted_ = false;
};

class KnnImputer : public Imputer {
public:
    explicit KnnImputer(int k) : k_(k) {
        if (k_ < 1) throw Error("knn: k must be >= 1");
    }

    std::string name() const override { return "knn"; }
    bool multiple_capable() const override { return true; }
    std::unique_ptr<Imputer> clone() const override { return std::make_unique<KnnImputer>(*this); }

    void fit(const Dataset& data, std::uint64_t /*seed*/) override {
        data_ = data;
        const int n = data.n_rows();
        const int d = data.n_cols();

        // z-score statistics over observed cells of numeric columns.
        mean_.assign(static_cast<std::size_t>(d), 0.0);
        sd_.assign(static_cast<std::size_t>(d), 0.0);
        for (int j = 0; j < d; ++j) {
            if (data.kind(j).is_categorical()) continue;
            double s = 0.0;
            int cnt = 0;
            for (int i = 0; i < n; ++i) {
                if (!data.is_missing(i, j)) {
                    s += data.get(i, j);
                    ++cnt;
                }
            }
            if (cnt == 0) continue;
            const double m = s / cnt;
            double ss = 0.0;
            for (int i = 0; i < n; ++i) {
                if (!data.is_missing(i, j)) ss += (data.get(i, j) - m) * (data.get(i, j) - m);
            }
            mean_[static_cast<std::size_t>(j)] = m;
            sd_[static_cast<std::size_t>(j)] = cnt > 1 ? std::sqrt(ss / (cnt - 1)) : 0.0;
        }

        // Neighbor lists are deterministic given the data, so resolve them
        // once here; impute_one only draws the donor.
        cells_.clear();
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < n; ++i) {
                if (!data.is_missing(i, j)) continue;
                cells_.push_back({i, j, neighbors(i, j)});
            }
        }
        fitted_ = true;
    }

    Dataset impute_one(std::uint64_t seed) const override {
        if (!fitted_) throw Error("knn: impute before fit");
        Dataset out = data_;
        Rng rng(seed);
        for (const auto& cell : cells_) {
            const int donor = cell.donors[rng.uniform_int(cell.donors.size())];
            out.set(cell.row, cell.col, data_.get(donor, cell.col));
        }
        return out;
    }

private:
    struct Cell {
        int row;
        int col;
        std::vector<int> donors;
    };

    std::vector<int> neighbors(int i, int j) const {
        const int n = data_.n_rows();
        const int d = data_.n_cols();
        std::vector<std::pair<double, int>> cand; // (distance, row)
        for (int r = 0; r < n; ++r) {
            if (r == i || data_.is_missing(r, j)) continue;
            double dist2 = 0.0;
            int shared = 0;
            for (int k = 0; k < d; ++k) {
                if (k == j || data_.kind(k).is_categorical()) continue;
                if (data_.is_missing(i, k) || data_.is_missing(r, k)) continue;
                const double sd = sd_[static_cast<std::size_t>(k)];
                if (sd == 0.0) continue; // constant column, no information
                const double zi = (data_.get(i, k) - mean_[static_cast<std::size_t>(k)]) / sd;
                const double zr = (data_.get(r, k) - mean_[static_cast<std::size_t>(k)]) / sd;
                dist2 += (zi - zr) * (zi - zr);
                ++shared;
            }
            const double dist = shared > 0 ? std::sqrt(dist2) : std::numeric_limits<double>::infinity();
            cand.emplace_back(dist, r);
        }
        if (cand.empty()) {
            throw Error("knn: no donor row with column '" + data_.name(j) + "' observed");
        }
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k_), cand.size());
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end());
        std::vector<int> donors;
        donors.reserve(take);
        for (std::size_t t = 0; t < take; ++t) donors.push_back(cand[t].second);
        return donors;
    }

    int k_;
    Dataset data_;
    std::vector<double> mean_;
    std::vector<double> sd_;
    std::vector<Cell> cells_;
    bool fitted_ = false;
};

} // namespace

std::unique_ptr<Imputer> make_marginal_sample() {
    return std::make_unique<MarginalSampleImputer>();
}

std::unique_ptr<Imputer> make_knn(int k_neighbors) {
    return std::make_unique<KnnImputer>(k_neighbors);
}

} // namespace iscore

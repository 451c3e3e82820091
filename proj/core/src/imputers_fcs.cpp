#include "iscore/imputers.hpp"

#include "iscore/error.hpp"
#include "iscore/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace iscore {

namespace {

std::vector<double> observed_values(const Dataset& d, int j) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(d.n_rows()));
    for (int i = 0; i < d.n_rows(); ++i) {
        if (!d.is_missing(i, j)) out.push_back(d.get(i, j));
    }
    return out;
}

// Most frequent observed level of a categorical column, smallest index on
// ties.
double observed_mode(const Dataset& d, int j) {
    std::vector<int> counts(static_cast<std::size_t>(d.kind(j).n_levels()), 0);
    for (int i = 0; i < d.n_rows(); ++i) {
        if (!d.is_missing(i, j)) ++counts[static_cast<std::size_t>(d.get(i, j))];
    }
    int best = 0;
    for (int l = 1; l < static_cast<int>(counts.size()); ++l) {
        if (counts[static_cast<std::size_t>(l)] > counts[static_cast<std::size_t>(best)]) best = l;
    }
    return static_cast<double>(best);
}

// Width of the regressor block contributed by column j: 1 for continuous,
// p - 1 indicators for categorical (first level is the reference).
int regressor_width(const ColumnKind& k) {
    return k.is_categorical() ? std::max(0, k.n_levels() - 1) : 1;
}

class FcsImputer : public Imputer {
public:
    FcsImputer(int iterations, bool gaussian)
        : iterations_(iterations), gaussian_(gaussian) {
        if (iterations_ < 1) throw Error("fcs: iterations must be >= 1");
    }

    std::string name() const override {
        return gaussian_ ? "fcs-gaussian" : "fcs-regression-predict";
    }
    bool multiple_capable() const override { return gaussian_; }
    std::unique_ptr<Imputer> clone() const override { return std::make_unique<FcsImputer>(*this); }

    void fit(const Dataset& data, std::uint64_t /*seed*/) override {
        if (data.n_cols() < 2) throw Error("fcs: need at least 2 columns");
        for (int j = 0; j < data.n_cols(); ++j) {
            bool any_observed = false;
            for (int i = 0; i < data.n_rows() && !any_observed; ++i) {
                any_observed = !data.is_missing(i, j);
            }
            if (!any_observed) {
                throw Error("fcs: column '" + data.name(j) + "' has only missing values");
            }
        }
        data_ = data;
        visit_order_.clear();
        std::vector<std::pair<int, int>> by_missing; // (missing count, column)
        for (int j = 0; j < data.n_cols(); ++j) {
            int miss = 0;
            for (int i = 0; i < data.n_rows(); ++i) miss += data.is_missing(i, j) ? 1 : 0;
            if (miss > 0) by_missing.emplace_back(miss, j);
        }
        std::sort(by_missing.begin(), by_missing.end());
        for (const auto& [miss, j] : by_missing) visit_order_.push_back(j);
        fitted_ = true;
    }

    Dataset impute_one(std::uint64_t seed) const override {
        if (!fitted_) throw Error("fcs: impute before fit");
        Dataset out = data_;
        Rng rng(seed);

        // Initialization of every missing cell.
        for (int j : visit_order_) {
            if (data_.kind(j).is_categorical()) {
                const double fill = gaussian_ ? 0.0 : observed_mode(data_, j);
                const auto obs = observed_values(data_, j);
                for (int i = 0; i < data_.n_rows(); ++i) {
                    if (!data_.is_missing(i, j)) continue;
                    out.set(i, j, gaussian_ ? obs[rng.uniform_int(obs.size())] : fill);
                }
            } else {
                const auto obs = observed_values(data_, j);
                double m = 0.0;
                if (!gaussian_) {
                    for (double v : obs) m += v;
                    m /= static_cast<double>(obs.size());
                }
                for (int i = 0; i < data_.n_rows(); ++i) {
                    if (!data_.is_missing(i, j)) continue;
                    out.set(i, j, gaussian_ ? obs[rng.uniform_int(obs.size())] : m);
                }
            }
        }

        for (int sweep = 0; sweep < iterations_; ++sweep) {
            for (int j : visit_order_) {
                if (data_.kind(j).is_categorical()) {
                    if (gaussian_) {
                        // Marginal redraw; a linear model has no natural
                        // categorical target here.
                        const auto obs = observed_values(data_, j);
                        for (int i = 0; i < data_.n_rows(); ++i) {
                            if (data_.is_missing(i, j)) out.set(i, j, obs[rng.uniform_int(obs.size())]);
                        }
                    }
                    continue;
                }
                update_continuous(out, j, rng);
            }
        }
        return out;
    }

private:
    void update_continuous(Dataset& out, int j, Rng& rng) const {
        std::vector<int> train_rows;
        std::vector<int> fill_rows;
        for (int i = 0; i < data_.n_rows(); ++i) {
            (data_.is_missing(i, j) ? fill_rows : train_rows).push_back(i);
        }

        int q = 1; // intercept
        for (int k = 0; k < data_.n_cols(); ++k) {
            if (k != j) q += regressor_width(data_.kind(k));
        }

        const auto fill_regressors = [&](int i, Eigen::RowVectorXd& x) {
            x.setZero();
            x(0) = 1.0;
            int c = 1;
            for (int k = 0; k < data_.n_cols(); ++k) {
                if (k == j) continue;
                const auto& kind = data_.kind(k);
                const double v = out.get(i, k);
                if (kind.is_categorical()) {
                    const int level = static_cast<int>(v);
                    if (level > 0) x(c + level - 1) = 1.0;
                    c += regressor_width(kind);
                } else {
                    x(c++) = v;
                }
            }
        };

        const int n_train = static_cast<int>(train_rows.size());
        Eigen::MatrixXd X(n_train, q);
        Eigen::VectorXd y(n_train);
        Eigen::RowVectorXd row(q);
        for (int r = 0; r < n_train; ++r) {
            fill_regressors(train_rows[static_cast<std::size_t>(r)], row);
            X.row(r) = row;
            y(r) = data_.get(train_rows[static_cast<std::size_t>(r)], j);
        }

        Eigen::MatrixXd xtx = X.transpose() * X;
        const Eigen::VectorXd xty = X.transpose() * y;
        Eigen::LLT<Eigen::MatrixXd> llt(xtx);
        Eigen::VectorXd beta;
        bool ok = llt.info() == Eigen::Success;
        if (ok) {
            beta = llt.solve(xty);
            ok = beta.allFinite();
        }
        if (!ok) {
            // Singular design; retry with a small ridge penalty.
            xtx.diagonal().array() += 1e-6;
            llt.compute(xtx);
            if (llt.info() != Eigen::Success) {
                throw Error("fcs: regression for column '" + data_.name(j) + "' failed");
            }
            beta = llt.solve(xty);
        }

        double sigma = 0.0;
        if (gaussian_) {
            const double rss = (y - X * beta).squaredNorm();
            const int dof = std::max(1, n_train - q);
            sigma = std::sqrt(std::max(0.0, rss / static_cast<double>(dof)));
        }

        for (int i : fill_rows) {
            fill_regressors(i, row);
            double v = row.dot(beta);
            if (gaussian_) v += sigma * rng.normal();
            out.set(i, j, v);
        }
    }

    int iterations_;
    bool gaussian_;
    Dataset data_;
    std::vector<int> visit_order_;
    bool fitted_ = false;
};

} // namespace

std::unique_ptr<Imputer> make_fcs_gaussian(int iterations) {
    return std::make_unique<FcsImputer>(iterations, true);
}

std::unique_ptr<Imputer> make_fcs_regression_predict(int iterations) {
    return std::make_unique<FcsImputer>(iterations, false);
}

} // namespace iscore

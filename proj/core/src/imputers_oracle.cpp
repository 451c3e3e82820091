#include "iscore/imputers.hpp"

#include "iscore/error.hpp"
#include "iscore/numeric.hpp"
#include "iscore/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

namespace iscore {

namespace {

void require_continuous(const Dataset& data, int j, const char* who) {
    if (data.kind(j).is_categorical()) {
        throw Error(std::string(who) + ": categorical column '" + data.name(j) + "' unsupported");
    }
}

// Shared plan for oracles that draw each missing cell from a Gaussian
// conditional: per missing cell, the conditioning weights and residual SD
// are fixed by which companions are observed, so they are resolved at fit
// time; impute_one only consumes one normal draw per cell.
struct ConditionalPlan {
    int row = 0;
    int col = 0;                 // dataset column to fill
    std::vector<int> companions; // dataset columns conditioned on
    std::vector<double> weights; // same length as companions
    double mean_offset = 0.0;
    double sd = 1.0;
};

// mean_offset/weights/sd of target | companions for N(mu, Sigma).
void gaussian_conditional(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma, int target,
                          const std::vector<int>& companions, ConditionalPlan& plan) {
    const int q = static_cast<int>(companions.size());
    if (q == 0) {
        plan.mean_offset = mu(target);
        plan.sd = std::sqrt(sigma(target, target));
        return;
    }
    Eigen::MatrixXd skk(q, q);
    Eigen::VectorXd sak(q);
    for (int a = 0; a < q; ++a) {
        sak(a) = sigma(target, companions[static_cast<std::size_t>(a)]);
        for (int b = 0; b < q; ++b) {
            skk(a, b) = sigma(companions[static_cast<std::size_t>(a)],
                              companions[static_cast<std::size_t>(b)]);
        }
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(skk);
    if (llt.info() != Eigen::Success) throw Error("gaussian oracle: covariance not positive definite");
    const Eigen::VectorXd w = llt.solve(sak);
    const double var = sigma(target, target) - sak.dot(w);
    plan.weights.assign(w.data(), w.data() + q);
    plan.sd = std::sqrt(std::max(0.0, var));
    double offset = mu(target);
    for (int a = 0; a < q; ++a) {
        offset -= plan.weights[static_cast<std::size_t>(a)] * mu(companions[static_cast<std::size_t>(a)]);
    }
    plan.mean_offset = offset;
}

// I.i.d. draws per missing cell; covers the uniform and sqrt-uniform
// oracles.
class IidOracle : public Imputer {
public:
    IidOracle(std::string name, bool sq) : name_(std::move(name)), sq_(sq) {}

    std::string name() const override { return name_; }
    bool multiple_capable() const override { return true; }
    std::unique_ptr<Imputer> clone() const override { return std::make_unique<IidOracle>(*this); }

    void fit(const Dataset& data, std::uint64_t /*seed*/) override {
        for (int j = 0; j < data.n_cols(); ++j) require_continuous(data, j, name_.c_str());
        data_ = data;
        fitted_ = true;
    }

    Dataset impute_one(std::uint64_t seed) const override {
        if (!fitted_) throw Error(name_ + ": impute before fit");
        Dataset out = data_;
        Rng rng(seed);
        for (int j = 0; j < data_.n_cols(); ++j) {
            for (int i = 0; i < data_.n_rows(); ++i) {
                if (!data_.is_missing(i, j)) continue;
                const double u = rng.uniform01();
                out.set(i, j, sq_ ? std::sqrt(u) : u);
            }
        }
        return out;
    }

private:
    std::string name_;
    bool sq_;
    Dataset data_;
    bool fitted_ = false;
};

// Gaussian copula over columns named x1..x3 with Toeplitz correlation
// rho^|i-j|; every other column is an independent U(0,1). Observed copula
// companions are mapped through the normal quantile, conditioned on exactly,
// and the draw is mapped back.
class DepUniformOracle : public Imputer {
public:
    explicit DepUniformOracle(double rho) : rho_(rho) {
        if (!(rho > -1.0 && rho < 1.0)) throw Error("oracle-dep-uniform: rho must be in (-1,1)");
    }

    std::string name() const override { return "oracle-dep-uniform"; }
    bool multiple_capable() const override { return true; }
    std::unique_ptr<Imputer> clone() const override {
        return std::make_unique<DepUniformOracle>(*this);
    }

    void fit(const Dataset& data, std::uint64_t /*seed*/) override {
        for (int j = 0; j < data.n_cols(); ++j) require_continuous(data, j, "oracle-dep-uniform");
        data_ = data;
        plans_.clear();
        iid_cells_.clear();

        Eigen::MatrixXd sigma(3, 3);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) sigma(a, b) = std::pow(rho_, std::abs(a - b));
        }
        const Eigen::VectorXd mu = Eigen::VectorXd::Zero(3);

        std::vector<int> copula_col(3, -1); // dataset column of x1..x3
        std::vector<int> copula_id(static_cast<std::size_t>(data.n_cols()), -1);
        for (int j = 0; j < data.n_cols(); ++j) {
            for (int a = 0; a < 3; ++a) {
                if (data.name(j) == "x" + std::to_string(a + 1)) {
                    copula_col[static_cast<std::size_t>(a)] = j;
                    copula_id[static_cast<std::size_t>(j)] = a;
                }
            }
        }

        for (int j = 0; j < data.n_cols(); ++j) {
            for (int i = 0; i < data.n_rows(); ++i) {
                if (!data.is_missing(i, j)) continue;
                const int a = copula_id[static_cast<std::size_t>(j)];
                if (a < 0) {
                    iid_cells_.emplace_back(i, j);
                    continue;
                }
                ConditionalPlan plan;
                plan.row = i;
                plan.col = j;
                std::vector<int> comp_ids;
                for (int b = 0; b < 3; ++b) {
                    const int cj = copula_col[static_cast<std::size_t>(b)];
                    if (b == a || cj < 0 || data.is_missing(i, cj)) continue;
                    comp_ids.push_back(b);
                    plan.companions.push_back(cj);
                }
                gaussian_conditional(mu, sigma, a, comp_ids, plan);
                plans_.push_back(std::move(plan));
            }
        }
        fitted_ = true;
    }

    Dataset impute_one(std::uint64_t seed) const override {
        if (!fitted_) throw Error("oracle-dep-uniform: impute before fit");
        Dataset out = data_;
        Rng rng(seed);
        for (const auto& plan : plans_) {
            double m = plan.mean_offset;
            for (std::size_t a = 0; a < plan.companions.size(); ++a) {
                const double u = data_.get(plan.row, plan.companions[a]);
                if (!(u > 0.0 && u < 1.0)) {
                    throw Error("oracle-dep-uniform: companion value outside (0,1)");
                }
                m += plan.weights[a] * normal_quantile(u);
            }
            const double y = m + plan.sd * rng.normal();
            out.set(plan.row, plan.col, normal_cdf(y));
        }
        for (const auto& [i, j] : iid_cells_) {
            out.set(i, j, rng.uniform01());
        }
        return out;
    }

private:
    double rho_;
    Dataset data_;
    std::vector<ConditionalPlan> plans_;
    std::vector<std::pair<int, int>> iid_cells_;
    bool fitted_ = false;
};

class GaussianOracle : public Imputer {
public:
    GaussianOracle(std::vector<std::string> names, std::vector<double> mean,
                   std::vector<double> cov, bool conditional)
        : names_(std::move(names)), conditional_(conditional) {
        const int d = static_cast<int>(names_.size());
        if (static_cast<int>(mean.size()) != d || static_cast<int>(cov.size()) != d * d) {
            throw Error("gaussian oracle: mean/covariance size mismatch");
        }
        mu_ = Eigen::Map<const Eigen::VectorXd>(mean.data(), d);
        sigma_ = Eigen::Map<const Eigen::MatrixXd>(cov.data(), d, d);
        if (!sigma_.isApprox(sigma_.transpose())) {
            throw Error("gaussian oracle: covariance must be symmetric");
        }
    }

    std::string name() const override {
        return conditional_ ? "oracle-gauss-cond" : "oracle-gauss-indep";
    }
    bool multiple_capable() const override { return true; }
    std::unique_ptr<Imputer> clone() const override {
        return std::make_unique<GaussianOracle>(*this);
    }

    void fit(const Dataset& data, std::uint64_t /*seed*/) override {
        data_ = data;
        plans_.clear();
        std::vector<int> oracle_id(static_cast<std::size_t>(data.n_cols()), -1);
        for (int j = 0; j < data.n_cols(); ++j) {
            require_continuous(data, j, "gaussian oracle");
            const auto it = std::find(names_.begin(), names_.end(), data.name(j));
            if (it == names_.end()) {
                throw Error("gaussian oracle: unknown column '" + data.name(j) + "'");
            }
            oracle_id[static_cast<std::size_t>(j)] = static_cast<int>(it - names_.begin());
        }
        for (int j = 0; j < data.n_cols(); ++j) {
            for (int i = 0; i < data.n_rows(); ++i) {
                if (!data.is_missing(i, j)) continue;
                ConditionalPlan plan;
                plan.row = i;
                plan.col = j;
                std::vector<int> comp_ids;
                if (conditional_) {
                    for (int k = 0; k < data.n_cols(); ++k) {
                        if (k == j || data.is_missing(i, k)) continue;
                        comp_ids.push_back(oracle_id[static_cast<std::size_t>(k)]);
                        plan.companions.push_back(k);
                    }
                }
                gaussian_conditional(mu_, sigma_, oracle_id[static_cast<std::size_t>(j)], comp_ids,
                                     plan);
                plans_.push_back(std::move(plan));
            }
        }
        fitted_ = true;
    }

    Dataset impute_one(std::uint64_t seed) const override {
        if (!fitted_) throw Error("gaussian oracle: impute before fit");
        Dataset out = data_;
        Rng rng(seed);
        for (const auto& plan : plans_) {
            double m = plan.mean_offset;
            for (std::size_t a = 0; a < plan.companions.size(); ++a) {
                m += plan.weights[a] * data_.get(plan.row, plan.companions[a]);
            }
            out.set(plan.row, plan.col, m + plan.sd * rng.normal());
        }
        return out;
    }

private:
    std::vector<std::string> names_;
    bool conditional_;
    Eigen::VectorXd mu_;
    Eigen::MatrixXd sigma_;
    Dataset data_;
    std::vector<ConditionalPlan> plans_;
    bool fitted_ = false;
};

} // namespace

std::unique_ptr<Imputer> make_oracle_uniform() {
    return std::make_unique<IidOracle>("oracle-uniform", false);
}

std::unique_ptr<Imputer> make_oracle_uniform_sq() {
    return std::make_unique<IidOracle>("oracle-uniform-sq", true);
}

std::unique_ptr<Imputer> make_oracle_dep_uniform(double rho) {
    return std::make_unique<DepUniformOracle>(rho);
}

std::unique_ptr<Imputer> make_gaussian_oracle(std::vector<std::string> names,
                                              std::vector<double> mean,
                                              std::vector<double> covariance_row_major,
                                              bool conditional) {
    return std::make_unique<GaussianOracle>(std::move(names), std::move(mean),
                                            std::move(covariance_row_major), conditional);
}

std::unique_ptr<Imputer> make_oracle_gauss_conditional(double rho12, int d) {
    std::vector<std::string> names;
    for (int j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
    std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
    std::vector<double> cov(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) cov[static_cast<std::size_t>(j * d + j)] = 1.0;
    if (d >= 2) {
        cov[1] = rho12;
        cov[static_cast<std::size_t>(d)] = rho12;
    }
    return std::make_unique<GaussianOracle>(std::move(names), std::move(mean), std::move(cov), true);
}

std::unique_ptr<Imputer> make_oracle_gauss_independent(int d) {
    std::vector<std::string> names;
    for (int j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
    std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
    std::vector<double> cov(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) cov[static_cast<std::size_t>(j * d + j)] = 1.0;
    return std::make_unique<GaussianOracle>(std::move(names), std::move(mean), std::move(cov), false);
}

} // namespace iscore

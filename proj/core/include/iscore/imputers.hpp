#pragma once

#include "iscore/dataset.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace iscore {

// An imputation method H. fit() captures an incomplete dataset; impute()
// then produces completions of it. Observed cells are returned unchanged in
// every replicate, and identical (data, seed) pairs give identical output.
//
// impute(k, seed) runs replicate r on the substream derive_seed(seed, r),
// so replicate r has the same content no matter how many replicates are
// requested. Methods with multiple_capable() == false ignore the seed and
// return k identical completions.
//
// Fitted imputers are immutable; impute() calls may run concurrently.
class Imputer {
public:
    virtual ~Imputer() = default;

    virtual std::string name() const = 0;
    virtual bool multiple_capable() const = 0;
    virtual std::unique_ptr<Imputer> clone() const = 0;

    virtual void fit(const Dataset& data, std::uint64_t seed) = 0;
    virtual Dataset impute_one(std::uint64_t seed) const = 0;

    std::vector<Dataset> impute(int k, std::uint64_t seed) const;
};

// Fully conditional specification with Gaussian draws: missing cells start
// as marginal draws, then each incomplete column is regressed on all others
// (least squares, ridge 1e-6 on singular designs) and its missing cells are
// redrawn as fitted value + residual-SD Gaussian noise, for `iterations`
// sweeps. Columns are visited in ascending missing-count order. Categorical
// targets fall back to marginal draws; categorical regressors enter one-hot.
std::unique_ptr<Imputer> make_fcs_gaussian(int iterations = 5);

// Same chain without the noise or the initial randomness: pure
// conditional-mean fill (mode fill for categorical targets). Degenerate by
// construction: multiple_capable() is false.
std::unique_ptr<Imputer> make_fcs_regression_predict(int iterations = 5);

// Each missing cell drawn uniformly from the observed values of its column.
std::unique_ptr<Imputer> make_marginal_sample();

// Donor imputation: per missing cell, the k nearest rows by Euclidean
// distance over jointly observed z-scored numeric columns (rows sharing no
// such column sort last); the donor is drawn uniformly among them.
std::unique_ptr<Imputer> make_knn(int k_neighbors);

// Benchmark oracles. The uniform family treats columns named x1..x3 as a
// Gaussian copula with Toeplitz correlation rho^|i-j| and every other column
// as independent U(0,1); rho = 0 degenerates to i.i.d. uniforms.
std::unique_ptr<Imputer> make_oracle_uniform();
std::unique_ptr<Imputer> make_oracle_uniform_sq(); // density 2x on [0,1], x = sqrt(U)
std::unique_ptr<Imputer> make_oracle_dep_uniform(double rho);

// Gaussian oracle over named columns with known mean and covariance. The
// conditional variant draws each missing cell from its exact Gaussian
// conditional given the observed cells of the row; the independent variant
// draws from the marginal.
std::unique_ptr<Imputer> make_gaussian_oracle(std::vector<std::string> names,
                                              std::vector<double> mean,
                                              std::vector<double> covariance_row_major,
                                              bool conditional);

// Presets for the six-column standard-normal layout whose only dependence
// is cov(x1, x2) = rho12.
std::unique_ptr<Imputer> make_oracle_gauss_conditional(double rho12 = 0.7, int d = 6);
std::unique_ptr<Imputer> make_oracle_gauss_independent(int d = 6);

// Parse a method spec like "fcs-gaussian", "knn(k=5)" or
// "oracle-dep-uniform(rho=0.7)" into an imputer.
std::unique_ptr<Imputer> make_imputer(const std::string& spec);

// Method names understood by make_imputer.
std::vector<std::string> builtin_imputer_names();

} // namespace iscore

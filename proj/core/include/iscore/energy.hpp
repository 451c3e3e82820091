#pragma once

#include "iscore/dataset.hpp"

#include <span>
#include <vector>

namespace iscore {

// N replicate values for one scored cell: scalars (arity 1) for a continuous
// variable, one-hot vectors (arity p) for a categorical one. A set in which
// every draw is identical is legal; it is how single-imputation methods look
// to the score.
struct ImputationDraws {
    std::vector<double> values; // n_draws x arity, row-major
    int n_draws = 0;
    int arity = 1;

    std::span<const double> draw(int l) const {
        return {values.data() + static_cast<std::size_t>(l) * static_cast<std::size_t>(arity),
                static_cast<std::size_t>(arity)};
    }
};

// Empirical energy score of a draw set against one observed test value:
//
//   (1 / 2N^2) sum_{l,l'} ||x_l - x_l'||  -  (1 / N) sum_l ||x_l - y||
//
// Euclidean norm throughout (absolute value for scalars); the pairwise sum
// keeps its zero diagonal and the 2N^2 denominator. If all draws equal a,
// this collapses to -||a - y||.
double empirical_energy_score(const ImputationDraws& draws, std::span<const double> test);
double empirical_energy_score(const ImputationDraws& draws, double test);

// A finitely supported distribution; weights must sum to 1 within 1e-12.
struct DiscreteDistribution {
    std::vector<std::vector<double>> atoms;
    std::vector<double> weights;
};

// Exact expected energy score E_{Y~truth}[ 1/2 E||X-X'|| - E||X-Y|| ] by
// exhaustive summation over both supports.
double expected_energy_score(const DiscreteDistribution& predictive,
                             const DiscreteDistribution& truth);

// Dense numeric matrix used by the two-sample energy distance.
struct NumericMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data; // row-major

    double* row(int i) { return data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(cols); }
    const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(cols); }
};

// Two-sample energy distance in V-statistic form (all-pairs means, zero
// diagonals included):
//
//   2 mean||x - y|| - mean||x - x'|| - mean||y - y'||
//
// Arguments are canonicalized internally, so energy_distance(a, b) and
// energy_distance(b, a) are bitwise equal.
double energy_distance(const NumericMatrix& a, const NumericMatrix& b);

// Complete dataset flattened to a numeric matrix, categorical columns
// expanded to one-hot indicators (distinct categories sit sqrt(2) apart).
NumericMatrix one_hot_encode(const Dataset& complete);

// Negative energy distance between two complete datasets of identical
// schema. Zero when the imputation reproduces the data exactly; negative
// otherwise. Needs ground truth, hence only available on benchmarks.
double full_information_score(const Dataset& complete, const Dataset& imputed);

} // namespace iscore

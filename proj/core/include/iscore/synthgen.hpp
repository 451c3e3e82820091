#pragma once

#include "iscore/dataset.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace iscore {

// A ground-truth table and its masked counterpart; unmasking the masked
// dataset reproduces the complete one bitwise.
struct GeneratedPair {
    Dataset complete;
    Dataset masked;
};

// Six i.i.d. U(0,1) columns x1..x6 (rho = 0), or x1..x3 pushed through a
// Gaussian copula with Toeplitz correlation rho^|i-j| (rho != 0). Each row
// takes one of three patterns: both x1 and x2 observed with probability
// x1/3, x2 masked with probability 2/3 - x1/3, x1 masked with probability
// 1/3. Marginally the patterns occur with probabilities 1/6, 1/2, 1/3.
GeneratedPair gen_uniform(int n, double rho = 0.0, std::uint64_t seed = 0);

// Three patterns, each masking one of x1..x3 on its own block of
// n_per_pattern rows. The observed block x4..x6 is Gaussian with per-pattern
// mean (5,5,5), (0,0,0) or (-5,-5,-5) and Toeplitz covariance 0.5^|i-j|;
// x1..x3 = B x_obs + eps with B rows (0.5, 1, 1.5) and eps ~ N(0, 4).
GeneratedPair gen_gauss_mixture(int n_per_pattern = 500, std::uint64_t seed = 0);

// As gen_gauss_mixture with the linear link replaced by nonlinear_link.
GeneratedPair gen_nonlinear_mixture(int n_per_pattern = 500, std::uint64_t seed = 0);

// (x3 sin(x1 x2), x2 1{x2 > 0}, atan(x1) atan(x2))
std::array<double, 3> nonlinear_link(double x1, double x2, double x3);

// Six standard-normal columns, independent except cov(x1, x2) = 0.7; each
// row masks x1, masks x2, or stays complete, with probability 1/3 each.
GeneratedPair gen_strict_propriety(int n = 2000, std::uint64_t seed = 0);

// MCAR amputation of an existing complete dataset: n_always_observed columns
// (drawn uniformly) stay complete, every other cell goes missing i.i.d. with
// the rate that makes the overall missing fraction equal prop; rows that
// end up fully missing across the amputable columns are redrawn.
Dataset mcar_amputate(const Dataset& complete, double prop, int n_always_observed,
                      std::uint64_t seed = 0);

// The per-cell Bernoulli rate solving prop * d = q * (d - n_always_observed).
double mcar_bernoulli_rate(int n_cols, int n_always_observed, double prop);

// Declarative generator description; round-trips through the simulate
// manifest so a dataset can be regenerated byte-identically.
struct GeneratorSpec {
    std::string kind = "uniform"; // uniform | gauss-mixture | nonlinear-mixture |
                                  // strict-propriety | mcar
    int n = 2000;                 // uniform / strict-propriety
    int n_per_pattern = 500;      // mixtures
    double rho = 0.0;             // uniform copula correlation
    double prop = 0.1;            // mcar
    int n_always_observed = 0;    // mcar
    std::string input_csv;        // mcar source table
    std::uint64_t seed = 0;
};

GeneratedPair generate(const GeneratorSpec& spec);

} // namespace iscore

#pragma once

#include <cstddef>
#include <vector>

namespace iscore {

// Neumaier-compensated accumulator. Used for every pairwise-distance sum in
// the scoring kernels so results do not depend on accumulation chunking.
class KahanSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double normal_cdf(double x);

// Inverse standard-normal CDF, accurate to ~1e-15 over (0, 1)
// (rational approximation refined by one Halley step).
double normal_quantile(double p);

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);
double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

} // namespace iscore

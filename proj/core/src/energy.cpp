#include "iscore/energy.hpp"

#include "iscore/error.hpp"
#include "iscore/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace iscore {

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() == 1) return std::abs(a[0] - b[0]);
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

void check_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw Error(std::string(what) + ": non-finite value");
    }
}

} // namespace

double empirical_energy_score(const ImputationDraws& draws, std::span<const double> test) {
    const int n = draws.n_draws;
    if (n < 1) throw Error("empirical_energy_score: need at least one draw");
    if (static_cast<int>(test.size()) != draws.arity) {
        throw Error("empirical_energy_score: test arity mismatch");
    }
    check_finite(test, "empirical_energy_score");
    check_finite(draws.values, "empirical_energy_score");

    KahanSum pair_sum;
    for (int l = 0; l < n; ++l) {
        for (int m = l + 1; m < n; ++m) {
            pair_sum.add(euclidean(draws.draw(l), draws.draw(m)));
        }
    }
    KahanSum dist_sum;
    for (int l = 0; l < n; ++l) {
        dist_sum.add(euclidean(draws.draw(l), test));
    }
    const double nn = static_cast<double>(n);
    // Unordered pairs doubled: equals the full double sum over ordered pairs
    // with its zero diagonal, divided by 2 n^2.
    return pair_sum.value() / (nn * nn) - dist_sum.value() / nn;
}

double empirical_energy_score(const ImputationDraws& draws, double test) {
    return empirical_energy_score(draws, std::span<const double>(&test, 1));
}

double expected_energy_score(const DiscreteDistribution& predictive,
                             const DiscreteDistribution& truth) {
    const auto check = [](const DiscreteDistribution& d, const char* name) {
        if (d.atoms.empty() || d.atoms.size() != d.weights.size()) {
            throw Error(std::string("expected_energy_score: malformed ") + name);
        }
        KahanSum w;
        for (double x : d.weights) {
            if (x < 0.0) throw Error("expected_energy_score: negative weight");
            w.add(x);
        }
        if (std::abs(w.value() - 1.0) > 1e-12) {
            throw Error(std::string("expected_energy_score: ") + name + " weights do not sum to 1");
        }
    };
    check(predictive, "predictive");
    check(truth, "truth");
    const std::size_t arity = predictive.atoms[0].size();
    for (const auto& a : predictive.atoms) {
        if (a.size() != arity) throw Error("expected_energy_score: ragged atoms");
    }
    for (const auto& a : truth.atoms) {
        if (a.size() != arity) throw Error("expected_energy_score: ragged atoms");
    }

    KahanSum spread;
    for (std::size_t i = 0; i < predictive.atoms.size(); ++i) {
        for (std::size_t j = 0; j < predictive.atoms.size(); ++j) {
            spread.add(predictive.weights[i] * predictive.weights[j] *
                       euclidean(predictive.atoms[i], predictive.atoms[j]));
        }
    }
    KahanSum cross;
    for (std::size_t i = 0; i < predictive.atoms.size(); ++i) {
        for (std::size_t k = 0; k < truth.atoms.size(); ++k) {
            cross.add(predictive.weights[i] * truth.weights[k] *
                      euclidean(predictive.atoms[i], truth.atoms[k]));
        }
    }
    return 0.5 * spread.value() - cross.value();
}

namespace {

double mean_cross_distance(const NumericMatrix& a, const NumericMatrix& b) {
    KahanSum s;
    for (int i = 0; i < a.rows; ++i) {
        const double* x = a.row(i);
        for (int j = 0; j < b.rows; ++j) {
            const double* y = b.row(j);
            double d2 = 0.0;
            for (int k = 0; k < a.cols; ++k) {
                const double d = x[k] - y[k];
                d2 += d * d;
            }
            s.add(std::sqrt(d2));
        }
    }
    return s.value() / (static_cast<double>(a.rows) * static_cast<double>(b.rows));
}

// Lexicographic order on (rows, cols, data); makes the cross term's
// iteration order independent of which argument came first.
bool matrix_less(const NumericMatrix& a, const NumericMatrix& b) {
    if (a.rows != b.rows) return a.rows < b.rows;
    if (a.cols != b.cols) return a.cols < b.cols;
    return std::lexicographical_compare(a.data.begin(), a.data.end(), b.data.begin(), b.data.end());
}

} // namespace

double energy_distance(const NumericMatrix& a, const NumericMatrix& b) {
    if (a.cols != b.cols) throw Error("energy_distance: column count mismatch");
    if (a.rows < 1 || b.rows < 1) throw Error("energy_distance: empty sample");
    check_finite(a.data, "energy_distance");
    check_finite(b.data, "energy_distance");

    const NumericMatrix* first = &a;
    const NumericMatrix* second = &b;
    if (matrix_less(b, a)) std::swap(first, second);

    const double cross = mean_cross_distance(*first, *second);
    const double within_a = mean_cross_distance(*first, *first);
    const double within_b = mean_cross_distance(*second, *second);
    return 2.0 * cross - within_a - within_b;
}

NumericMatrix one_hot_encode(const Dataset& complete) {
    if (!complete.is_complete()) throw Error("one_hot_encode: dataset has missing cells");
    int width = 0;
    for (int j = 0; j < complete.n_cols(); ++j) {
        width += complete.kind(j).is_categorical() ? complete.kind(j).n_levels() : 1;
    }
    NumericMatrix m;
    m.rows = complete.n_rows();
    m.cols = width;
    m.data.assign(static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(width), 0.0);
    for (int i = 0; i < complete.n_rows(); ++i) {
        double* row = m.row(i);
        int c = 0;
        for (int j = 0; j < complete.n_cols(); ++j) {
            const auto& k = complete.kind(j);
            if (k.is_categorical()) {
                row[c + static_cast<int>(complete.get(i, j))] = 1.0;
                c += k.n_levels();
            } else {
                row[c++] = complete.get(i, j);
            }
        }
    }
    return m;
}

double full_information_score(const Dataset& complete, const Dataset& imputed) {
    if (!complete.same_schema(imputed)) {
        throw Error("full_information_score: datasets differ in shape or kinds");
    }
    return -energy_distance(one_hot_encode(complete), one_hot_encode(imputed));
}

} // namespace iscore

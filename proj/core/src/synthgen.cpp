#include "iscore/synthgen.hpp"

#include "iscore/csv.hpp"
#include "iscore/error.hpp"
#include "iscore/numeric.hpp"
#include "iscore/rng.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace iscore {

namespace {

std::vector<std::string> x_names(int d) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
    return names;
}

Dataset blank_continuous(int n, int d) {
    return Dataset(x_names(d), std::vector<ColumnKind>(static_cast<std::size_t>(d)), n);
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& sigma) {
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw Error("generator covariance not positive definite");
    return llt.matrixL();
}

Dataset apply_masks(const Dataset& complete, const std::vector<std::vector<int>>& masked_cols) {
    Dataset masked = complete;
    for (int i = 0; i < complete.n_rows(); ++i) {
        for (int j : masked_cols[static_cast<std::size_t>(i)]) {
            masked.set(i, j, std::numeric_limits<double>::quiet_NaN());
        }
    }
    return masked;
}

} // namespace

GeneratedPair gen_uniform(int n, double rho, std::uint64_t seed) {
    if (n < 1) throw Error("gen_uniform: n must be >= 1");
    if (!(rho > -1.0 && rho < 1.0)) throw Error("gen_uniform: rho must be in (-1,1)");
    const int d = 6;
    Dataset complete = blank_continuous(n, d);
    Rng rng(derive_seed(seed, "gen.uniform"));

    Eigen::MatrixXd chol;
    if (rho != 0.0) {
        Eigen::MatrixXd sigma(3, 3);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) sigma(a, b) = std::pow(rho, std::abs(a - b));
        }
        chol = cholesky_lower(sigma);
    }

    std::vector<std::vector<int>> masked_cols(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (rho == 0.0) {
            for (int j = 0; j < 3; ++j) complete.set(i, j, rng.uniform01());
        } else {
            Eigen::Vector3d z(rng.normal(), rng.normal(), rng.normal());
            const Eigen::Vector3d y = chol * z;
            for (int j = 0; j < 3; ++j) complete.set(i, j, normal_cdf(y(j)));
        }
        for (int j = 3; j < d; ++j) complete.set(i, j, rng.uniform01());

        // P(m1 | x1) = x1/3, P(m2 | x1) = 2/3 - x1/3, P(m3) = 1/3, where m1
        // observes everything, m2 masks x2, m3 masks x1.
        const double x1 = complete.get(i, 0);
        const double u = rng.uniform01();
        if (u < x1 / 3.0) {
            // fully observed
        } else if (u < 2.0 / 3.0) {
            masked_cols[static_cast<std::size_t>(i)] = {1};
        } else {
            masked_cols[static_cast<std::size_t>(i)] = {0};
        }
    }
    return {complete, apply_masks(complete, masked_cols)};
}

namespace {

GeneratedPair gen_mixture(int n_per_pattern, std::uint64_t seed, bool nonlinear) {
    if (n_per_pattern < 1) throw Error("mixture generator: n_per_pattern must be >= 1");
    const int d = 6;
    const int n = 3 * n_per_pattern;
    Dataset complete = blank_continuous(n, d);
    Rng rng(derive_seed(seed, nonlinear ? "gen.nonlinear-mixture" : "gen.gauss-mixture"));

    Eigen::MatrixXd sigma(3, 3);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) sigma(a, b) = std::pow(0.5, std::abs(a - b));
    }
    const Eigen::MatrixXd chol = cholesky_lower(sigma);
    const double mu_by_pattern[3] = {5.0, 0.0, -5.0};
    const double b_row[3] = {0.5, 1.0, 1.5};

    std::vector<std::vector<int>> masked_cols(static_cast<std::size_t>(n));
    for (int p = 0; p < 3; ++p) {
        for (int r = 0; r < n_per_pattern; ++r) {
            const int i = p * n_per_pattern + r;
            Eigen::Vector3d z(rng.normal(), rng.normal(), rng.normal());
            Eigen::Vector3d xo = (chol * z).array() + mu_by_pattern[p];
            for (int j = 0; j < 3; ++j) complete.set(i, 3 + j, xo(j));

            double link[3];
            if (nonlinear) {
                const auto f = nonlinear_link(xo(0), xo(1), xo(2));
                link[0] = f[0];
                link[1] = f[1];
                link[2] = f[2];
            } else {
                const double s = b_row[0] * xo(0) + b_row[1] * xo(1) + b_row[2] * xo(2);
                link[0] = link[1] = link[2] = s;
            }
            for (int j = 0; j < 3; ++j) {
                complete.set(i, j, link[j] + 2.0 * rng.normal()); // N(0, 4) noise
            }
            masked_cols[static_cast<std::size_t>(i)] = {p}; // pattern p masks column p
        }
    }
    return {complete, apply_masks(complete, masked_cols)};
}

} // namespace

GeneratedPair gen_gauss_mixture(int n_per_pattern, std::uint64_t seed) {
    return gen_mixture(n_per_pattern, seed, false);
}

GeneratedPair gen_nonlinear_mixture(int n_per_pattern, std::uint64_t seed) {
    return gen_mixture(n_per_pattern, seed, true);
}

std::array<double, 3> nonlinear_link(double x1, double x2, double x3) {
    return {x3 * std::sin(x1 * x2), x2 > 0.0 ? x2 : 0.0, std::atan(x1) * std::atan(x2)};
}

GeneratedPair gen_strict_propriety(int n, std::uint64_t seed) {
    if (n < 1) throw Error("gen_strict_propriety: n must be >= 1");
    const int d = 6;
    Dataset complete = blank_continuous(n, d);
    Rng rng(derive_seed(seed, "gen.strict-propriety"));

    const double rho = 0.7;
    std::vector<std::vector<int>> masked_cols(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        complete.set(i, 0, z1);
        complete.set(i, 1, rho * z1 + std::sqrt(1.0 - rho * rho) * z2);
        for (int j = 2; j < d; ++j) complete.set(i, j, rng.normal());

        const double u = rng.uniform01();
        if (u < 1.0 / 3.0) {
            masked_cols[static_cast<std::size_t>(i)] = {0};
        } else if (u < 2.0 / 3.0) {
            masked_cols[static_cast<std::size_t>(i)] = {1};
        }
    }
    return {complete, apply_masks(complete, masked_cols)};
}

double mcar_bernoulli_rate(int n_cols, int n_always_observed, double prop) {
    if (n_always_observed < 0 || n_always_observed >= n_cols) {
        throw Error("mcar: n_always_observed must be in [0, d)");
    }
    if (!(prop >= 0.0 && prop < 1.0)) throw Error("mcar: prop must be in [0,1)");
    const double q = prop * static_cast<double>(n_cols) /
                     static_cast<double>(n_cols - n_always_observed);
    if (q >= 1.0) throw Error("mcar: requested missing fraction is unreachable");
    return q;
}

Dataset mcar_amputate(const Dataset& complete, double prop, int n_always_observed,
                      std::uint64_t seed) {
    if (!complete.is_complete()) throw Error("mcar: input dataset has missing cells");
    const int d = complete.n_cols();
    const double q = mcar_bernoulli_rate(d, n_always_observed, prop);
    Rng rng(derive_seed(seed, "gen.mcar"));

    std::vector<char> keep(static_cast<std::size_t>(d), 0);
    for (int j : sample_without_replacement(rng, d, n_always_observed)) {
        keep[static_cast<std::size_t>(j)] = 1;
    }

    Dataset masked = complete;
    if (prop == 0.0) return masked;
    const int n_amputable = d - n_always_observed;
    std::vector<int> hit;
    for (int i = 0; i < complete.n_rows(); ++i) {
        for (;;) {
            hit.clear();
            for (int j = 0; j < d; ++j) {
                if (keep[static_cast<std::size_t>(j)]) continue;
                if (rng.uniform01() < q) hit.push_back(j);
            }
            if (static_cast<int>(hit.size()) < n_amputable) break; // not fully missing
        }
        for (int j : hit) masked.set(i, j, std::numeric_limits<double>::quiet_NaN());
    }
    return masked;
}

GeneratedPair generate(const GeneratorSpec& spec) {
    if (spec.kind == "uniform") return gen_uniform(spec.n, spec.rho, spec.seed);
    if (spec.kind == "gauss-mixture") return gen_gauss_mixture(spec.n_per_pattern, spec.seed);
    if (spec.kind == "nonlinear-mixture") {
        return gen_nonlinear_mixture(spec.n_per_pattern, spec.seed);
    }
    if (spec.kind == "strict-propriety") return gen_strict_propriety(spec.n, spec.seed);
    if (spec.kind == "mcar") {
        if (spec.input_csv.empty()) throw Error("mcar generator needs an input csv");
        const Dataset complete = read_csv_file(spec.input_csv);
        return {complete, mcar_amputate(complete, spec.prop, spec.n_always_observed, spec.seed)};
    }
    throw Error("unknown generator '" + spec.kind +
                "'; known: uniform gauss-mixture nonlinear-mixture strict-propriety mcar");
}

} // namespace iscore

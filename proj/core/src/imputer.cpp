#include "iscore/imputers.hpp"

#include "iscore/error.hpp"
#include "iscore/rng.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

namespace iscore {

std::vector<Dataset> Imputer::impute(int k, std::uint64_t seed) const {
    if (k < 1) throw Error("impute: need k >= 1");
    std::vector<Dataset> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
        out.push_back(impute_one(derive_seed(seed, static_cast<std::uint64_t>(r))));
    }
    return out;
}

namespace {

struct ParsedSpec {
    std::string name;
    std::map<std::string, double> params;
};

ParsedSpec parse_spec(const std::string& spec) {
    ParsedSpec out;
    const auto open = spec.find('(');
    if (open == std::string::npos) {
        out.name = spec;
        return out;
    }
    if (spec.back() != ')') throw Error("imputer spec '" + spec + "': missing ')'");
    out.name = spec.substr(0, open);
    std::string body = spec.substr(open + 1, spec.size() - open - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto comma = body.find(',', pos);
        if (comma == std::string::npos) comma = body.size();
        std::string item = body.substr(pos, comma - pos);
        pos = comma + 1;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("imputer spec '" + spec + "': expected key=value");
        std::string key = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        const auto strip = [](std::string& s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        };
        strip(key);
        strip(val);
        double v = 0.0;
        const auto res = std::from_chars(val.data(), val.data() + val.size(), v);
        if (res.ec != std::errc() || res.ptr != val.data() + val.size()) {
            throw Error("imputer spec '" + spec + "': bad value for '" + key + "'");
        }
        out.params[key] = v;
    }
    return out;
}

double param_or(const ParsedSpec& s, const std::string& key, double fallback) {
    const auto it = s.params.find(key);
    return it == s.params.end() ? fallback : it->second;
}

} // namespace

std::vector<std::string> builtin_imputer_names() {
    return {"fcs-gaussian",      "fcs-regression-predict",
            "marginal-sample",   "knn",
            "oracle-uniform",    "oracle-uniform-sq",
            "oracle-dep-uniform", "oracle-gauss-cond",
            "oracle-gauss-indep"};
}

std::unique_ptr<Imputer> make_imputer(const std::string& spec) {
    const ParsedSpec p = parse_spec(spec);
    if (p.name == "fcs-gaussian") {
        return make_fcs_gaussian(static_cast<int>(param_or(p, "iterations", 5)));
    }
    if (p.name == "fcs-regression-predict") {
        return make_fcs_regression_predict(static_cast<int>(param_or(p, "iterations", 5)));
    }
    if (p.name == "marginal-sample") return make_marginal_sample();
    if (p.name == "knn") return make_knn(static_cast<int>(param_or(p, "k", 5)));
    if (p.name == "oracle-uniform") return make_oracle_uniform();
    if (p.name == "oracle-uniform-sq") return make_oracle_uniform_sq();
    if (p.name == "oracle-dep-uniform") return make_oracle_dep_uniform(param_or(p, "rho", 0.7));
    if (p.name == "oracle-gauss-cond") {
        return make_oracle_gauss_conditional(param_or(p, "rho", 0.7),
                                             static_cast<int>(param_or(p, "d", 6)));
    }
    if (p.name == "oracle-gauss-indep") {
        return make_oracle_gauss_independent(static_cast<int>(param_or(p, "d", 6)));
    }
    std::string known;
    for (const auto& n : builtin_imputer_names()) known += " " + n;
    throw Error("unknown imputer '" + p.name + "'; known:" + known);
}

} // namespace iscore

#pragma once

#include "iscore/dataset.hpp"
#include "iscore/escore.hpp"
#include "iscore/escore_star.hpp"
#include "iscore/synthgen.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace iscore {

// One benchmark run: `repetitions` regenerated datasets, every method fitted
// and scored on each, scores standardized per score type over the pooled
// repetition x method batch, methods ranked by mean standardized
// energy-I-Score.
struct BenchConfig {
    GeneratorSpec generator;
    std::vector<std::string> methods; // imputer spec strings, unique
    int repetitions = 10;
    int n_draws = 50;
    int min_rows = 10;
    bool weighted = true;
    bool with_star = false;
    double star_test_fraction = 0.2;
    int star_pattern_draws = 0;
    bool with_full_information = true;
    std::uint64_t seed = 0;
    int threads = 0; // 0 = ISCORE_THREADS or hardware concurrency
};

struct MethodCell {
    double raw = std::numeric_limits<double>::quiet_NaN();
    double standardized = std::numeric_limits<double>::quiet_NaN();
    bool failed = false;
    std::string error;
};

struct ScoreTable {
    std::string score_type;
    std::vector<std::vector<MethodCell>> cells; // [repetition][method]
    std::vector<double> mean_standardized;      // per method over its finite cells
};

struct BenchmarkReport {
    BenchConfig config;
    std::vector<std::string> method_names;
    std::vector<ScoreTable> tables; // energy-i-score first, then optional types
    // Non-failed method indices, descending mean standardized energy-I-Score,
    // ties broken by method name.
    std::vector<int> ranking;
    std::vector<int> failed_methods; // failed on more than half the repetitions
    double runtime_seconds = 0.0;    // volatile; excluded from report.json

    const ScoreTable& table(const std::string& score_type) const;
};

// Seed streams: with R = derive(derive(seed, "bench.rep"), rep) and
// M = derive(derive(R, "bench.method"), method_name):
//   data            generator run with seed derive(R, "data")
//   fit / impute    derive(M, "fit") / derive(M, "impute")
//   scores          derive(M, "escore") / derive(M, "star")
// Repetition x method tasks run in a work pool; the report is identical for
// any thread count.
BenchmarkReport run_benchmark(const BenchConfig& config);

// The same benchmark re-run for each draw count in n_list (identical
// datasets across entries), plus per-repetition top methods for rank
// stability checks.
struct SweepEntry {
    int n_draws = 0;
    std::vector<double> mean_standardized;     // per method, energy-I-Score
    std::vector<int> ranking;                  // as in BenchmarkReport
    std::vector<int> top_method_per_repetition; // by raw energy-I-Score; -1 if none
};

struct SweepReport {
    BenchConfig config; // n_draws field ignored
    std::vector<std::string> method_names;
    std::vector<SweepEntry> entries;
    // Fraction of repetitions whose top method matches the largest-N entry.
    std::vector<double> top_agreement_with_reference;
};

SweepReport run_sweep_n(const BenchConfig& config, const std::vector<int>& n_list);

// Deterministic serializations (stable key order, shortest round-trip
// floats; NaN serializes as null).
std::string benchmark_report_json(const BenchmarkReport& report);
std::string benchmark_report_csv(const BenchmarkReport& report);  // ranking summary
std::string benchmark_scores_csv(const BenchmarkReport& report);  // per-repetition long form
std::string sweep_report_json(const SweepReport& report);
std::string score_report_json(const ScoreReport& report, const std::vector<std::string>& column_names);
std::string generator_manifest_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_manifest(const std::string& json_text);

} // namespace iscore

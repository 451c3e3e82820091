#include "iscore/bench.hpp"

#include "iscore/energy.hpp"
#include "iscore/error.hpp"
#include "iscore/imputers.hpp"
#include "iscore/numeric.hpp"
#include "iscore/parallel.hpp"
#include "iscore/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

namespace iscore {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

struct CellScores {
    MethodCell escore;
    MethodCell star;
    MethodCell full_info;
};

void fill_standardized(ScoreTable& table) {
    const int n_rep = static_cast<int>(table.cells.size());
    const int n_method = n_rep > 0 ? static_cast<int>(table.cells[0].size()) : 0;
    std::vector<double> pooled;
    pooled.reserve(static_cast<std::size_t>(n_rep * n_method));
    for (const auto& row : table.cells) {
        for (const auto& cell : row) pooled.push_back(cell.raw);
    }
    const auto standardized = standardize_scores(pooled);
    std::size_t k = 0;
    for (auto& row : table.cells) {
        for (auto& cell : row) cell.standardized = standardized.values[k++];
    }
    table.mean_standardized.assign(static_cast<std::size_t>(n_method),
                                   std::numeric_limits<double>::quiet_NaN());
    for (int m = 0; m < n_method; ++m) {
        KahanSum sum;
        int n = 0;
        for (int r = 0; r < n_rep; ++r) {
            const double v = table.cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)].standardized;
            if (std::isfinite(v)) {
                sum.add(v);
                ++n;
            }
        }
        if (n > 0) {
            table.mean_standardized[static_cast<std::size_t>(m)] =
                sum.value() / static_cast<double>(n);
        }
    }
}

ordered_json table_to_json(const ScoreTable& table) {
    ordered_json j;
    j["score_type"] = table.score_type;
    ordered_json raw = ordered_json::array();
    ordered_json standardized = ordered_json::array();
    for (const auto& row : table.cells) {
        ordered_json raw_row = ordered_json::array();
        ordered_json std_row = ordered_json::array();
        for (const auto& cell : row) {
            raw_row.push_back(cell.raw);
            std_row.push_back(cell.standardized);
        }
        raw.push_back(std::move(raw_row));
        standardized.push_back(std::move(std_row));
    }
    j["raw"] = std::move(raw);
    j["standardized"] = std::move(standardized);
    j["mean_standardized"] = table.mean_standardized;
    ordered_json failures = ordered_json::array();
    for (std::size_t r = 0; r < table.cells.size(); ++r) {
        for (std::size_t m = 0; m < table.cells[r].size(); ++m) {
            const auto& cell = table.cells[r][m];
            if (!cell.failed) continue;
            ordered_json f;
            f["repetition"] = r;
            f["method_index"] = m;
            f["error"] = cell.error;
            failures.push_back(std::move(f));
        }
    }
    j["failures"] = std::move(failures);
    return j;
}

ordered_json generator_to_json(const GeneratorSpec& g) {
    ordered_json j;
    j["kind"] = g.kind;
    j["n"] = g.n;
    j["n_per_pattern"] = g.n_per_pattern;
    j["rho"] = g.rho;
    j["prop"] = g.prop;
    j["n_always_observed"] = g.n_always_observed;
    j["input_csv"] = g.input_csv;
    j["seed"] = g.seed;
    return j;
}

// threads deliberately omitted: the report must not depend on it.
ordered_json config_to_json(const BenchConfig& c) {
    ordered_json j;
    j["generator"] = generator_to_json(c.generator);
    j["methods"] = c.methods;
    j["repetitions"] = c.repetitions;
    j["n_draws"] = c.n_draws;
    j["min_rows"] = c.min_rows;
    j["weighted"] = c.weighted;
    j["with_star"] = c.with_star;
    j["star_test_fraction"] = c.star_test_fraction;
    j["star_pattern_draws"] = c.star_pattern_draws;
    j["with_full_information"] = c.with_full_information;
    j["seed"] = c.seed;
    return j;
}

} // namespace

const ScoreTable& BenchmarkReport::table(const std::string& score_type) const {
    for (const auto& t : tables) {
        if (t.score_type == score_type) return t;
    }
    throw Error("report has no '" + score_type + "' table");
}

BenchmarkReport run_benchmark(const BenchConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    if (config.repetitions < 1) throw Error("benchmark: repetitions must be >= 1");
    if (config.methods.empty()) throw Error("benchmark: no methods given");
    {
        std::set<std::string> unique(config.methods.begin(), config.methods.end());
        if (unique.size() != config.methods.size()) {
            throw Error("benchmark: duplicate method specs");
        }
        for (const auto& spec : config.methods) make_imputer(spec); // fail fast
    }

    const int n_rep = config.repetitions;
    const int n_method = static_cast<int>(config.methods.size());
    const int threads = config.threads > 0 ? config.threads : default_thread_count();

    // Datasets are shared by all methods within a repetition.
    std::vector<GeneratedPair> data(static_cast<std::size_t>(n_rep));
    std::vector<std::uint64_t> rep_seeds(static_cast<std::size_t>(n_rep));
    for (int r = 0; r < n_rep; ++r) {
        rep_seeds[static_cast<std::size_t>(r)] =
            derive_seed(derive_seed(config.seed, "bench.rep"), static_cast<std::uint64_t>(r));
        GeneratorSpec gen = config.generator;
        gen.seed = derive_seed(rep_seeds[static_cast<std::size_t>(r)], "data");
        data[static_cast<std::size_t>(r)] = generate(gen);
    }

    std::vector<CellScores> cells(static_cast<std::size_t>(n_rep * n_method));
    parallel_for(cells.size(), threads, [&](std::size_t t) {
        const int r = static_cast<int>(t) / n_method;
        const int m = static_cast<int>(t) % n_method;
        const auto& pair = data[static_cast<std::size_t>(r)];
        CellScores& out = cells[t];
        const std::uint64_t method_seed =
            derive_seed(derive_seed(rep_seeds[static_cast<std::size_t>(r)], "bench.method"),
                        config.methods[static_cast<std::size_t>(m)]);
        try {
            auto method = make_imputer(config.methods[static_cast<std::size_t>(m)]);
            method->fit(pair.masked, derive_seed(method_seed, "fit"));
            const Dataset imputed = method->impute(1, derive_seed(method_seed, "impute"))[0];

            ScoreOptions opts;
            opts.n_draws = config.n_draws;
            opts.min_rows = config.min_rows;
            opts.weighted = config.weighted;
            opts.seed = derive_seed(method_seed, "escore");
            opts.threads = 1;
            out.escore.raw = energy_i_score(pair.masked, imputed, *method, opts).aggregate;

            if (config.with_star) {
                StarConfig star;
                star.test_fraction = config.star_test_fraction;
                star.pattern_draws = config.star_pattern_draws;
                star.n_draws = config.n_draws;
                star.min_rows = config.min_rows;
                star.seed = derive_seed(method_seed, "star");
                star.threads = 1;
                out.star.raw = energy_i_score_star(pair.masked, *method, star).aggregate;
            }
            if (config.with_full_information) {
                out.full_info.raw = full_information_score(pair.complete, imputed);
            }
        } catch (const std::exception& e) {
            out.escore.failed = out.star.failed = out.full_info.failed = true;
            out.escore.error = out.star.error = out.full_info.error = e.what();
        }
    });

    BenchmarkReport report;
    report.config = config;
    report.method_names = config.methods;

    const auto build_table = [&](const std::string& type, auto pick) {
        ScoreTable table;
        table.score_type = type;
        table.cells.assign(static_cast<std::size_t>(n_rep),
                           std::vector<MethodCell>(static_cast<std::size_t>(n_method)));
        for (int r = 0; r < n_rep; ++r) {
            for (int m = 0; m < n_method; ++m) {
                table.cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)] =
                    pick(cells[static_cast<std::size_t>(r * n_method + m)]);
            }
        }
        fill_standardized(table);
        report.tables.push_back(std::move(table));
    };
    build_table("energy-i-score", [](const CellScores& c) { return c.escore; });
    if (config.with_star) {
        build_table("energy-i-score-star", [](const CellScores& c) { return c.star; });
    }
    if (config.with_full_information) {
        build_table("full-information", [](const CellScores& c) { return c.full_info; });
    }

    // A method failing on more than half the repetitions leaves the ranking.
    const auto& escore_table = report.tables.front();
    for (int m = 0; m < n_method; ++m) {
        int failed = 0;
        for (int r = 0; r < n_rep; ++r) {
            failed += escore_table.cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)].failed ? 1 : 0;
        }
        if (2 * failed > n_rep) report.failed_methods.push_back(m);
    }
    for (int m = 0; m < n_method; ++m) {
        if (std::find(report.failed_methods.begin(), report.failed_methods.end(), m) ==
            report.failed_methods.end()) {
            report.ranking.push_back(m);
        }
    }
    std::sort(report.ranking.begin(), report.ranking.end(), [&](int a, int b) {
        const double va = escore_table.mean_standardized[static_cast<std::size_t>(a)];
        const double vb = escore_table.mean_standardized[static_cast<std::size_t>(b)];
        const double ka = std::isfinite(va) ? va : -std::numeric_limits<double>::infinity();
        const double kb = std::isfinite(vb) ? vb : -std::numeric_limits<double>::infinity();
        if (ka != kb) return ka > kb;
        return report.method_names[static_cast<std::size_t>(a)] <
               report.method_names[static_cast<std::size_t>(b)];
    });

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

SweepReport run_sweep_n(const BenchConfig& config, const std::vector<int>& n_list) {
    if (n_list.empty()) throw Error("sweep: empty N list");
    SweepReport sweep;
    sweep.config = config;
    sweep.method_names = config.methods;

    int reference_n = n_list.front();
    for (int n : n_list) reference_n = std::max(reference_n, n);

    std::vector<std::vector<int>> tops; // [entry][rep]
    for (int n : n_list) {
        BenchConfig c = config;
        c.n_draws = n;
        const BenchmarkReport rep = run_benchmark(c);
        SweepEntry entry;
        entry.n_draws = n;
        const auto& table = rep.table("energy-i-score");
        entry.mean_standardized = table.mean_standardized;
        entry.ranking = rep.ranking;
        for (int r = 0; r < config.repetitions; ++r) {
            int best = -1;
            double best_v = -std::numeric_limits<double>::infinity();
            for (int m = 0; m < static_cast<int>(config.methods.size()); ++m) {
                const double v =
                    table.cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)].raw;
                if (std::isfinite(v) && v > best_v) {
                    best_v = v;
                    best = m;
                }
            }
            entry.top_method_per_repetition.push_back(best);
        }
        tops.push_back(entry.top_method_per_repetition);
        sweep.entries.push_back(std::move(entry));
    }

    const std::size_t ref_idx = static_cast<std::size_t>(
        std::find_if(sweep.entries.begin(), sweep.entries.end(),
                     [&](const SweepEntry& e) { return e.n_draws == reference_n; }) -
        sweep.entries.begin());
    for (std::size_t e = 0; e < sweep.entries.size(); ++e) {
        int agree = 0;
        for (int r = 0; r < config.repetitions; ++r) {
            if (tops[e][static_cast<std::size_t>(r)] ==
                tops[ref_idx][static_cast<std::size_t>(r)]) {
                ++agree;
            }
        }
        sweep.top_agreement_with_reference.push_back(static_cast<double>(agree) /
                                                     static_cast<double>(config.repetitions));
    }
    return sweep;
}

std::string benchmark_report_json(const BenchmarkReport& report) {
    ordered_json j;
    j["kind"] = "benchmark-report";
    j["format_version"] = kFormatVersion;
    j["config"] = config_to_json(report.config);
    j["methods"] = report.method_names;
    ordered_json tables = ordered_json::array();
    for (const auto& t : report.tables) tables.push_back(table_to_json(t));
    j["scores"] = std::move(tables);
    ordered_json ranking = ordered_json::array();
    const auto& escore_table = report.table("energy-i-score");
    for (std::size_t pos = 0; pos < report.ranking.size(); ++pos) {
        const int m = report.ranking[pos];
        ordered_json e;
        e["rank"] = pos + 1;
        e["method"] = report.method_names[static_cast<std::size_t>(m)];
        e["mean_standardized"] = escore_table.mean_standardized[static_cast<std::size_t>(m)];
        ranking.push_back(std::move(e));
    }
    j["ranking"] = std::move(ranking);
    ordered_json failed = ordered_json::array();
    for (int m : report.failed_methods) {
        failed.push_back(report.method_names[static_cast<std::size_t>(m)]);
    }
    j["failed_methods"] = std::move(failed);
    return j.dump(2) + "\n";
}

std::string benchmark_report_csv(const BenchmarkReport& report) {
    std::ostringstream out;
    out << "rank,method";
    for (const auto& t : report.tables) out << ",mean_standardized_" << t.score_type;
    out << ",n_failed\n";
    const auto& escore_table = report.table("energy-i-score");
    const int n_rep = static_cast<int>(escore_table.cells.size());
    const auto print_cell = [&](double v) {
        out << ',';
        if (std::isfinite(v)) out << format_double_csv(v);
    };
    for (std::size_t pos = 0; pos < report.ranking.size(); ++pos) {
        const int m = report.ranking[pos];
        out << (pos + 1) << ',' << report.method_names[static_cast<std::size_t>(m)];
        for (const auto& t : report.tables) {
            print_cell(t.mean_standardized[static_cast<std::size_t>(m)]);
        }
        int failed = 0;
        for (int r = 0; r < n_rep; ++r) {
            failed += escore_table.cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)].failed ? 1 : 0;
        }
        out << ',' << failed << '\n';
    }
    for (int m : report.failed_methods) {
        out << "failed," << report.method_names[static_cast<std::size_t>(m)];
        for (std::size_t t = 0; t < report.tables.size(); ++t) out << ',';
        int failed = 0;
        for (int r = 0; r < n_rep; ++r) {
            failed += escore_table.cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)].failed ? 1 : 0;
        }
        out << ',' << failed << '\n';
    }
    return out.str();
}

std::string benchmark_scores_csv(const BenchmarkReport& report) {
    std::ostringstream out;
    out << "score_type,repetition,method,raw,standardized\n";
    for (const auto& t : report.tables) {
        for (std::size_t r = 0; r < t.cells.size(); ++r) {
            for (std::size_t m = 0; m < t.cells[r].size(); ++m) {
                const auto& cell = t.cells[r][m];
                out << t.score_type << ',' << (r + 1) << ',' << report.method_names[m] << ',';
                if (std::isfinite(cell.raw)) out << format_double_csv(cell.raw);
                out << ',';
                if (std::isfinite(cell.standardized)) out << format_double_csv(cell.standardized);
                out << '\n';
            }
        }
    }
    return out.str();
}

std::string sweep_report_json(const SweepReport& report) {
    ordered_json j;
    j["kind"] = "sweep-n-report";
    j["format_version"] = kFormatVersion;
    j["config"] = config_to_json(report.config);
    j["methods"] = report.method_names;
    ordered_json entries = ordered_json::array();
    for (const auto& e : report.entries) {
        ordered_json je;
        je["n_draws"] = e.n_draws;
        je["mean_standardized"] = e.mean_standardized;
        ordered_json ranking = ordered_json::array();
        for (int m : e.ranking) ranking.push_back(report.method_names[static_cast<std::size_t>(m)]);
        je["ranking"] = std::move(ranking);
        ordered_json tops = ordered_json::array();
        for (int m : e.top_method_per_repetition) {
            if (m < 0) {
                tops.push_back(nullptr);
            } else {
                tops.push_back(report.method_names[static_cast<std::size_t>(m)]);
            }
        }
        je["top_method_per_repetition"] = std::move(tops);
        entries.push_back(std::move(je));
    }
    j["per_n"] = std::move(entries);
    j["top_agreement_with_reference"] = report.top_agreement_with_reference;
    return j.dump(2) + "\n";
}

std::string score_report_json(const ScoreReport& report,
                              const std::vector<std::string>& column_names) {
    ordered_json j;
    j["kind"] = "score-report";
    j["format_version"] = kFormatVersion;
    j["score_type"] = report.score_type;
    j["aggregate"] = report.aggregate;
    j["n_scored"] = report.n_scored;
    j["weighted"] = report.weighted;
    j["n_draws"] = report.n_draws;
    j["min_rows"] = report.min_rows;
    j["seed"] = report.seed;
    ordered_json vars = ordered_json::array();
    for (const auto& v : report.per_variable) {
        ordered_json jv;
        jv["column"] = column_names[static_cast<std::size_t>(v.column)];
        jv["index"] = v.column;
        jv["skipped"] = v.skipped;
        if (v.skipped) {
            jv["reason"] = v.skip_reason;
        } else {
            jv["score"] = v.score;
        }
        jv["weight"] = v.weight;
        jv["n_test"] = v.n_test;
        ordered_json comp = ordered_json::array();
        for (int c : v.companions) comp.push_back(column_names[static_cast<std::size_t>(c)]);
        jv["companions"] = std::move(comp);
        jv["fallback"] = v.fallback_used;
        vars.push_back(std::move(jv));
    }
    j["variables"] = std::move(vars);
    return j.dump(2) + "\n";
}

std::string generator_manifest_json(const GeneratorSpec& spec) {
    ordered_json j;
    j["kind"] = "generator-manifest";
    j["format_version"] = kFormatVersion;
    j["generator"] = generator_to_json(spec);
    j["files"] = {{"complete", "complete.csv"}, {"masked", "masked.csv"}, {"mask", "mask.csv"}};
    return j.dump(2) + "\n";
}

GeneratorSpec generator_spec_from_manifest(const std::string& json_text) {
    const auto j = ordered_json::parse(json_text);
    if (!j.contains("generator")) throw Error("manifest: no 'generator' object");
    const auto& g = j["generator"];
    GeneratorSpec spec;
    spec.kind = g.at("kind").get<std::string>();
    spec.n = g.at("n").get<int>();
    spec.n_per_pattern = g.at("n_per_pattern").get<int>();
    spec.rho = g.at("rho").get<double>();
    spec.prop = g.at("prop").get<double>();
    spec.n_always_observed = g.at("n_always_observed").get<int>();
    spec.input_csv = g.at("input_csv").get<std::string>();
    spec.seed = g.at("seed").get<std::uint64_t>();
    return spec;
}

} // namespace iscore

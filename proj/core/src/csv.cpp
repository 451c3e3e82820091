#include "iscore/csv.hpp"

#include "iscore/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace iscore {

namespace {

std::vector<std::string> split_record(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

void write_field(std::ostream& out, const std::string& s, char delim) {
    const bool needs_quote =
        s.find(delim) != std::string::npos || s.find('"') != std::string::npos ||
        s.find('\n') != std::string::npos;
    if (!needs_quote) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

} // namespace

bool is_missing_token(const std::string& field) {
    const std::string t = trim(field);
    if (t.empty()) return true;
    std::string lower(t);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower == "na" || lower == "nan";
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Dataset read_csv(std::istream& in, const CsvOptions& opts) {
    std::string line;
    if (!std::getline(in, line)) throw Error("csv: missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> names = split_record(line, opts.delimiter);
    for (auto& n : names) n = trim(n);
    const std::size_t d = names.size();
    if (d < 1) throw Error("csv: empty header");

    std::vector<std::vector<std::string>> raw; // row-major raw fields
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && raw.empty()) continue;
        auto fields = split_record(line, opts.delimiter);
        if (fields.size() == 1 && trim(fields[0]).empty()) continue; // trailing blank line
        if (fields.size() != d) {
            throw Error("csv: row " + std::to_string(raw.size() + 2) + " has " +
                        std::to_string(fields.size()) + " fields, expected " + std::to_string(d));
        }
        raw.push_back(std::move(fields));
    }
    if (raw.empty()) throw Error("no rows");
    const int n = static_cast<int>(raw.size());

    // Kind inference: categorical iff any observed field fails numeric
    // parsing, unless forced categorical by name.
    std::vector<ColumnKind> kinds(d);
    for (std::size_t j = 0; j < d; ++j) {
        bool forced = std::find(opts.force_categorical.begin(), opts.force_categorical.end(),
                                names[j]) != opts.force_categorical.end();
        bool categorical = forced;
        if (!categorical) {
            for (int i = 0; i < n && !categorical; ++i) {
                const std::string f = trim(raw[static_cast<std::size_t>(i)][j]);
                if (is_missing_token(f)) continue;
                double v;
                if (!parse_number(f, v)) categorical = true;
            }
        }
        if (categorical) {
            std::vector<std::string> levels;
            for (int i = 0; i < n; ++i) {
                const std::string f = trim(raw[static_cast<std::size_t>(i)][j]);
                if (!is_missing_token(f)) levels.push_back(f);
            }
            std::sort(levels.begin(), levels.end());
            levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
            if (levels.empty()) {
                throw Error("csv: column '" + names[j] + "' has no observed values");
            }
            kinds[j] = ColumnKind::categorical(std::move(levels));
        }
    }

    Dataset out(names, kinds, n);
    for (int i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const std::string f = trim(raw[static_cast<std::size_t>(i)][j]);
            if (is_missing_token(f)) continue;
            if (kinds[j].is_categorical()) {
                const auto idx = kinds[j].level_index(f);
                if (!idx) throw Error("csv: unseen label '" + f + "' in column '" + names[j] + "'");
                out.set(i, static_cast<int>(j), static_cast<double>(*idx));
            } else {
                double v;
                if (!parse_number(f, v)) {
                    throw Error("csv: unparseable number '" + f + "' in column '" + names[j] + "'");
                }
                if (!std::isfinite(v)) {
                    throw Error("csv: non-finite value in column '" + names[j] + "'");
                }
                out.set(i, static_cast<int>(j), v);
            }
        }
    }
    return out;
}

Dataset read_csv_file(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_csv(in, opts);
}

void write_csv(const Dataset& data, std::ostream& out, char delimiter) {
    for (int j = 0; j < data.n_cols(); ++j) {
        if (j > 0) out << delimiter;
        write_field(out, data.name(j), delimiter);
    }
    out << '\n';
    for (int i = 0; i < data.n_rows(); ++i) {
        for (int j = 0; j < data.n_cols(); ++j) {
            if (j > 0) out << delimiter;
            if (data.is_missing(i, j)) {
                out << "NA";
            } else if (data.kind(j).is_categorical()) {
                write_field(out, data.label(i, j), delimiter);
            } else {
                out << format_double(data.get(i, j));
            }
        }
        out << '\n';
    }
}

void write_csv_file(const Dataset& data, const std::string& path, char delimiter) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_csv(data, out, delimiter);
}

void write_mask_csv(const Dataset& data, std::ostream& out, char delimiter) {
    for (int j = 0; j < data.n_cols(); ++j) {
        if (j > 0) out << delimiter;
        write_field(out, data.name(j), delimiter);
    }
    out << '\n';
    for (int i = 0; i < data.n_rows(); ++i) {
        for (int j = 0; j < data.n_cols(); ++j) {
            if (j > 0) out << delimiter;
            out << (data.is_missing(i, j) ? '1' : '0');
        }
        out << '\n';
    }
}

void write_mask_csv_file(const Dataset& data, const std::string& path, char delimiter) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_mask_csv(data, out, delimiter);
}

} // namespace iscore

#pragma once

#include "iscore/dataset.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace iscore {

// CSV conventions: header row required; empty fields, "NA" and "NaN"
// (case-insensitive) read as missing; missing cells write back as "NA".
// Numbers print in shortest round-trip form, so write/read is lossless.
struct CsvOptions {
    char delimiter = ',';
    // Column names forced to categorical regardless of content.
    std::vector<std::string> force_categorical;
};

Dataset read_csv(std::istream& in, const CsvOptions& opts = {});
Dataset read_csv_file(const std::string& path, const CsvOptions& opts = {});

void write_csv(const Dataset& data, std::ostream& out, char delimiter = ',');
void write_csv_file(const Dataset& data, const std::string& path, char delimiter = ',');

// Companion 0/1 mask with the same header (1 = missing).
void write_mask_csv(const Dataset& data, std::ostream& out, char delimiter = ',');
void write_mask_csv_file(const Dataset& data, const std::string& path, char delimiter = ',');

bool is_missing_token(const std::string& field);
std::string format_double(double v);

} // namespace iscore

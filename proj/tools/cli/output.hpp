// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltdr/timeseries.hpp"

namespace ltdr::cli {

/// Every number leaving the tool goes through this: 10 significant digits.
std::string format_number(double x);

/// JSON value holding x rounded to 10 significant digits; null when not finite.
nlohmann::json json_number(double x);

std::string sha256_hex(const std::string& bytes);

/// Writes bytes to path (creating parent directories) and returns their digest.
std::string write_file(const std::filesystem::path& path, const std::string& bytes);

std::string json_text(const nlohmann::json& j);

struct CsvColumn {
    std::string name;
    std::vector<double> values;
};

/// Numeric CSV; `labels` (when non-empty) becomes the first column.
std::string csv_text(const std::string& label_name, const std::vector<std::string>& labels,
                     const std::vector<CsvColumn>& columns);

std::string read_file(const std::filesystem::path& path);

}  // namespace ltdr::cli

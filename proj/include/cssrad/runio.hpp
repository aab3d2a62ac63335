// CSV/JSON output helpers shared by the drivers.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cssrad/field.hpp"

namespace cssrad {

using ordered_json = nlohmann::ordered_json;

// 17 significant digits: round-trip exact and reproducible.
std::string fmt_float(double v);

struct CsvColumn {
    std::string header;
    std::vector<double> values;
};

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns);

// Snapshot CSV with columns r, re, im.
void write_field_csv(const std::filesystem::path& path, const RadialField& f);

void write_json(const std::filesystem::path& path, const ordered_json& j);

// Reads a two-column CSV (r, value); a single header line is allowed.
void read_profile_csv(const std::filesystem::path& path, std::vector<double>& r,
                      std::vector<double>& value);

} // namespace cssrad

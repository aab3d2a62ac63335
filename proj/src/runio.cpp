#include "cssrad/runio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cssrad {

std::string fmt_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    for (size_t c = 0; c < columns.size(); ++c)
        out << (c ? "," : "") << columns[c].header;
    out << "\n";
    const size_t rows = columns.empty() ? 0 : columns[0].values.size();
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << fmt_float(columns[c].values[r]);
        out << "\n";
    }
}

void write_field_csv(const std::filesystem::path& path, const RadialField& f) {
    std::vector<CsvColumn> cols(3);
    cols[0].header = "r";
    cols[1].header = "re";
    cols[2].header = "im";
    for (int i = 0; i < f.size(); ++i) {
        cols[0].values.push_back(f.grid->node(i));
        cols[1].values.push_back(f.values[i].real());
        cols[2].values.push_back(f.values[i].imag());
    }
    write_csv(path, cols);
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void read_profile_csv(const std::filesystem::path& path, std::vector<double>& r,
                      std::vector<double>& value) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    r.clear();
    value.clear();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected two comma-separated columns");
        }
        try {
            r.push_back(std::stod(a));
            value.push_back(std::stod(b));
        } catch (...) {
            if (lineno == 1) // header
                continue;
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": cannot parse numbers");
        }
    }
    if (r.empty())
        throw std::runtime_error(path.string() + ": no data rows");
}

} // namespace cssrad

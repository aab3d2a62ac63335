#include "cssrad/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cssrad {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

KeyValueDoc KeyValueDoc::parse_text(const std::string& text, std::vector<std::string>& errors) {
    KeyValueDoc doc;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            errors.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (value.empty()) {
            errors.push_back("line " + std::to_string(lineno) + ": empty value for key '" +
                             key + "'");
            continue;
        }
        if (doc.entries_.count(key)) {
            errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key +
                             "' (first set on line " +
                             std::to_string(doc.entries_[key].second) + ")");
            continue;
        }
        doc.entries_[key] = {value, lineno};
    }
    return doc;
}

KeyValueDoc KeyValueDoc::parse_file(const std::string& path, std::vector<std::string>& errors) {
    std::ifstream in(path);
    if (!in) {
        errors.push_back("cannot open config file '" + path + "'");
        return KeyValueDoc{};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), errors);
}

ConfigReader::ConfigReader(const KeyValueDoc& doc, std::vector<std::string>& errors)
    : doc_(doc), errors_(errors) {}

std::optional<std::string> ConfigReader::raw(const std::string& key) {
    consumed_.push_back(key);
    auto it = doc_.entries().find(key);
    if (it == doc_.entries().end())
        return std::nullopt;
    return it->second.first;
}

int ConfigReader::get_int(const std::string& key, int def, int min, int max) {
    auto v = raw(key);
    if (!v)
        return def;
    try {
        size_t pos = 0;
        const long parsed = std::stol(*v, &pos);
        if (pos != v->size())
            throw std::invalid_argument("");
        if (parsed < min || parsed > max) {
            errors_.push_back("key '" + key + "': value " + *v + " outside allowed range [" +
                              std::to_string(min) + ", " + std::to_string(max) + "]");
            return def;
        }
        return static_cast<int>(parsed);
    } catch (...) {
        errors_.push_back("key '" + key + "': cannot parse integer from '" + *v + "'");
        return def;
    }
}

double ConfigReader::get_double(const std::string& key, double def,
                                const std::function<bool(double)>& valid,
                                const std::string& range_msg) {
    auto v = raw(key);
    if (!v)
        return def;
    try {
        size_t pos = 0;
        const double parsed = std::stod(*v, &pos);
        if (pos != v->size() || !std::isfinite(parsed))
            throw std::invalid_argument("");
        if (valid && !valid(parsed)) {
            errors_.push_back("key '" + key + "': " + range_msg);
            return def;
        }
        return parsed;
    } catch (...) {
        errors_.push_back("key '" + key + "': cannot parse number from '" + *v + "'");
        return def;
    }
}

std::uint64_t ConfigReader::get_seed(const std::string& key, std::uint64_t def) {
    auto v = raw(key);
    if (!v)
        return def;
    try {
        size_t pos = 0;
        const unsigned long long parsed = std::stoull(*v, &pos);
        if (pos != v->size())
            throw std::invalid_argument("");
        return parsed;
    } catch (...) {
        errors_.push_back("key '" + key + "': cannot parse seed from '" + *v + "'");
        return def;
    }
}

std::string ConfigReader::get_enum(const std::string& key, const std::string& def,
                                   const std::vector<std::string>& allowed) {
    auto v = raw(key);
    if (!v)
        return def;
    if (std::find(allowed.begin(), allowed.end(), *v) == allowed.end()) {
        std::string msg = "key '" + key + "': '" + *v + "' is not one of {";
        for (size_t i = 0; i < allowed.size(); ++i)
            msg += (i ? ", " : "") + allowed[i];
        msg += "}";
        errors_.push_back(msg);
        return def;
    }
    return *v;
}

bool ConfigReader::get_bool(const std::string& key, bool def) {
    auto v = raw(key);
    if (!v)
        return def;
    if (*v == "true" || *v == "1")
        return true;
    if (*v == "false" || *v == "0")
        return false;
    errors_.push_back("key '" + key + "': expected true/false, got '" + *v + "'");
    return def;
}

std::string ConfigReader::get_string(const std::string& key, const std::string& def) {
    auto v = raw(key);
    return v ? *v : def;
}

void ConfigReader::finish() {
    for (const auto& [key, val] : doc_.entries()) {
        if (std::find(consumed_.begin(), consumed_.end(), key) == consumed_.end())
            errors_.push_back("unknown key '" + key + "' (line " +
                              std::to_string(val.second) + ")");
    }
}

InitialData make_preset(const std::string& name, const std::map<std::string, double>& params,
                        std::vector<std::string>& errors) {
    InitialData d;
    d.name = name;
    auto param = [&](const std::string& p, double def) {
        auto it = params.find(p);
        const double v = (it != params.end()) ? it->second : def;
        d.params[p] = v;
        return v;
    };
    if (name == "gaussian") {
        const double width = param("width", 1.0);
        const double amp = param("amplitude", 1.0);
        if (!(width > 0.0))
            errors.push_back("preset gaussian: width must be positive");
        d.profile = [width, amp](double r) {
            return cplx(amp * std::exp(-r * r / (2.0 * width * width)), 0.0);
        };
    } else if (name == "ring") {
        const double center = param("center", 2.0);
        const double width = param("width", 0.5);
        const double amp = param("amplitude", 1.0);
        if (!(width > 0.0))
            errors.push_back("preset ring: width must be positive");
        if (!(center >= 0.0))
            errors.push_back("preset ring: center must be nonnegative");
        d.profile = [center, width, amp](double r) {
            const double dr = r - center;
            return cplx(amp * std::exp(-dr * dr / (2.0 * width * width)), 0.0);
        };
    } else if (name == "indicator") {
        const double radius = param("radius", 1.0);
        if (!(radius > 0.0))
            errors.push_back("preset indicator: radius must be positive");
        d.profile = [radius](double r) { return cplx(r <= radius ? 1.0 : 0.0, 0.0); };
    } else {
        errors.push_back("unknown preset '" + name + "'");
        d.profile = [](double) { return cplx(0.0); };
    }
    return d;
}

} // namespace cssrad

#include "bornlab/cli_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bornlab::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: malformed section at line " +
                                         std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw std::runtime_error("config: empty section name at line " +
                                         std::to_string(line_no));
            cfg.sections_[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value at line " +
                                     std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config: empty key at line " + std::to_string(line_no));
        if (section.empty())
            throw std::runtime_error("config: key outside any section at line " +
                                     std::to_string(line_no));
        if (!cfg.sections_[section].emplace(key, Entry{value}).second)
            throw std::runtime_error("config: duplicate key '" + section + "." + key + "'");
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return false;
    return s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end())
        throw std::runtime_error("config: missing section [" + section + "]");
    auto k = s->second.find(key);
    if (k == s->second.end())
        throw std::runtime_error("config: missing key '" + section + "." + key + "'");
    k->second.consumed = true;
    return k->second.value;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    if (!has(section, key)) return fallback;
    return get(section, key);
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error("config: key '" + section + "." + key +
                                 "' is not a number: " + v);
    }
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
    if (!has(section, key)) return fallback;
    return get_double(section, key);
}

long Config::get_int(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error("config: key '" + section + "." + key +
                                 "' is not an integer: " + v);
    }
}

long Config::get_int_or(const std::string& section, const std::string& key,
                        long fallback) const {
    if (!has(section, key)) return fallback;
    return get_int(section, key);
}

std::vector<long> Config::get_int_list(const std::string& section,
                                       const std::string& key) const {
    const std::string v = get(section, key);
    std::vector<long> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stol(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::runtime_error("config: key '" + section + "." + key +
                                     "' is not an integer list: " + v);
        }
    }
    if (out.empty())
        throw std::runtime_error("config: key '" + section + "." + key + "' is empty");
    return out;
}

std::vector<int> Config::get_int_list_or(const std::string& section, const std::string& key,
                                         const std::vector<int>& fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<int> out;
    for (const long v : get_int_list(section, key)) out.push_back(static_cast<int>(v));
    return out;
}

void Config::check_all_consumed() const {
    for (const auto& [sec, entries] : sections_)
        for (const auto& [key, entry] : entries)
            if (!entry.consumed)
                throw std::runtime_error("config: unknown key '" + sec + "." + key +
                                         "' for this experiment kind");
}

std::string Config::canonical_text() const {
    std::string out;
    for (const auto& [sec, entries] : sections_) {
        out += "[" + sec + "]\n";
        for (const auto& [key, entry] : entries)
            out += key + " = " + entry.value + "\n";
    }
    return out;
}

std::uint64_t Config::content_hash() const {
    // FNV-1a over the canonical text
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : canonical_text()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace bornlab::cli

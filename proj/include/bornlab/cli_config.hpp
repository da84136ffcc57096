#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bornlab::cli {

// Declarative key-value experiment description: named sections of key = value
// lines, '#' comments, one experiment per file.
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    long get_int(const std::string& section, const std::string& key) const;
    long get_int_or(const std::string& section, const std::string& key, long fallback) const;
    std::vector<long> get_int_list(const std::string& section, const std::string& key) const;
    std::vector<int> get_int_list_or(const std::string& section, const std::string& key,
                                     const std::vector<int>& fallback) const;

    // every key must be consumed by one of the calls above; unknown keys are
    // rejected after the experiment has pulled what it needs
    void check_all_consumed() const;

    std::string canonical_text() const;  // sorted echo used for hashing
    std::uint64_t content_hash() const;

  private:
    struct Entry {
        std::string value;
        mutable bool consumed = false;
    };
    std::map<std::string, std::map<std::string, Entry>> sections_;
};

}  // namespace bornlab::cli

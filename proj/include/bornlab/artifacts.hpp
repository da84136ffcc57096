#pragma once

#include <string>
#include <vector>

namespace bornlab::cli {

// fixed-format double rendering so reruns produce byte-identical artifacts
std::string format_double(double v);

class CsvWriter {
  public:
    CsvWriter(std::string path, std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    void close();  // writes the file; called by the destructor as well
    ~CsvWriter();

    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::string buffer_;
    std::size_t columns_;
    bool closed_ = false;
};

// minimal polyline plot; one series per (xs, ys) pair
void write_svg_lines(const std::string& path,
                     const std::vector<std::vector<double>>& xs,
                     const std::vector<std::vector<double>>& ys,
                     const std::string& title);

}  // namespace bornlab::cli

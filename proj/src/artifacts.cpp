#include "bornlab/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bornlab::cli {

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> header)
    : path_(std::move(path)), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += header[i];
    }
    buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw std::logic_error("CsvWriter: wrong number of cells for " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

void CsvWriter::close() {
    if (closed_) return;
    closed_ = true;
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw std::runtime_error("CsvWriter: cannot write " + path_);
    out << buffer_;
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
    }
}

void write_svg_lines(const std::string& path,
                     const std::vector<std::vector<double>>& xs,
                     const std::vector<std::vector<double>>& ys,
                     const std::string& title) {
    if (xs.size() != ys.size()) throw std::logic_error("write_svg_lines: series mismatch");
    const double W = 640, H = 420, L = 60, B = 40, T = 30, R = 20;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t s = 0; s < xs.size(); ++s)
        for (std::size_t i = 0; i < xs[s].size(); ++i) {
            xmin = std::min(xmin, xs[s][i]);
            xmax = std::max(xmax, xs[s][i]);
            ymin = std::min(ymin, ys[s][i]);
            ymax = std::max(ymax, ys[s][i]);
        }
    if (xmin > xmax) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
           "viewBox=\"0 0 640 420\">\n";
    svg += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + title +
           "</text>\n";
    // axes
    svg += "<line x1=\"" + format_double(L) + "\" y1=\"" + format_double(H - B) + "\" x2=\"" +
           format_double(W - R) + "\" y2=\"" + format_double(H - B) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + format_double(L) + "\" y1=\"" + format_double(T) + "\" x2=\"" +
           format_double(L) + "\" y2=\"" + format_double(H - B) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_double(L) + "\" y=\"" + format_double(H - B + 16) +
           "\" font-size=\"10\">" + format_double(xmin) + "</text>\n";
    svg += "<text x=\"" + format_double(W - R) + "\" y=\"" + format_double(H - B + 16) +
           "\" text-anchor=\"end\" font-size=\"10\">" + format_double(xmax) + "</text>\n";
    svg += "<text x=\"" + format_double(L - 4) + "\" y=\"" + format_double(H - B) +
           "\" text-anchor=\"end\" font-size=\"10\">" + format_double(ymin) + "</text>\n";
    svg += "<text x=\"" + format_double(L - 4) + "\" y=\"" + format_double(T + 4) +
           "\" text-anchor=\"end\" font-size=\"10\">" + format_double(ymax) + "</text>\n";
    for (std::size_t s = 0; s < xs.size(); ++s) {
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += colors[s % 8];
        svg += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs[s].size(); ++i) {
            svg += format_double(px(xs[s][i]));
            svg += ',';
            svg += format_double(py(ys[s][i]));
            svg += ' ';
        }
        svg += "\"/>\n";
    }
    svg += "</svg>\n";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_svg_lines: cannot write " + path);
    out << svg;
}

}  // namespace bornlab::cli

#pragma once

// Tab-separated data tables with a one-line header and deterministic float
// formatting (shortest representation that round-trips, via %.17g).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "glpp/sample_set.hpp"
#include "glpp/stats.hpp"

namespace glpp {

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class TableWriter {
public:
    explicit TableWriter(const std::filesystem::path& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
        path_ = path.string();
    }

    void header(const std::vector<std::string>& columns) { line(columns); }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_double(v));
        line(cells);
    }

    void close() {
        out_.close();
        if (!out_) throw std::runtime_error("write failed: " + path_);
    }

private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << '\t';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
    std::string path_;
};

// Sorted sample values with the empirical CDF, plus an optional aligned
// column of reference CDF values.
inline void write_cdf_table(const std::filesystem::path& path, const SampleSet& set,
                            const std::string& ref_name = {}, const std::vector<double>& ref = {}) {
    TableWriter w(path);
    std::vector<std::string> cols = {"value", "ecdf"};
    if (!ref_name.empty()) cols.push_back(ref_name);
    w.header(cols);
    const auto& x = set.sorted();
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> cells = {x[i], static_cast<double>(i + 1) / n};
        if (!ref.empty()) cells.push_back(ref[i]);
        w.row(cells);
    }
    w.close();
}

inline void write_histogram_table(const std::filesystem::path& path, const Histogram& hist) {
    TableWriter w(path);
    w.header({"bin_center", "count", "density"});
    for (const auto& bin : hist.bins)
        w.row({bin.center, static_cast<double>(bin.count), bin.density});
    w.close();
}

} // namespace glpp

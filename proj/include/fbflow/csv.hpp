#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbflow {

/// CSV writer with fixed shortest-round-trip double formatting (%.17g), so
/// identical runs produce byte-identical files.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : os_(path) {
        if (!os_) throw std::runtime_error("csv: cannot open " + path);
    }

    void comment(const std::string& text) { os_ << "# " << text << "\n"; }

    void header(const std::vector<std::string>& cols) { row_strings(cols); }

    void row_strings(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i)
            os_ << (i ? "," : "") << cells[i];
        os_ << "\n";
    }

    static std::string fmt(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    static std::string fmt(int v) { return std::to_string(v); }

    template <typename... Ts>
    void row(Ts... vals) {
        row_strings({to_cell(vals)...});
    }

  private:
    static std::string to_cell(double v) { return fmt(v); }
    static std::string to_cell(int v) { return std::to_string(v); }
    static std::string to_cell(const std::string& s) { return s; }
    static std::string to_cell(const char* s) { return s; }
    std::ofstream os_;
};

}  // namespace fbflow

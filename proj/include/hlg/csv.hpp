#pragma once

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace hlg {

// Shortest round-trip decimal form via to_chars: locale-free and identical
// across runs, which the byte-determinism contract relies on.
inline std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class CsvWriter {
  public:
    void header(const std::vector<std::string>& names) { raw_row(names); }

    CsvWriter& cell(double v) {
        cells_.push_back(format_double(v));
        return *this;
    }
    CsvWriter& cell(long v) {
        cells_.push_back(std::to_string(v));
        return *this;
    }
    CsvWriter& cell(int v) {
        cells_.push_back(std::to_string(v));
        return *this;
    }
    CsvWriter& cell(bool v) {
        cells_.push_back(v ? "1" : "0");
        return *this;
    }
    CsvWriter& cell(const std::string& v) {
        cells_.push_back(v);
        return *this;
    }
    void end_row() {
        raw_row(cells_);
        cells_.clear();
    }

    const std::string& text() const { return out_; }

  private:
    void raw_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ += ',';
            out_ += cells[i];
        }
        out_ += '\n';
    }
    std::string out_;
    std::vector<std::string> cells_;
};

} // namespace hlg

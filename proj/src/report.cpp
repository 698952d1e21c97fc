#include "tbundle/report.hpp"

#include <cmath>
#include <cstdio>

namespace tbundle {

Json json_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

void write_text_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path);
    out << bytes;
    if (!out) throw io_error("write failed for " + path);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size())
        throw param_error("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(header_.size()));
    rows_.push_back(cells);
}

std::string CsvWriter::num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string CsvWriter::str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        out += header_[i];
    }
    out += '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += r[i];
        }
        out += '\n';
    }
    return out;
}

void CsvWriter::save(const std::string& path) const { write_text_file(path, str()); }

}  // namespace tbundle

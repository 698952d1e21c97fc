#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbundle/error.hpp"

namespace tbundle {

/// Insertion-ordered JSON keeps the report schema byte-stable.
using Json = nlohmann::ordered_json;

/// Finite doubles serialize as numbers; infinities and NaN as tagged strings
/// so reports stay valid JSON with no silent nulls.
Json json_number(double v);

void write_text_file(const std::string& path, const std::string& bytes);

/// Minimal CSV emitter: header once, then rows; numbers at %.12g.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(const std::vector<std::string>& cells);
    static std::string num(double v);
    static std::string num(std::int64_t v) { return std::to_string(v); }

    void save(const std::string& path) const;
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace tbundle

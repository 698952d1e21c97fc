#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace tbundle {

/// Error carrying a machine-readable kind plus string details, so the CLI
/// can emit structured JSON error objects and pick exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

    Error& with(const std::string& key, std::string value) {
        details_[key] = std::move(value);
        return *this;
    }
    const std::map<std::string, std::string>& details() const { return details_; }

private:
    std::string kind_;
    std::map<std::string, std::string> details_;
};

inline Error parse_error(const std::string& msg, long line = -1) {
    Error e("parse", msg);
    if (line >= 0) e.with("line", std::to_string(line));
    return e;
}

inline Error param_error(const std::string& msg) { return Error("param", msg); }

inline Error graph_error(const std::string& msg) { return Error("graph", msg); }

inline Error truncation_error(const std::string& msg, long required_radius) {
    Error e("truncation", msg);
    e.with("required_radius", std::to_string(required_radius));
    return e;
}

inline Error dependency_error(const std::string& msg) { return Error("dependency", msg); }

inline Error io_error(const std::string& msg) { return Error("io", msg); }

}  // namespace tbundle

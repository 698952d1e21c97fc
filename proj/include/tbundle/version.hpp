#pragma once

namespace tbundle {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "tbundle-report/1";

}  // namespace tbundle

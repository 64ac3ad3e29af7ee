#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "capquad/cubature.hpp"
#include "capquad/point_sets.hpp"
#include "capquad/verifier.hpp"

namespace capquad::io {

inline constexpr const char* kRuleVersion = "capquad-rule/1";
inline constexpr const char* kReportVersion = "capquad-report/1";

/// Malformed or inconsistent input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sorted keys, shortest round-trip floats, two-space indent, trailing newline.
[[nodiscard]] std::string dump_canonical(const nlohmann::json& j);

/// Shortest decimal string that reads back to the same double.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Rule-file layout without weights, residual and solver fields.
[[nodiscard]] nlohmann::json to_json(const NodeSet& nodes);
[[nodiscard]] nlohmann::json to_json(const CubatureRule& rule);
[[nodiscard]] nlohmann::json to_json(const VerificationReport& report);

/// Accepts both point files and rule files (weights are ignored).
[[nodiscard]] NodeSet node_set_from_json(const nlohmann::json& j);
/// Requires weights of the same length as the nodes, all positive.
[[nodiscard]] CubatureRule rule_from_json(const nlohmann::json& j);
[[nodiscard]] VerificationReport report_from_json(const nlohmann::json& j);

/// One row per cell: parameters, then min/max/mean/count per statistic,
/// then scalar values. Columns appear in order of first use.
[[nodiscard]] std::string report_to_csv(const VerificationReport& report);

}  // namespace capquad::io

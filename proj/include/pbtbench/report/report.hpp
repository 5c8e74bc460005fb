#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pbtbench/analysis/analysis.hpp"

namespace pbtbench::report {

class EmptyRows : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct NamedColor {
  std::string_view name;
  std::string_view hex;
};

/// Fixed palette; strategies take colors in this order unless told otherwise.
inline constexpr NamedColor kPalette[] = {
    {"blue", "#1f5fbf"},  {"purple", "#6a3d9a"}, {"pink", "#d6409f"}, {"black", "#222222"},
    {"orange", "#e8750c"}, {"red", "#c62828"},    {"green", "#2e7d32"}, {"gray", "#757575"},
};

/// Throws std::invalid_argument for names outside the palette.
std::string_view color_hex(std::string_view name);

struct BucketRow {
  std::string label;
  std::vector<std::size_t> counts;  // one per bucket, Unsolved last
  std::string color = "blue";
  bool hatched = false;
};

/// Opacity of bucket `index` out of `count`: darkest first, Unsolved lightest.
double bucket_opacity(std::size_t index, std::size_t count);

/// Standalone SVG, one stacked bar per row. Each nonzero segment is a
/// rect with class "segment" carrying its count as text; hatched rows get a
/// cross-hatch overlay rect of class "hatch" per segment.
std::string bucket_chart_svg(const std::vector<BucketRow>& rows, const analysis::BucketScheme& scheme,
                             std::string_view title);

/// One row per (workload, strategy) from summary.json, colored by strategy
/// in palette order. Rows are labelled "workload strategy".
std::vector<BucketRow> rows_from_summary(const nlohmann::json& summary);
analysis::BucketScheme scheme_from_summary(const nlohmann::json& summary);

struct SummaryRow {
  std::string workload;
  std::string task;
  std::string strategy;
  std::string status;
  std::optional<double> mean_time;
  std::optional<double> mean_tests;
  std::optional<double> mean_discards;
  std::string bucket;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

inline constexpr std::string_view kTableHeader[] = {"workload", "task",          "strategy", "status",
                                                    "mean_time_s", "mean_tests", "mean_discards", "bucket"};

std::vector<SummaryRow> summary_rows(const analysis::Analysis& a);
std::vector<SummaryRow> summary_rows(const nlohmann::json& summary);

/// Rows sorted by (workload, task, strategy); numbers at full precision,
/// missing means left empty.
std::string export_csv(std::vector<SummaryRow> rows);
/// Aligned columns, numbers to 3 significant digits, "-" for missing.
std::string export_text(std::vector<SummaryRow> rows);

/// Reads export_csv output back. Throws std::invalid_argument on a bad header
/// or row.
std::vector<SummaryRow> parse_csv(std::string_view csv);

}  // namespace pbtbench::report

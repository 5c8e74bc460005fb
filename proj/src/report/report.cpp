#include "pbtbench/report/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace pbtbench::report {

using nlohmann::json;

std::string_view color_hex(std::string_view name) {
  for (const auto& c : kPalette) {
    if (c.name == name) return c.hex;
  }
  throw std::invalid_argument("unknown palette color: " + std::string(name));
}

double bucket_opacity(std::size_t index, std::size_t count) {
  if (count <= 1) return 1.0;
  if (index + 1 >= count) return 0.12;
  // Time buckets fade from 1.0 towards 0.35; Unsolved sits well below.
  const double step = count > 2 ? 0.65 / static_cast<double>(count - 2) : 0;
  return 1.0 - step * static_cast<double>(index);
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string full(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? end : buf);
}

std::string sig3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

constexpr double kLabelWidth = 180;
constexpr double kBarWidth = 600;
constexpr double kBarHeight = 26;
constexpr double kGap = 10;
constexpr double kTop = 40;

}  // namespace

std::string bucket_chart_svg(const std::vector<BucketRow>& rows, const analysis::BucketScheme& scheme,
                             std::string_view title) {
  if (rows.empty()) throw EmptyRows("bucket chart needs at least one row");
  scheme.validate();
  const std::size_t buckets = scheme.bucket_count();
  for (const auto& r : rows) {
    if (r.counts.size() != buckets) {
      throw std::invalid_argument("row '" + r.label + "' has " + std::to_string(r.counts.size()) +
                                  " counts for " + std::to_string(buckets) + " buckets");
    }
    if (std::accumulate(r.counts.begin(), r.counts.end(), std::size_t{0}) == 0) {
      throw EmptyRows("row '" + r.label + "' has no tasks");
    }
    color_hex(r.color);
  }

  const double legend_y = kTop + static_cast<double>(rows.size()) * (kBarHeight + kGap) + 10;
  const double width = kLabelWidth + kBarWidth + 20;
  const double height = legend_y + 40;

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
    << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<defs><pattern id=\"crosshatch\" patternUnits=\"userSpaceOnUse\" width=\"8\" height=\"8\">"
       "<path d=\"M0,0 L8,8 M8,0 L0,8\" stroke=\"#ffffff\" stroke-width=\"1.2\"/></pattern></defs>\n";
  o << "<text x=\"" << fmt(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
    << "</text>\n";

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const double y = kTop + static_cast<double>(r) * (kBarHeight + kGap);
    const double total = static_cast<double>(std::accumulate(row.counts.begin(), row.counts.end(), std::size_t{0}));
    const auto hex = color_hex(row.color);
    o << "<g class=\"row\" data-label=\"" << xml_escape(row.label) << "\">\n";
    o << "<text x=\"" << fmt(kLabelWidth - 8) << "\" y=\"" << fmt(y + kBarHeight / 2 + 4)
      << "\" text-anchor=\"end\">" << xml_escape(row.label) << "</text>\n";
    double x = kLabelWidth;
    for (std::size_t b = 0; b < buckets; ++b) {
      if (row.counts[b] == 0) continue;
      const double w = kBarWidth * static_cast<double>(row.counts[b]) / total;
      o << "<rect class=\"segment\" data-bucket=\"" << xml_escape(scheme.label(b)) << "\" x=\"" << fmt(x)
        << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(kBarHeight) << "\" fill=\"" << hex
        << "\" fill-opacity=\"" << fmt(bucket_opacity(b, buckets)) << "\" stroke=\"" << hex << "\"/>\n";
      if (row.hatched) {
        o << "<rect class=\"hatch\" x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
          << "\" height=\"" << fmt(kBarHeight) << "\" fill=\"url(#crosshatch)\"/>\n";
      }
      const bool light = bucket_opacity(b, buckets) < 0.5;
      o << "<text class=\"count\" x=\"" << fmt(x + w / 2) << "\" y=\"" << fmt(y + kBarHeight / 2 + 4)
        << "\" text-anchor=\"middle\" fill=\"" << (light ? "#000000" : "#ffffff") << "\">" << row.counts[b]
        << "</text>\n";
      x += w;
    }
    o << "</g>\n";
  }

  // Legend in neutral gray so the shades read independently of strategy color.
  const double swatch = kBarWidth / static_cast<double>(buckets);
  for (std::size_t b = 0; b < buckets; ++b) {
    const double x = kLabelWidth + static_cast<double>(b) * swatch;
    o << "<rect class=\"legend\" x=\"" << fmt(x) << "\" y=\"" << fmt(legend_y) << "\" width=\"14\" height=\"14\" fill=\""
      << color_hex("gray") << "\" fill-opacity=\"" << fmt(bucket_opacity(b, buckets)) << "\"/>\n";
    o << "<text x=\"" << fmt(x + 18) << "\" y=\"" << fmt(legend_y + 11) << "\">" << xml_escape(scheme.label(b))
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

analysis::BucketScheme scheme_from_summary(const json& summary) {
  analysis::BucketScheme s;
  s.thresholds = summary.at("scheme").at("thresholds").get<std::vector<double>>();
  s.validate();
  return s;
}

std::vector<BucketRow> rows_from_summary(const json& summary) {
  const auto scheme = scheme_from_summary(summary);
  std::map<std::string, std::string> colors;
  for (const auto& b : summary.at("buckets")) colors.emplace(b.at("strategy").get<std::string>(), "");
  std::size_t next = 0;
  for (auto& [strategy, color] : colors) color = kPalette[next++ % std::size(kPalette)].name;

  std::vector<BucketRow> rows;
  for (const auto& b : summary.at("buckets")) {
    BucketRow row;
    const auto strategy = b.at("strategy").get<std::string>();
    row.label = b.at("workload").get<std::string>() + " " + strategy;
    row.counts = b.at("counts").get<std::vector<std::size_t>>();
    if (row.counts.size() != scheme.bucket_count()) {
      throw std::invalid_argument("summary bucket counts do not match its scheme");
    }
    row.color = colors.at(strategy);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SummaryRow> summary_rows(const analysis::Analysis& a) {
  std::vector<SummaryRow> rows;
  for (const auto& s : a.summaries) {
    rows.push_back({s.task.workload, s.task.id(), s.strategy, std::string(analysis::to_string(s.status.status)),
                    s.mean_time, s.mean_tests, s.mean_discards, s.bucket});
  }
  return rows;
}

std::vector<SummaryRow> summary_rows(const json& summary) {
  auto opt = [](const json& j, const char* key) -> std::optional<double> {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<double>();
  };
  std::vector<SummaryRow> rows;
  for (const auto& t : summary.at("tasks")) {
    rows.push_back({t.at("workload").get<std::string>(), t.at("task").get<std::string>(),
                    t.at("strategy").get<std::string>(), t.at("status").get<std::string>(), opt(t, "mean_time_s"),
                    opt(t, "mean_tests"), opt(t, "mean_discards"), t.at("bucket").get<std::string>()});
  }
  return rows;
}

namespace {

void sort_rows(std::vector<SummaryRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const SummaryRow& x, const SummaryRow& y) {
    return std::tie(x.workload, x.task, x.strategy) < std::tie(y.workload, y.task, y.strategy);
  });
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> cells(const SummaryRow& r, std::string (*num)(double), const std::string& missing) {
  auto n = [&](const std::optional<double>& v) { return v ? num(*v) : missing; };
  return {r.workload, r.task, r.strategy, r.status, n(r.mean_time), n(r.mean_tests), n(r.mean_discards), r.bucket};
}

}  // namespace

std::string export_csv(std::vector<SummaryRow> rows) {
  sort_rows(rows);
  std::string out;
  for (std::size_t i = 0; i < std::size(kTableHeader); ++i) out += (i ? "," : "") + std::string(kTableHeader[i]);
  out += '\n';
  for (const auto& r : rows) {
    const auto c = cells(r, full, "");
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + csv_field(c[i]);
    out += '\n';
  }
  return out;
}

std::string export_text(std::vector<SummaryRow> rows) {
  sort_rows(rows);
  std::vector<std::vector<std::string>> table;
  table.emplace_back(std::begin(kTableHeader), std::end(kTableHeader));
  for (const auto& r : rows) table.push_back(cells(r, sig3, "-"));

  // Widths in code points so "≤" does not skew the columns.
  auto display = [](const std::string& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
  };
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& row : table) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], display(row[i]));
  }
  std::string out;
  for (const auto& row : table) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += row[i];
      if (i + 1 < row.size()) line.append(width[i] - display(row[i]), ' ');
    }
    out += line + '\n';
  }
  return out;
}

namespace {

// Splits the next record off `csv`; quoted fields may span lines.
std::vector<std::string> next_record(std::string_view& csv, std::size_t& lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  const std::size_t first = ++lineno;
  std::size_t i = 0;
  for (; i < csv.size(); ++i) {
    const char c = csv[i];
    if (quoted) {
      if (c == '"' && i + 1 < csv.size() && csv[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        if (c == '\n') ++lineno;
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw std::invalid_argument("line " + std::to_string(first) + ": unterminated quote");
  csv = i < csv.size() ? csv.substr(i + 1) : std::string_view{};
  out.push_back(std::move(cur));
  return out;
}

std::optional<double> parse_number(const std::string& s, std::size_t lineno) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw std::invalid_argument("line " + std::to_string(lineno) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<SummaryRow> parse_csv(std::string_view csv) {
  if (csv.empty()) throw std::invalid_argument("empty CSV");
  std::vector<SummaryRow> rows;
  std::size_t lineno = 0;
  const auto header = next_record(csv, lineno);
  if (!std::equal(header.begin(), header.end(), std::begin(kTableHeader), std::end(kTableHeader))) {
    throw std::invalid_argument("unexpected CSV header");
  }
  while (!csv.empty()) {
    const std::size_t start = lineno + 1;
    const auto c = next_record(csv, lineno);
    if (c.size() == 1 && c[0].empty()) continue;
    if (c.size() != std::size(kTableHeader)) {
      throw std::invalid_argument("line " + std::to_string(start) + ": expected " +
                                  std::to_string(std::size(kTableHeader)) + " fields");
    }
    rows.push_back({c[0], c[1], c[2], c[3], parse_number(c[4], start), parse_number(c[5], start),
                    parse_number(c[6], start), c[7]});
  }
  return rows;
}

}  // namespace pbtbench::report

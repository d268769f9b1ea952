#include "skillmatch/report.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "skillmatch/error.hpp"

namespace skillmatch {

using nlohmann::json;

std::string format_number(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw ContractViolation("number formatting failed");
  return std::string(buffer, end);
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string emit_csv(std::span<const MetricSeries> series) {
  std::string out = "series,x,mean,stderr\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out += csv_field(s.name) + ',' + format_number(s.x[i]) + ',' +
             format_number(s.mean[i]) + ',' + format_number(s.std_error[i]) +
             '\n';
    }
  }
  return out;
}

std::string emit_json(std::span<const MetricSeries> series) {
  json doc = json::array();
  for (const auto& s : series) {
    doc.push_back({{"name", s.name},
                   {"metric", std::string(to_string(s.metric))},
                   {"x_key", s.x_key},
                   {"x", s.x},
                   {"mean", s.mean},
                   {"stderr", s.std_error}});
  }
  return doc.dump(2) + '\n';
}

std::string emit_coords(std::span<const MetricSeries> series) {
  std::string out;
  for (const auto& s : series) {
    out += "# " + s.name + '\n';
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out += '(' + format_number(s.x[i]) + ", " + format_number(s.mean[i]) + ')';
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string emit_results(std::span<const MetricSeries> series,
                         OutputFormat format) {
  if (series.empty()) throw ContractViolation("emit_results: no series");
  for (const auto& s : series) {
    if (s.x.size() != s.mean.size() || s.x.size() != s.std_error.size()) {
      throw ContractViolation("emit_results: ragged series " + s.name);
    }
  }
  switch (format) {
    case OutputFormat::kCsv: return emit_csv(series);
    case OutputFormat::kJson: return emit_json(series);
    case OutputFormat::kCoords: return emit_coords(series);
  }
  return {};
}

std::vector<MetricSeries> parse_results_json(std::string_view text) {
  const json doc = json::parse(text.begin(), text.end());
  std::vector<MetricSeries> series;
  for (const auto& entry : doc) {
    MetricSeries s;
    s.name = entry.at("name").get<std::string>();
    const auto metric = entry.at("metric").get<std::string>();
    for (auto m : {MetricKind::kPercentOfOptimal, MetricKind::kSuccessRate,
                   MetricKind::kQualificationRate}) {
      if (to_string(m) == metric) s.metric = m;
    }
    s.x_key = entry.at("x_key").get<std::string>();
    s.x = entry.at("x").get<std::vector<double>>();
    s.mean = entry.at("mean").get<std::vector<double>>();
    s.std_error = entry.at("stderr").get<std::vector<double>>();
    series.push_back(std::move(s));
  }
  return series;
}

}  // namespace skillmatch

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillmatch/config.hpp"
#include "skillmatch/simulator.hpp"

namespace skillmatch {

/// Renders result series.
///
///   csv     header `series,x,mean,stderr`, one row per point; series names
///           are quoted only when they contain a comma, quote or newline
///   json    array of {name, metric, x_key, x, mean, stderr} objects
///   coords  per series a `# name` line, then one line of `(x, mean)` pairs
///
/// Numbers use the shortest representation that reads back exactly.
std::string emit_results(std::span<const MetricSeries> series,
                         OutputFormat format);

/// Inverse of the json format.
std::vector<MetricSeries> parse_results_json(std::string_view text);

/// Shortest round-trip decimal form of `value`.
std::string format_number(double value);

}  // namespace skillmatch

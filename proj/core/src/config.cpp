#include "skillmatch/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "skillmatch/error.hpp"

namespace skillmatch {

using nlohmann::json;

std::string_view to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::kPercentOfOptimal: return "percent_of_optimal";
    case MetricKind::kSuccessRate: return "success_rate";
    case MetricKind::kQualificationRate: return "qualification_rate";
  }
  return "?";
}

std::string_view to_string(OutputFormat format) noexcept {
  switch (format) {
    case OutputFormat::kCsv: return "csv";
    case OutputFormat::kJson: return "json";
    case OutputFormat::kCoords: return "coords";
  }
  return "?";
}

std::optional<OutputFormat> parse_output_format(std::string_view text) noexcept {
  for (auto f : {OutputFormat::kCsv, OutputFormat::kJson, OutputFormat::kCoords}) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

std::vector<PolicySpec> all_policies() {
  std::vector<PolicySpec> specs;
  for (auto kind : {PolicyKind::kOracle, PolicyKind::kHme,
                    PolicyKind::kEpsilonGreedy, PolicyKind::kUcb,
                    PolicyKind::kBoundedEpsilonFirst, PolicyKind::kRandom}) {
    PolicySpec spec;
    spec.kind = kind;
    spec.label = default_label(kind);
    specs.push_back(spec);
  }
  return specs;
}

const std::vector<std::string>& sweep_keys() {
  static const std::vector<std::string> keys = {
      "tasks",
      "workers",
      "skills",
      "noise.flip_prob",
      "policy.egreedy.epsilon0",
      "policy.egreedy.drop",
      "policy.bef.explore_fraction",
      "policy.planning_flip_prob",
  };
  return keys;
}

std::size_t ExperimentConfig::point_count() const {
  return sweep_key == "tasks" ? tasks.size() : sweep_values.size();
}

std::vector<double> ExperimentConfig::x_values() const {
  if (sweep_key != "tasks") return sweep_values;
  std::vector<double> xs;
  for (auto t : tasks) xs.push_back(static_cast<double>(t));
  return xs;
}

namespace {

std::size_t as_count(double v, const std::string& key) {
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw ConfigError(key + " must be a non-negative integer", key);
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

ExperimentConfig point_config(const ExperimentConfig& config,
                              std::size_t index) {
  ExperimentConfig point = config;
  if (config.sweep_key == "tasks") {
    point.tasks = {config.tasks.at(index)};
    return point;
  }
  const double v = config.sweep_values.at(index);
  const std::string& key = config.sweep_key;
  if (key == "workers") {
    point.workers = as_count(v, key);
  } else if (key == "skills") {
    point.skills = as_count(v, key);
  } else if (key == "noise.flip_prob") {
    point.feedback.noise.flip_prob = v;
  } else {
    for (auto& spec : point.policies) {
      if (key == "policy.egreedy.epsilon0") spec.egreedy.epsilon0 = v;
      if (key == "policy.egreedy.drop") spec.egreedy.drop = v;
      if (key == "policy.bef.explore_fraction") spec.bef.explore_fraction = v;
      if (key == "policy.planning_flip_prob") spec.planning_flip_prob = v;
    }
  }
  return point;
}

namespace {

void validate_point(const ExperimentConfig& c) {
  if (c.workers < 1) throw ConfigError("workers must be >= 1", "workers");
  if (c.skills < 1) throw ConfigError("skills must be >= 1", "skills");
  if (c.runs < 1) throw ConfigError("runs must be >= 1", "runs");
  if (c.tasks.empty()) throw ConfigError("tasks must not be empty", "tasks");
  for (auto t : c.tasks) {
    if (t < c.workers) {
      throw ConfigError("every task count must be >= workers (" +
                            std::to_string(c.workers) + "), got " +
                            std::to_string(t),
                        "tasks");
    }
  }
  validate(c.feedback.noise);
  if (c.policies.empty()) {
    throw ConfigError("at least one policy is required", "policies");
  }
  std::set<std::string> labels;
  for (const auto& spec : c.policies) {
    validate(spec);
    if (!labels.insert(spec.label).second) {
      throw ConfigError("duplicate series name: " + spec.label, "policies");
    }
  }
}

}  // namespace

void validate(const ExperimentConfig& config) {
  const auto& keys = sweep_keys();
  if (std::find(keys.begin(), keys.end(), config.sweep_key) == keys.end()) {
    throw ConfigError("unsupported sweep key: " + config.sweep_key, "sweep.key");
  }
  if (config.sweep_key != "tasks") {
    if (config.sweep_values.empty()) {
      throw ConfigError("sweep.values must not be empty", "sweep.values");
    }
    if (config.tasks.size() != 1) {
      throw ConfigError("tasks must be a single count when sweeping " +
                            config.sweep_key,
                        "tasks");
    }
  }
  validate_point(config);
  for (std::size_t i = 0; i < config.point_count(); ++i) {
    validate_point(point_config(config, i));
  }
}

// ---------------------------------------------------------------------------
// JSON parsing

namespace {

const std::set<std::string>& policy_keys() {
  static const std::set<std::string> keys = {
      "estimator.kind",
      "estimator.mode",
      "policy.egreedy.epsilon0",
      "policy.egreedy.drop",
      "policy.bef.explore_fraction",
      "policy.bef.budget",
      "policy.bef.cost",
      "policy.planning_flip_prob",
  };
  return keys;
}

const std::set<std::string>& top_level_keys() {
  static const std::set<std::string> keys = {
      "workers", "tasks",       "runs",         "skills",
      "noise.flip_prob",        "feedback.scope", "mode",
      "metric",  "seed",        "format",       "threads",
      "sweep.key", "sweep.values", "policy.kind", "policies",
  };
  return keys;
}

double get_number(const json& value, const std::string& key) {
  if (!value.is_number()) throw ConfigError(key + " must be a number", key);
  return value.get<double>();
}

std::size_t get_count(const json& value, const std::string& key) {
  if (!value.is_number_integer() && !value.is_number_unsigned()) {
    throw ConfigError(key + " must be an integer", key);
  }
  if (value.is_number_integer() && value.get<std::int64_t>() < 0) {
    throw ConfigError(key + " must be >= 0", key);
  }
  return value.get<std::size_t>();
}

std::string get_string(const json& value, const std::string& key) {
  if (!value.is_string()) throw ConfigError(key + " must be a string", key);
  return value.get<std::string>();
}

void apply_policy_key(PolicySpec& spec, const std::string& key,
                      const json& value) {
  if (key == "estimator.kind") {
    const auto s = get_string(value, key);
    if (s == "minmax") spec.estimator = EstimatorKind::kMinMax;
    else if (s == "average") spec.estimator = EstimatorKind::kAverage;
    else throw ConfigError("estimator.kind must be minmax or average", key);
  } else if (key == "estimator.mode") {
    const auto s = get_string(value, key);
    if (s == "overwrite") spec.update = UpdateMode::kOverwrite;
    else if (s == "monotone") spec.update = UpdateMode::kMonotone;
    else throw ConfigError("estimator.mode must be overwrite or monotone", key);
  } else if (key == "policy.egreedy.epsilon0") {
    spec.egreedy.epsilon0 = get_number(value, key);
  } else if (key == "policy.egreedy.drop") {
    spec.egreedy.drop = get_number(value, key);
  } else if (key == "policy.bef.explore_fraction") {
    spec.bef.explore_fraction = get_number(value, key);
  } else if (key == "policy.bef.budget") {
    spec.bef.budget = get_number(value, key);
  } else if (key == "policy.bef.cost") {
    if (value.is_array()) {
      spec.bef.worker_costs.clear();
      for (const auto& c : value) spec.bef.worker_costs.push_back(get_number(c, key));
    } else {
      spec.bef.cost = get_number(value, key);
      spec.bef.worker_costs.clear();
    }
  } else if (key == "policy.planning_flip_prob") {
    spec.planning_flip_prob = get_number(value, key);
  } else {
    throw ConfigError("unknown key: " + key, key);
  }
}

PolicySpec policy_from_name(const std::string& name,
                            const std::string& key = "policies") {
  const auto kind = parse_policy_kind(name);
  if (!kind) {
    throw ConfigError("unknown policy '" + name +
                          "' (expected oracle, hme, egreedy, ucb, bef, random)",
                      key);
  }
  PolicySpec spec;
  spec.kind = *kind;
  spec.label = default_label(*kind);
  return spec;
}

void apply_policy_defaults(PolicySpec& spec, const json& object) {
  for (const auto& [key, value] : object.items()) {
    if (policy_keys().count(key)) apply_policy_key(spec, key, value);
  }
}

}  // namespace

ExperimentConfig parse_config_json(std::string_view text,
                                   const ExperimentConfig& base) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON config: ") + e.what(),
                      "config");
  }
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object", "config");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!top_level_keys().count(key) && !policy_keys().count(key)) {
      throw ConfigError("unknown key: " + key, key);
    }
  }

  ExperimentConfig config = base;
  for (const auto& [key, value] : doc.items()) {
    if (key == "workers") {
      config.workers = get_count(value, key);
    } else if (key == "tasks") {
      config.tasks.clear();
      if (value.is_array()) {
        for (const auto& t : value) config.tasks.push_back(get_count(t, key));
      } else {
        config.tasks.push_back(get_count(value, key));
      }
    } else if (key == "runs") {
      config.runs = get_count(value, key);
    } else if (key == "skills") {
      config.skills = get_count(value, key);
    } else if (key == "noise.flip_prob") {
      config.feedback.noise.flip_prob = get_number(value, key);
    } else if (key == "feedback.scope") {
      const auto s = get_string(value, key);
      if (s == "per_skill") config.feedback.scope = RatingScope::kPerSkill;
      else if (s == "overall") config.feedback.scope = RatingScope::kOverall;
      else throw ConfigError("feedback.scope must be per_skill or overall", key);
    } else if (key == "mode") {
      const auto s = get_string(value, key);
      if (s == "block") config.mode = MatchingMode::kBlock;
      else if (s == "unrestricted") config.mode = MatchingMode::kUnrestricted;
      else throw ConfigError("mode must be block or unrestricted", key);
    } else if (key == "metric") {
      const auto s = get_string(value, key);
      bool found = false;
      for (auto m : {MetricKind::kPercentOfOptimal, MetricKind::kSuccessRate,
                     MetricKind::kQualificationRate}) {
        if (to_string(m) == s) {
          config.metric = m;
          found = true;
        }
      }
      if (!found) {
        throw ConfigError(
            "metric must be percent_of_optimal, success_rate or "
            "qualification_rate",
            key);
      }
    } else if (key == "seed") {
      config.seed = get_count(value, key);
    } else if (key == "format") {
      const auto f = parse_output_format(get_string(value, key));
      if (!f) throw ConfigError("format must be csv, json or coords", key);
      config.format = *f;
    } else if (key == "threads") {
      config.threads = get_count(value, key);
    } else if (key == "sweep.key") {
      config.sweep_key = get_string(value, key);
    } else if (key == "sweep.values") {
      if (!value.is_array()) throw ConfigError(key + " must be an array", key);
      config.sweep_values.clear();
      for (const auto& v : value) config.sweep_values.push_back(get_number(v, key));
    }
  }

  if (doc.contains("policies") && doc.contains("policy.kind")) {
    throw ConfigError("give either policies or policy.kind, not both",
                      "policy.kind");
  }
  if (doc.contains("policy.kind")) {
    config.policies = {policy_from_name(get_string(doc["policy.kind"], "policy.kind"),
                                        "policy.kind")};
  } else if (doc.contains("policies")) {
    const json& list = doc["policies"];
    if (!list.is_array()) {
      throw ConfigError("policies must be an array", "policies");
    }
    config.policies.clear();
    for (const auto& entry : list) {
      if (entry.is_string()) {
        PolicySpec spec = policy_from_name(entry.get<std::string>());
        apply_policy_defaults(spec, doc);
        config.policies.push_back(std::move(spec));
        continue;
      }
      if (!entry.is_object() || !entry.contains("kind")) {
        throw ConfigError("policies entries must be names or objects with a kind",
                          "policies");
      }
      PolicySpec spec = policy_from_name(get_string(entry["kind"], "policies.kind"));
      apply_policy_defaults(spec, doc);
      for (const auto& [key, value] : entry.items()) {
        if (key == "kind") continue;
        if (key == "label") {
          spec.label = get_string(value, "policies.label");
        } else if (policy_keys().count(key)) {
          apply_policy_key(spec, key, value);
        } else {
          throw ConfigError("unknown key in policies entry: " + key, key);
        }
      }
      config.policies.push_back(std::move(spec));
    }
    validate(config);
    return config;
  }
  for (auto& spec : config.policies) apply_policy_defaults(spec, doc);
  validate(config);
  return config;
}

ExperimentConfig parse_config_file(const std::string& path,
                                   const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path, "config");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  // An empty file means "all defaults".
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    validate(base);
    return base;
  }
  return parse_config_json(text, base);
}

std::vector<std::size_t> parse_count_list(std::string_view text,
                                          std::string_view key) {
  std::vector<std::size_t> values;
  const std::string name(key);
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    std::size_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
      throw ConfigError(name + ": '" + std::string(item) + "' is not a count",
                        name);
    }
    values.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (values.empty()) throw ConfigError(name + " must not be empty", name);
  return values;
}

void apply_overrides(ExperimentConfig& config,
                     const ConfigOverrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.runs) config.runs = *overrides.runs;
  if (overrides.workers) config.workers = *overrides.workers;
  if (overrides.tasks) config.tasks = *overrides.tasks;
  if (overrides.skills) config.skills = *overrides.skills;
  if (overrides.flip_prob) config.feedback.noise.flip_prob = *overrides.flip_prob;
  if (overrides.format) config.format = *overrides.format;
  if (overrides.threads) config.threads = *overrides.threads;
  if (overrides.policies) {
    // Keep per-policy settings of series that stay, by kind.
    std::vector<PolicySpec> next;
    for (const auto& name : *overrides.policies) {
      PolicySpec spec = policy_from_name(name);
      for (const auto& existing : config.policies) {
        if (existing.kind == spec.kind) {
          spec = existing;
          break;
        }
      }
      next.push_back(spec);
    }
    config.policies = std::move(next);
  }
  validate(config);
}

// ---------------------------------------------------------------------------
// Presets

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig3"};
  return names;
}

namespace {

std::vector<std::size_t> task_axis() {
  std::vector<std::size_t> tasks;
  for (std::size_t t = 10; t <= 300; t += 10) tasks.push_back(t);
  return tasks;
}

}  // namespace

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig config;
  if (name == "fig3") {
    config.tasks = task_axis();
    config.policies = all_policies();
    config.metric = MetricKind::kPercentOfOptimal;
    return config;
  }
  if (name == "fig2") {
    PolicySpec hme;
    hme.kind = PolicyKind::kHme;
    hme.label = default_label(PolicyKind::kHme);
    config.policies = {hme};
    config.metric = MetricKind::kSuccessRate;
    config.tasks = {300};
    config.sweep_key = "noise.flip_prob";
    config.sweep_values.clear();
    for (int i = 0; i <= 10; ++i) config.sweep_values.push_back(i / 10.0);
    return config;
  }
  if (name == "fig1") {
    PolicySpec minmax;
    minmax.kind = PolicyKind::kBoundedEpsilonFirst;
    minmax.label = "min-max";
    minmax.estimator = EstimatorKind::kMinMax;
    PolicySpec average = minmax;
    average.label = "average";
    average.estimator = EstimatorKind::kAverage;
    config.tasks = task_axis();
    config.policies = {minmax, average};
    config.metric = MetricKind::kPercentOfOptimal;
    return config;
  }
  std::string valid;
  for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + std::string(name) + "' (valid: " +
                        valid + ")",
                    "preset");
}

}  // namespace skillmatch

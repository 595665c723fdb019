#pragma once

// Scenario files: parsing, execution of the task pipeline and the JSON
// forms of the reports.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "leafspec/curvekit.hpp"
#include "leafspec/expspace.hpp"
#include "leafspec/fredholm.hpp"
#include "leafspec/opnum.hpp"
#include "leafspec/symcalc.hpp"

namespace leafspec::cli {

using nlohmann::json;

enum class Task { spirality, leaf_plot, fredholm, symbol_test, verify };
const char* to_string(Task task);

struct PointSpec {
  std::string t_label;
  std::optional<double> p_t;
  std::optional<double> delta_minus;
  std::optional<double> delta_plus;
};

struct SpiralitySettings {
  std::optional<std::vector<double>> R_grid;  // default: curve::default_R_grid
  std::vector<double> x_small = curve::default_x_small();
  std::vector<double> x_large = curve::default_x_large();
};

struct Scenario {
  curve::CurveSpec curve;
  std::size_t n = 1024;
  json exponent;  // validated; resolved against the built curve
  opnum::Coefficients coefficients;
  std::optional<symbol::OperatorExpr> expression;
  std::vector<PointSpec> points;
  std::vector<Task> tasks;
  std::vector<std::size_t> verify_sizes{64, 128, 256};
  std::size_t z_samples = 512;
  std::size_t leaf_samples = 1024;
  SpiralitySettings spirality;
};

/// Throws SchemaError locating the offending value.
Scenario parse_scenario(const json& j);
curve::CurveSpec parse_curve(const json& j, const std::string& pointer, std::size_t* n = nullptr);
/// Reads and parses a file. Schema problems raise ConfigError whose message
/// starts with "<path>:<line>:".
Scenario load_scenario(const std::string& path);

/// 1-based line of the value at an RFC 6901 pointer (or of its deepest
/// existing ancestor) in raw JSON text.
int locate_line(const std::string& text, const std::string& pointer);

expspace::Exponent resolve_exponent(const json& spec, const curve::DiscretizedCurve& curve);

struct SpiralityEntry {
  std::string t_label;
  curve::SpiralityData data;
};

struct RunResult {
  std::optional<fredholm::CriterionReport> criterion;
  std::optional<symbol::BundleVerdict> symbol;
  std::optional<opnum::FiniteSectionReport> trend;
  std::vector<SpiralityEntry> spirality;
  std::vector<std::string> files;  // written artifacts
};

/// Runs the tasks in order and writes artifacts into out_dir (created if needed).
RunResult run_scenario(const Scenario& scenario, const std::string& out_dir);

/// Full CLI pipeline for `leafspec run`: returns the exit code (0 success,
/// 2 configuration error, 3 resolution error, 1 anything else) and prints
/// diagnostics to `err`.
int run_scenario_file(const std::string& path, const std::string& out_dir, std::ostream& err);

json to_json(const fredholm::CriterionReport& r);
json to_json(const symbol::BundleVerdict& v);
json to_json(const opnum::FiniteSectionReport& r);
json to_json(const std::vector<SpiralityEntry>& entries);
fredholm::CriterionReport criterion_from_json(const json& j);
symbol::BundleVerdict symbol_from_json(const json& j);
opnum::FiniteSectionReport trend_from_json(const json& j);

json verdict_json(const RunResult& r);

/// Stable text form used for every artifact.
std::string dump(const json& j);

}  // namespace leafspec::cli

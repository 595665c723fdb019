#include "leafspec/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "leafspec/errors.hpp"
#include "leafspec/leafgeom.hpp"
#include "leafspec/svg.hpp"

namespace leafspec::cli {

using Complex = std::complex<double>;

namespace {

using curve::CurveSpec;

void allow_keys(const json& j, const std::string& pointer, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw SchemaError(pointer, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw SchemaError(pointer + "/" + key, "unknown key '" + key + "'");
  }
}

double get_number(const json& j, const std::string& pointer) {
  if (!j.is_number()) throw SchemaError(pointer, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(pointer, "expected a finite number");
  return v;
}

double number_at(const json& obj, const char* key, const std::string& pointer, double fallback) {
  return obj.contains(key) ? get_number(obj[key], pointer + "/" + key) : fallback;
}

std::size_t get_size(const json& j, const std::string& pointer, std::size_t minimum) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(minimum)) {
    throw SchemaError(pointer, "expected an integer >= " + std::to_string(minimum));
  }
  return j.get<std::size_t>();
}

std::string get_string(const json& j, const std::string& pointer) {
  if (!j.is_string()) throw SchemaError(pointer, "expected a string");
  return j.get<std::string>();
}

Complex get_complex(const json& j, const std::string& pointer) {
  if (j.is_number()) return {get_number(j, pointer), 0.0};
  if (j.is_array() && j.size() == 2) {
    return {get_number(j[0], pointer + "/0"), get_number(j[1], pointer + "/1")};
  }
  throw SchemaError(pointer, "expected a number or [re, im]");
}

std::vector<double> get_numbers(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) throw SchemaError(pointer, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], pointer + "/" + std::to_string(i)));
  }
  return out;
}

symbol::Matrix get_matrix(const json& j, std::size_t N, const std::string& pointer) {
  symbol::Matrix m(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  if (N == 1 && (j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number()))) {
    m(0, 0) = get_complex(j, pointer);
    return m;
  }
  if (!j.is_array() || j.size() != N) {
    throw SchemaError(pointer, "expected " + std::to_string(N) + " rows");
  }
  for (std::size_t r = 0; r < N; ++r) {
    const std::string row_ptr = pointer + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != N) {
      throw SchemaError(row_ptr, "expected " + std::to_string(N) + " entries");
    }
    for (std::size_t c = 0; c < N; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          get_complex(j[r][c], row_ptr + "/" + std::to_string(c));
    }
  }
  return m;
}

std::vector<double> get_grid(const json& j, const std::string& pointer) {
  if (j.is_object()) {
    allow_keys(j, pointer, {"first", "last", "count"});
    for (const char* k : {"first", "last", "count"}) {
      if (!j.contains(k)) throw SchemaError(pointer + "/" + k, "missing");
    }
    const double first = get_number(j["first"], pointer + "/first");
    const double last = get_number(j["last"], pointer + "/last");
    const std::size_t count = get_size(j["count"], pointer + "/count", 2);
    if (!(first > 0.0 && last > 0.0)) throw SchemaError(pointer, "grid endpoints must be positive");
    return curve::geometric_grid(first, last, count);
  }
  return get_numbers(j, pointer);
}

Task parse_task(const json& j, const std::string& pointer) {
  const std::string s = get_string(j, pointer);
  for (Task t : {Task::spirality, Task::leaf_plot, Task::fredholm, Task::symbol_test, Task::verify}) {
    if (s == to_string(t)) return t;
  }
  throw SchemaError(pointer, "unknown task '" + s + "'");
}

void validate_exponent(const json& j, const std::string& pointer, const std::set<std::string>& labels) {
  if (!j.is_object() || !j.contains("kind")) throw SchemaError(pointer, "exponent needs a 'kind'");
  const std::string kind = get_string(j["kind"], pointer + "/kind");
  if (kind == "constant") {
    allow_keys(j, pointer, {"kind", "p"});
    if (!j.contains("p")) throw SchemaError(pointer + "/p", "missing");
    if (!(get_number(j["p"], pointer + "/p") > 1.0)) throw SchemaError(pointer + "/p", "p must exceed 1");
    return;
  }
  if (kind != "formula") throw SchemaError(pointer + "/kind", "unknown exponent kind '" + kind + "'");
  allow_keys(j, pointer, {"kind", "name", "params"});
  if (!j.contains("name")) throw SchemaError(pointer + "/name", "missing");
  const std::string name = get_string(j["name"], pointer + "/name");
  const json params = j.value("params", json::object());
  const std::string pp = pointer + "/params";
  if (name == "log_perturbation") {
    allow_keys(params, pp, {"t", "base", "amplitude"});
  } else if (name == "holder_perturbation") {
    allow_keys(params, pp, {"t", "base", "amplitude", "power", "frequency"});
  } else {
    throw SchemaError(pointer + "/name", "unknown exponent formula '" + name + "'");
  }
  const std::string t = params.contains("t") ? get_string(params["t"], pp + "/t") : "t";
  if (!labels.count(t)) throw SchemaError(pp + "/t", "unknown curve label '" + t + "'");
  for (const auto& [key, value] : params.items()) {
    if (key != "t") get_number(value, pp + "/" + key);
  }
}

}  // namespace

const char* to_string(Task task) {
  switch (task) {
    case Task::spirality:
      return "spirality";
    case Task::leaf_plot:
      return "leaf_plot";
    case Task::fredholm:
      return "fredholm";
    case Task::symbol_test:
      return "symbol_test";
    case Task::verify:
      return "verify";
  }
  return "";
}

CurveSpec parse_curve(const json& j, const std::string& pointer, std::size_t* n) {
  if (!j.is_object() || !j.contains("family")) throw SchemaError(pointer, "curve needs a 'family'");
  const std::string family = get_string(j["family"], pointer + "/family");
  CurveSpec spec;
  const Complex center = j.contains("center") ? get_complex(j["center"], pointer + "/center") : Complex{};
  if (family == "circle") {
    allow_keys(j, pointer, {"family", "n", "marks", "counter_clockwise", "radius", "center"});
    spec = CurveSpec::circle(number_at(j, "radius", pointer, 1.0), center);
  } else if (family == "ellipse") {
    allow_keys(j, pointer, {"family", "n", "marks", "counter_clockwise", "rx", "ry", "center"});
    spec = CurveSpec::ellipse(number_at(j, "rx", pointer, 1.0), number_at(j, "ry", pointer, 1.0), center);
  } else if (family == "log_spiral") {
    allow_keys(j, pointer,
               {"family", "n", "marks", "counter_clockwise", "radius", "center", "delta", "log_span"});
    spec = CurveSpec::log_spiral(number_at(j, "delta", pointer, 0.0), number_at(j, "radius", pointer, 1.0),
                                 center);
  } else if (family == "oscillating_spiral") {
    allow_keys(j, pointer, {"family", "n", "marks", "counter_clockwise", "radius", "center",
                            "delta_minus", "delta_plus", "log_span"});
    spec = CurveSpec::oscillating_spiral(number_at(j, "delta_minus", pointer, 0.0),
                                         number_at(j, "delta_plus", pointer, 0.0),
                                         number_at(j, "radius", pointer, 1.0), center);
  } else if (family == "polyline") {
    allow_keys(j, pointer, {"family", "n", "marks", "counter_clockwise", "points"});
    if (!j.contains("points") || !j["points"].is_array()) {
      throw SchemaError(pointer + "/points", "polyline needs an array of [x, y] points");
    }
    std::vector<Complex> vertices;
    for (std::size_t i = 0; i < j["points"].size(); ++i) {
      const std::string pp = pointer + "/points/" + std::to_string(i);
      if (!j["points"][i].is_array()) throw SchemaError(pp, "expected [x, y]");
      vertices.push_back(get_complex(j["points"][i], pp));
    }
    if (vertices.size() < 3) throw SchemaError(pointer + "/points", "polyline needs at least 3 points");
    spec = CurveSpec::polyline(std::move(vertices));
  } else {
    throw SchemaError(pointer + "/family", "unknown curve family '" + family + "'");
  }
  spec.log_span = number_at(j, "log_span", pointer, spec.log_span);
  if (!(spec.radius > 0.0)) throw SchemaError(pointer, "curve size parameters must be positive");
  if (j.contains("counter_clockwise")) {
    if (!j["counter_clockwise"].is_boolean()) {
      throw SchemaError(pointer + "/counter_clockwise", "expected a boolean");
    }
    spec.counter_clockwise = j["counter_clockwise"].get<bool>();
  }
  if (j.contains("marks")) {
    const std::string mp = pointer + "/marks";
    if (!j["marks"].is_object()) throw SchemaError(mp, "expected an object of label: fraction");
    for (const auto& [label, value] : j["marks"].items()) {
      const double f = get_number(value, mp + "/" + label);
      if (label == "t") throw SchemaError(mp + "/t", "the label 't' is reserved for fraction 0");
      if (!(f >= 0.0 && f < 1.0)) throw SchemaError(mp + "/" + label, "fraction must lie in [0, 1)");
      spec.marks.emplace_back(label, f);
    }
  }
  if (n != nullptr && j.contains("n")) *n = get_size(j["n"], pointer + "/n", 4);
  return spec;
}

Scenario parse_scenario(const json& j) {
  allow_keys(j, "", {"v", "curve", "exponent", "coefficients", "expression", "points", "tasks",
                     "verify", "symbol", "leaf_plot", "spirality"});
  if (!j.contains("v")) throw SchemaError("/v", "schema version field \"v\": 1 is required");
  if (!j["v"].is_number_integer() || j["v"].get<long long>() != 1) {
    throw SchemaError("/v", "unsupported schema version (expected 1)");
  }
  Scenario s;
  if (!j.contains("curve")) throw SchemaError("/curve", "missing");
  s.curve = parse_curve(j["curve"], "/curve", &s.n);

  std::set<std::string> labels{"t"};
  for (const auto& [label, f] : s.curve.marks) labels.insert(label);
  auto require_label = [&](const std::string& label, const std::string& pointer) {
    if (!labels.count(label)) throw SchemaError(pointer, "unknown curve label '" + label + "'");
  };

  s.exponent = j.contains("exponent") ? j["exponent"] : json{{"kind", "constant"}, {"p", 2.0}};
  validate_exponent(s.exponent, "/exponent", labels);

  if (j.contains("coefficients")) {
    const json& cs = j["coefficients"];
    if (!cs.is_object()) throw SchemaError("/coefficients", "expected an object");
    std::optional<std::size_t> common;
    for (const auto& [id, c] : cs.items()) {
      const std::string cp = "/coefficients/" + id;
      allow_keys(c, cp, {"size", "pieces"});
      const std::size_t N = c.contains("size") ? get_size(c["size"], cp + "/size", 1) : 1;
      if (N > 16) throw SchemaError(cp + "/size", "size must be at most 16");
      if (common && *common != N) throw SchemaError(cp + "/size", "all coefficients must share one size");
      common = N;
      if (!c.contains("pieces") || !c["pieces"].is_array() || c["pieces"].empty()) {
        throw SchemaError(cp + "/pieces", "expected a nonempty array");
      }
      std::vector<symbol::PCCoefficient::Piece> pieces;
      std::set<std::string> starts;
      for (std::size_t i = 0; i < c["pieces"].size(); ++i) {
        const std::string pp = cp + "/pieces/" + std::to_string(i);
        const json& piece = c["pieces"][i];
        allow_keys(piece, pp, {"start", "value"});
        if (!piece.contains("start")) throw SchemaError(pp + "/start", "missing");
        if (!piece.contains("value")) throw SchemaError(pp + "/value", "missing");
        const std::string start = get_string(piece["start"], pp + "/start");
        require_label(start, pp + "/start");
        if (!starts.insert(start).second) throw SchemaError(pp + "/start", "repeated piece start");
        pieces.push_back({start, get_matrix(piece["value"], N, pp + "/value")});
      }
      s.coefficients.emplace(id, symbol::PCCoefficient(N, std::move(pieces)));
    }
  }

  if (j.contains("expression")) {
    s.expression = symbol::expr_from_json(j["expression"], "/expression");
    for (const auto& id : s.expression->coefficient_ids()) {
      if (!s.coefficients.count(id)) {
        throw SchemaError("/expression", "unknown coefficient '" + id + "'");
      }
    }
  }

  if (j.contains("points")) {
    if (!j["points"].is_array()) throw SchemaError("/points", "expected an array");
    for (std::size_t i = 0; i < j["points"].size(); ++i) {
      const std::string pp = "/points/" + std::to_string(i);
      const json& p = j["points"][i];
      allow_keys(p, pp, {"t_label", "overrides"});
      if (!p.contains("t_label")) throw SchemaError(pp + "/t_label", "missing");
      PointSpec point;
      point.t_label = get_string(p["t_label"], pp + "/t_label");
      require_label(point.t_label, pp + "/t_label");
      if (p.contains("overrides")) {
        const json& o = p["overrides"];
        const std::string op = pp + "/overrides";
        allow_keys(o, op, {"p_t", "delta_minus", "delta_plus"});
        if (o.contains("p_t")) {
          point.p_t = get_number(o["p_t"], op + "/p_t");
          if (!(*point.p_t > 1.0)) throw SchemaError(op + "/p_t", "p_t must exceed 1");
        }
        if (o.contains("delta_minus") != o.contains("delta_plus")) {
          throw SchemaError(op, "delta_minus and delta_plus must be given together");
        }
        if (o.contains("delta_minus")) {
          point.delta_minus = get_number(o["delta_minus"], op + "/delta_minus");
          point.delta_plus = get_number(o["delta_plus"], op + "/delta_plus");
          if (*point.delta_minus > *point.delta_plus) {
            throw SchemaError(op, "delta_minus must not exceed delta_plus");
          }
        }
      }
      s.points.push_back(std::move(point));
    }
  }

  if (!j.contains("tasks") || !j["tasks"].is_array()) throw SchemaError("/tasks", "expected an array");
  for (std::size_t i = 0; i < j["tasks"].size(); ++i) {
    s.tasks.push_back(parse_task(j["tasks"][i], "/tasks/" + std::to_string(i)));
  }

  if (j.contains("verify")) {
    allow_keys(j["verify"], "/verify", {"sizes"});
    if (j["verify"].contains("sizes")) {
      const json& sz = j["verify"]["sizes"];
      if (!sz.is_array() || sz.empty()) throw SchemaError("/verify/sizes", "expected a nonempty array");
      s.verify_sizes.clear();
      for (std::size_t i = 0; i < sz.size(); ++i) {
        const std::string sp = "/verify/sizes/" + std::to_string(i);
        s.verify_sizes.push_back(get_size(sz[i], sp, 64));
        if (i > 0 && s.verify_sizes[i] <= s.verify_sizes[i - 1]) {
          throw SchemaError(sp, "sizes must increase");
        }
      }
    }
  }
  if (j.contains("symbol")) {
    allow_keys(j["symbol"], "/symbol", {"z_samples"});
    if (j["symbol"].contains("z_samples")) {
      s.z_samples = get_size(j["symbol"]["z_samples"], "/symbol/z_samples", 256);
    }
  }
  if (j.contains("leaf_plot")) {
    allow_keys(j["leaf_plot"], "/leaf_plot", {"samples"});
    if (j["leaf_plot"].contains("samples")) {
      s.leaf_samples = get_size(j["leaf_plot"]["samples"], "/leaf_plot/samples", 64);
    }
  }
  if (j.contains("spirality")) {
    const json& sp = j["spirality"];
    allow_keys(sp, "/spirality", {"R_grid", "x_small", "x_large"});
    if (sp.contains("R_grid")) s.spirality.R_grid = get_grid(sp["R_grid"], "/spirality/R_grid");
    if (sp.contains("x_small")) s.spirality.x_small = get_grid(sp["x_small"], "/spirality/x_small");
    if (sp.contains("x_large")) s.spirality.x_large = get_grid(sp["x_large"], "/spirality/x_large");
  }
  return s;
}

int locate_line(const std::string& text, const std::string& pointer) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto skip_string = [&] {
    ++pos;
    while (pos < text.size() && text[pos] != '"') pos += text[pos] == '\\' ? 2 : 1;
    ++pos;
  };
  auto skip_value = [&] {
    skip_ws();
    int depth = 0;
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '"') {
        skip_string();
        if (depth == 0) return;
        continue;
      }
      if (c == '{' || c == '[') ++depth;
      if (c == '}' || c == ']') {
        if (depth == 0) return;
        --depth;
        ++pos;
        if (depth == 0) return;
        continue;
      }
      if (depth == 0 && (c == ',' )) return;
      ++pos;
    }
  };
  auto line_of = [&](std::size_t p) {
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(std::min(p, text.size())), '\n'));
  };

  std::vector<std::string> tokens;
  for (std::size_t i = 1; i <= pointer.size() && !pointer.empty();) {
    std::size_t next = pointer.find('/', i);
    if (next == std::string::npos) next = pointer.size();
    std::string tok = pointer.substr(i, next - i);
    for (std::size_t k; (k = tok.find("~1")) != std::string::npos;) tok.replace(k, 2, "/");
    for (std::size_t k; (k = tok.find("~0")) != std::string::npos;) tok.replace(k, 2, "~");
    tokens.push_back(tok);
    i = next + 1;
  }

  skip_ws();
  for (const std::string& tok : tokens) {
    const std::size_t here = pos;
    if (pos >= text.size()) return line_of(here);
    if (text[pos] == '{') {
      ++pos;
      bool found = false;
      while (true) {
        skip_ws();
        if (pos >= text.size() || text[pos] != '"') break;
        const std::size_t key_start = pos + 1;
        skip_string();
        const std::string key = text.substr(key_start, pos - key_start - 1);
        skip_ws();
        if (pos < text.size() && text[pos] == ':') ++pos;
        skip_ws();
        if (key == tok) {
          found = true;
          break;
        }
        skip_value();
        skip_ws();
        if (pos < text.size() && text[pos] == ',') ++pos;
      }
      if (!found) return line_of(here);
    } else if (text[pos] == '[') {
      ++pos;
      std::size_t index = 0;
      try {
        index = std::stoul(tok);
      } catch (...) {
        return line_of(here);
      }
      for (std::size_t i = 0; i < index; ++i) {
        skip_value();
        skip_ws();
        if (pos >= text.size() || text[pos] != ',') return line_of(here);
        ++pos;
      }
      skip_ws();
      if (pos >= text.size() || text[pos] == ']') return line_of(here);
    } else {
      return line_of(here);
    }
  }
  return line_of(pos);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot read scenario '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  const std::string text = buffer.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  try {
    return parse_scenario(j);
  } catch (const SchemaError& e) {
    throw ConfigError(path + ":" + std::to_string(locate_line(text, e.pointer())) + ": " + e.what());
  }
}

expspace::Exponent resolve_exponent(const json& spec, const curve::DiscretizedCurve& curve) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "constant") return expspace::Exponent::constant(spec.at("p").get<double>());
  const std::string name = spec.at("name").get<std::string>();
  const json params = spec.value("params", json::object());
  const std::string t = params.value("t", std::string("t"));
  if (name == "log_perturbation") {
    return expspace::log_perturbation(curve, t, params.value("base", 2.0), params.value("amplitude", 0.0));
  }
  return expspace::holder_perturbation(curve, t, params.value("base", 2.0),
                                       params.value("amplitude", 0.0), params.value("power", 0.5),
                                       params.value("frequency", 0.0));
}

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

class Runner {
 public:
  Runner(const Scenario& s, std::string out_dir)
      : s_(s), out_(std::move(out_dir)), curve_(curve::build_curve(s.curve, s.n)),
        exponent_(resolve_exponent(s.exponent, curve_)), positions_(opnum::label_positions(curve_)) {}

  RunResult run() {
    std::filesystem::create_directories(out_);
    for (Task task : s_.tasks) {
      switch (task) {
        case Task::spirality:
          run_spirality();
          break;
        case Task::leaf_plot:
          run_leaf_plot();
          break;
        case Task::fredholm:
          run_fredholm();
          break;
        case Task::symbol_test:
          run_symbol();
          break;
        case Task::verify:
          run_verify();
          break;
      }
    }
    write(out_ + "/verdict.json", dump(verdict_json(result_)));
    return result_;
  }

 private:
  const PointSpec* point_spec(const std::string& label) const {
    for (const auto& p : s_.points) {
      if (p.t_label == label) return &p;
    }
    return nullptr;
  }

  const curve::SpiralityData& estimate(const std::string& label) {
    auto it = estimates_.find(label);
    if (it != estimates_.end()) return it->second;
    const std::vector<double> R = s_.spirality.R_grid.value_or(curve::default_R_grid(curve_));
    return estimates_
        .emplace(label, curve::spirality_indices(curve_, label, s_.spirality.x_small,
                                                 s_.spirality.x_large, R))
        .first->second;
  }

  symbol::LocalData local(const std::string& label) {
    const PointSpec* p = point_spec(label);
    symbol::LocalData d;
    d.p = p && p->p_t ? *p->p_t : exponent_.at(curve_.index_of(label));
    if (p && p->delta_minus) {
      d.delta_minus = *p->delta_minus;
      d.delta_plus = *p->delta_plus;
    } else {
      const curve::SpiralityData& e = estimate(label);
      d.delta_minus = e.delta_minus;
      d.delta_plus = e.delta_plus;
    }
    return d;
  }

  // Listed points first, then jump points of the coefficients.
  std::vector<std::string> labels_of_interest() const {
    std::vector<std::string> labels;
    auto add = [&](const std::string& l) {
      if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    };
    for (const auto& p : s_.points) add(p.t_label);
    for (const auto& [id, c] : s_.coefficients) {
      for (const auto& l : c.jump_labels(positions_)) add(l);
    }
    if (labels.empty()) labels.push_back("t");
    return labels;
  }

  bool spirality_overridden(const std::string& label) const {
    const PointSpec* p = point_spec(label);
    return p && p->delta_minus;
  }

  std::string scalar_coefficient() const {
    if (s_.expression) {
      if (auto id = s_.expression->match_aP_plus_Q(); id && s_.coefficients.at(*id).size() == 1) return *id;
      throw ConfigError("the fredholm task needs an expression of the form a P + Q with scalar a");
    }
    if (s_.coefficients.size() == 1 && s_.coefficients.begin()->second.size() == 1) {
      return s_.coefficients.begin()->first;
    }
    throw ConfigError("the fredholm task needs exactly one scalar coefficient or an a P + Q expression");
  }

  symbol::OperatorExpr expression() const {
    if (s_.expression) return *s_.expression;
    if (s_.coefficients.size() == 1) return symbol::OperatorExpr::aP_plus_Q(s_.coefficients.begin()->first);
    throw ConfigError("no expression given and the coefficient set does not determine a P + Q");
  }

  void run_spirality() {
    result_.spirality.clear();
    for (const auto& label : labels_of_interest()) {
      if (spirality_overridden(label)) continue;
      result_.spirality.push_back({label, estimate(label)});
    }
    write(out_ + "/spirality.json", dump(to_json(result_.spirality)));
  }

  void run_leaf_plot() {
    for (const auto& label : labels_of_interest()) {
      const symbol::LocalData d = local(label);
      const leaf::Leaf L{0.0, 1.0, d.p, d.delta_minus, d.delta_plus};
      emit_leaf_svg(L, leaf::leaf_boundary_sample(L, s_.leaf_samples), out_ + "/leaf_" + label + ".svg");
      result_.files.push_back(out_ + "/leaf_" + label + ".svg");
    }
  }

  void run_fredholm() {
    const std::string id = scalar_coefficient();
    const symbol::PCCoefficient& a = s_.coefficients.at(id);
    std::vector<fredholm::JumpDatum> jumps;
    for (const auto& label : a.jump_labels(positions_)) {
      const symbol::MatrixJump j = a.jump_at(label, positions_);
      const symbol::LocalData d = local(label);
      jumps.push_back({label, j.a_minus(0, 0), j.a_plus(0, 0), d.p, d.delta_minus, d.delta_plus});
    }
    fredholm::CriterionReport report = fredholm::is_fredholm_scalar(jumps);
    // A vanishing value on an arc without jumps also destroys Fredholmness.
    if (jumps.empty() && a.pieces().front().value(0, 0) == Complex{}) report.fredholm = false;
    result_.criterion = report;
  }

  void run_symbol() {
    const symbol::OperatorExpr expr = expression();
    symbol::SymbolContext ctx;
    ctx.coefficients = s_.coefficients;
    ctx.positions = positions_;
    ctx.check(expr);
    for (const auto& id : expr.coefficient_ids()) {
      for (const auto& label : s_.coefficients.at(id).jump_labels(positions_)) {
        ctx.local[label] = local(label);
      }
    }
    result_.symbol = symbol::bundle_fredholm_test(expr, ctx, s_.z_samples);
  }

  void run_verify() {
    result_.trend = opnum::finite_section_trend(expression(), s_.curve, s_.coefficients, s_.verify_sizes);
  }

  void write(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write '" + path + "'");
    file << text;
    if (!file) throw IoError("failed writing '" + path + "'");
    if (std::find(result_.files.begin(), result_.files.end(), path) == result_.files.end()) {
      result_.files.push_back(path);
    }
  }

  const Scenario& s_;
  std::string out_;
  curve::DiscretizedCurve curve_;
  expspace::Exponent exponent_;
  symbol::LabelPositions positions_;
  std::map<std::string, curve::SpiralityData> estimates_;
  RunResult result_;
};

}  // namespace

RunResult run_scenario(const Scenario& scenario, const std::string& out_dir) {
  return Runner(scenario, out_dir).run();
}

int run_scenario_file(const std::string& path, const std::string& out_dir, std::ostream& err) {
  try {
    run_scenario(load_scenario(path), out_dir);
    return 0;
  } catch (const ResolutionError& e) {
    err << "resolution error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

json to_json(const fredholm::CriterionReport& r) {
  json points = json::array();
  for (const auto& p : r.per_point) {
    points.push_back({{"t_label", p.t_label},
                      {"interval_low", p.interval_low},
                      {"interval_high", p.interval_high},
                      {"blocking_integer", p.blocking_integer ? json(*p.blocking_integer) : json(nullptr)},
                      {"degenerate", p.degenerate}});
  }
  return {{"fredholm", r.fredholm}, {"per_point", points}};
}

json to_json(const symbol::BundleVerdict& v) {
  json witness = nullptr;
  if (v.witness) witness = {{"t_label", v.witness->t_label}, {"z", complex_json(v.witness->z)}};
  return {{"fredholm", v.fredholm}, {"min_abs_det", v.min_abs_det}, {"witness", witness}, {"exact", v.exact}};
}

json to_json(const opnum::FiniteSectionReport& r) {
  return {{"sizes", r.sizes}, {"min_svs", r.min_svs}, {"trend", opnum::to_string(r.trend)}};
}

json to_json(const std::vector<SpiralityEntry>& entries) {
  json points = json::array();
  for (const auto& e : entries) {
    points.push_back({{"t_label", e.t_label},
                      {"delta_minus", e.data.delta_minus},
                      {"delta_plus", e.data.delta_plus},
                      {"fit_residual_minus", e.data.fit_residual_minus},
                      {"fit_residual_plus", e.data.fit_residual_plus},
                      {"x_grid", e.data.x_grid},
                      {"W_values", e.data.W_values}});
  }
  return {{"v", 1}, {"points", points}};
}

fredholm::CriterionReport criterion_from_json(const json& j) {
  fredholm::CriterionReport r;
  r.fredholm = j.at("fredholm").get<bool>();
  for (const auto& p : j.at("per_point")) {
    fredholm::PointReport point;
    point.t_label = p.at("t_label").get<std::string>();
    point.interval_low = p.at("interval_low").get<double>();
    point.interval_high = p.at("interval_high").get<double>();
    if (!p.at("blocking_integer").is_null()) point.blocking_integer = p["blocking_integer"].get<long long>();
    point.degenerate = p.at("degenerate").get<bool>();
    r.per_point.push_back(std::move(point));
  }
  return r;
}

symbol::BundleVerdict symbol_from_json(const json& j) {
  symbol::BundleVerdict v;
  v.fredholm = j.at("fredholm").get<bool>();
  v.min_abs_det = j.at("min_abs_det").get<double>();
  v.exact = j.at("exact").get<bool>();
  if (!j.at("witness").is_null()) {
    const json& w = j["witness"];
    v.witness = symbol::Witness{w.at("t_label").get<std::string>(),
                                {w.at("z").at(0).get<double>(), w.at("z").at(1).get<double>()}};
  }
  return v;
}

opnum::FiniteSectionReport trend_from_json(const json& j) {
  opnum::FiniteSectionReport r;
  r.sizes = j.at("sizes").get<std::vector<std::size_t>>();
  r.min_svs = j.at("min_svs").get<std::vector<double>>();
  r.trend = opnum::trend_from_string(j.at("trend").get<std::string>());
  return r;
}

json verdict_json(const RunResult& r) {
  json j = {{"v", 1}};
  if (r.criterion) j["criterion"] = to_json(*r.criterion);
  if (r.symbol) j["symbol"] = to_json(*r.symbol);
  if (r.trend) j["trend"] = to_json(*r.trend);
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace leafspec::cli

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "leafspec/errors.hpp"
#include "leafspec/leafgeom.hpp"
#include "leafspec/scenario.hpp"
#include "leafspec/svg.hpp"

namespace {

using leafspec::cli::json;

std::complex<double> parse_point(const std::string& text) {
  std::stringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw leafspec::ConfigError("cannot parse complex number '" + text + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw leafspec::ConfigError("expected 're,im' but got '" + text + "'");
  }
  return {re, im};
}

json read_curve_spec(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg.front() != '{') {
    std::ifstream file(arg, std::ios::binary);
    if (!file) throw leafspec::IoError("cannot read '" + arg + "'");
    std::stringstream buffer;
    buffer << file.rdbuf();
    text = buffer.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw leafspec::ConfigError(std::string("invalid curve JSON: ") + e.what());
  }
}

template <class F>
int guarded(F&& body) {
  try {
    body();
    return 0;
  } catch (const leafspec::ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return 3;
  } catch (const leafspec::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const leafspec::ParameterError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const leafspec::GeometryError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leaves, spirality and Fredholm criteria for singular integral operators"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--out", out_dir, "Output directory");

  std::string z1 = "0", z2 = "1", leaf_out = "leaf.svg";
  double p = 2.0, dminus = 0.0, dplus = 0.0;
  std::size_t samples = 1024;
  auto* leaf_cmd = app.add_subcommand("leaf", "Plot a logarithmic leaf as SVG");
  leaf_cmd->add_option("--z1", z1, "First endpoint 're,im'");
  leaf_cmd->add_option("--z2", z2, "Second endpoint 're,im'");
  leaf_cmd->add_option("--p", p, "Exponent in (1, inf)");
  leaf_cmd->add_option("--dminus", dminus, "Lower spirality index");
  leaf_cmd->add_option("--dplus", dplus, "Upper spirality index");
  leaf_cmd->add_option("--samples", samples, "Boundary samples");
  leaf_cmd->add_option("--out", leaf_out, "SVG file");

  std::string curve_arg, t_label = "t", spirality_out;
  std::size_t n = 4096;
  auto* spir = app.add_subcommand("spirality", "Estimate spirality indices at a curve point");
  spir->add_option("--curve", curve_arg, "Curve JSON object or file")->required();
  spir->add_option("--t", t_label, "Curve label");
  spir->add_option("--n", n, "Number of curve nodes");
  spir->add_option("--out", spirality_out, "Write JSON here instead of stdout");
  std::vector<double> r_grid;
  spir->add_option("--r-grid", r_grid, "Geometric radius grid: first last count")->expected(3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) return leafspec::cli::run_scenario_file(scenario_path, out_dir, std::cerr);

  if (*leaf_cmd) {
    return guarded([&] {
      const leafspec::leaf::Leaf L{parse_point(z1), parse_point(z2), p, dminus, dplus};
      L.validate();
      leafspec::cli::emit_leaf_svg(L, leafspec::leaf::leaf_boundary_sample(L, samples), leaf_out);
    });
  }

  return guarded([&] {
    std::size_t nodes = n;
    const json spec = read_curve_spec(curve_arg);
    const leafspec::curve::CurveSpec cs = leafspec::cli::parse_curve(spec, "", &nodes);
    if (spir->count("--n") > 0) nodes = n;
    const auto curve = leafspec::curve::build_curve(cs, nodes);
    const auto radii =
        r_grid.empty()
            ? leafspec::curve::default_R_grid(curve)
            : leafspec::curve::geometric_grid(r_grid[0], r_grid[1], static_cast<std::size_t>(r_grid[2]));
    const auto data = leafspec::curve::spirality_indices(
        curve, t_label, leafspec::curve::default_x_small(), leafspec::curve::default_x_large(), radii);
    const std::string text = leafspec::cli::dump(leafspec::cli::to_json({{t_label, data}}));
    if (spirality_out.empty()) {
      std::cout << text;
    } else {
      std::ofstream file(spirality_out, std::ios::binary);
      if (!file) throw leafspec::IoError("cannot write '" + spirality_out + "'");
      file << text;
    }
  });
}

#include "leafspec/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "leafspec/errors.hpp"

namespace leafspec::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string point(const CanvasMap& map, leaf::Complex z) {
  return fmt(map.cx(z.real())) + " " + fmt(map.cy(z.imag()));
}

std::string path_element(const CanvasMap& map, const std::string& label,
                         const std::vector<leaf::Complex>& pts) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d += (i == 0 ? "M" : " L") + point(map, pts[i]);
  }
  return "  <path class=\"boundary\" data-label=\"" + label + "\" d=\"" + d +
         "\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1.5\"/>\n";
}

std::string cross(const CanvasMap& map, leaf::Complex z, const std::string& label) {
  const double x = map.cx(z.real());
  const double y = map.cy(z.imag());
  const double h = 6.0;
  std::string s;
  s += "  <line class=\"endpoint\" data-label=\"" + label + "\" x1=\"" + fmt(x - h) + "\" y1=\"" +
       fmt(y - h) + "\" x2=\"" + fmt(x + h) + "\" y2=\"" + fmt(y + h) +
       "\" stroke=\"#a00\" stroke-width=\"2\"/>\n";
  s += "  <line class=\"endpoint\" data-label=\"" + label + "\" x1=\"" + fmt(x - h) + "\" y1=\"" +
       fmt(y + h) + "\" x2=\"" + fmt(x + h) + "\" y2=\"" + fmt(y - h) +
       "\" stroke=\"#a00\" stroke-width=\"2\"/>\n";
  return s;
}

}  // namespace

CanvasMap leaf_canvas_map(const leaf::Leaf& leaf, const std::vector<leaf::BoundarySample>& samples) {
  double xmin = std::min(leaf.z1.real(), leaf.z2.real());
  double xmax = std::max(leaf.z1.real(), leaf.z2.real());
  double ymin = std::min(leaf.z1.imag(), leaf.z2.imag());
  double ymax = std::max(leaf.z1.imag(), leaf.z2.imag());
  for (const auto& s : samples) {
    xmin = std::min(xmin, s.z.real());
    xmax = std::max(xmax, s.z.real());
    ymin = std::min(ymin, s.z.imag());
    ymax = std::max(ymax, s.z.imag());
  }
  double side = std::max(xmax - xmin, ymax - ymin);
  if (!(side > 0.0)) side = 1.0;
  const double world = side * 1.2;
  CanvasMap map;
  map.x0 = 0.5 * (xmin + xmax) - 0.5 * world;
  map.y1 = 0.5 * (ymin + ymax) + 0.5 * world;
  map.scale = kCanvasSize / world;
  return map;
}

std::string render_leaf_svg(const leaf::Leaf& leaf, const std::vector<leaf::BoundarySample>& samples) {
  if (samples.empty()) throw ParameterError("leaf plot needs samples");
  const CanvasMap map = leaf_canvas_map(leaf, samples);

  std::vector<std::string> order;
  std::map<std::string, std::vector<leaf::Complex>> pieces;
  std::optional<leaf::Complex> median;
  for (const auto& s : samples) {
    if (s.label == "median") {
      median = s.z;
      continue;
    }
    if (!pieces.count(s.label)) order.push_back(s.label);
    pieces[s.label].push_back(s.z);
  }

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
  const bool joined = order.size() == 2 && pieces.count("spiral_z1") && pieces.count("spiral_z2");
  if (joined) {
    std::vector<leaf::Complex> pts(pieces["spiral_z1"].rbegin(), pieces["spiral_z1"].rend());
    if (median) pts.push_back(*median);
    pts.insert(pts.end(), pieces["spiral_z2"].begin(), pieces["spiral_z2"].end());
    out += path_element(map, "spiral", pts);
  } else {
    for (const auto& label : order) {
      std::vector<leaf::Complex> pts;
      if (median) pts.push_back(*median);
      pts.insert(pts.end(), pieces[label].begin(), pieces[label].end());
      out += path_element(map, label, pts);
    }
  }
  if (median) {
    out += "  <circle class=\"median\" cx=\"" + fmt(map.cx(median->real())) + "\" cy=\"" +
           fmt(map.cy(median->imag())) + "\" r=\"5\" fill=\"black\"/>\n";
  }
  out += cross(map, leaf.z1, "z1");
  out += cross(map, leaf.z2, "z2");
  out += "</svg>\n";
  return out;
}

void emit_leaf_svg(const leaf::Leaf& leaf, const std::vector<leaf::BoundarySample>& samples,
                   const std::string& path) {
  const std::string text = render_leaf_svg(leaf, samples);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + path + "'");
  file << text;
  if (!file) throw IoError("failed writing '" + path + "'");
}

}  // namespace leafspec::cli

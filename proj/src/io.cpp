#include "wavectl/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "wavectl/errors.hpp"

namespace wavectl {

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DomainError("cannot open '" + path + "' for writing");
  }
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) {
    throw DomainError("write to '" + path + "' failed");
  }
}

std::string csv_document(std::span<const std::string> header,
                         const std::vector<std::vector<double>>& rows) {
  std::string doc;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i != 0) doc += ',';
    doc += header[i];
  }
  doc += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i != 0) doc += ',';
      doc += format_full(row[i]);
    }
    doc += '\n';
  }
  return doc;
}

namespace {

std::string fixed8(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8f", value);
  return buf;
}

}  // namespace

std::string svg_closed_curve(std::span<const double> xs,
                             std::span<const double> ys,
                             double margin_fraction) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvariantError("svg_closed_curve needs two matching point lists");
  }
  double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0];
  for (std::size_t i = 1; i < xs.size(); ++i) {
    xmin = std::min(xmin, xs[i]);
    xmax = std::max(xmax, xs[i]);
    ymin = std::min(ymin, ys[i]);
    ymax = std::max(ymax, ys[i]);
  }
  double side = std::max(xmax - xmin, ymax - ymin);
  if (!(side > 0.0)) side = 1.0;
  const double margin = margin_fraction * side;
  // Screen y grows downward, so points enter the path as (x, -y).
  const double vx = xmin - margin;
  const double vy = -(ymax + margin);
  const double vw = (xmax - xmin) + 2.0 * margin;
  const double vh = (ymax - ymin) + 2.0 * margin;
  const int width_px = 512;
  const int height_px = std::max(1, static_cast<int>(std::lround(512.0 * vh / vw)));

  std::string doc = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  doc += std::to_string(width_px);
  doc += "\" height=\"";
  doc += std::to_string(height_px);
  doc += "\" viewBox=\"";
  doc += fixed8(vx);
  doc += ' ';
  doc += fixed8(vy);
  doc += ' ';
  doc += fixed8(vw);
  doc += ' ';
  doc += fixed8(vh);
  doc += "\">\n  <path d=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    doc += (i == 0) ? "M " : " L ";
    doc += fixed8(xs[i]);
    doc += ' ';
    doc += fixed8(-ys[i]);
  }
  doc += " Z\" fill=\"none\" stroke=\"#1a1a1a\" stroke-width=\"";
  doc += fixed8(0.01 * side);
  doc += "\"/>\n</svg>\n";
  return doc;
}

}  // namespace wavectl

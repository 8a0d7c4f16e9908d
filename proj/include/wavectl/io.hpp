#pragma once

#include <span>
#include <string>
#include <vector>

namespace wavectl {

// Shortest text form of a double that round-trips exactly ("%.17g").
std::string format_full(double value);

// Writes body to path verbatim (binary mode, so LF stays LF). Throws
// DomainError when the file cannot be created or the stream fails.
void write_text_file(const std::string& path, const std::string& body);

// One header row followed by numeric rows, each value rendered with
// format_full, comma separators, LF line endings.
std::string csv_document(std::span<const std::string> header,
                         const std::vector<std::vector<double>>& rows);

// Standalone SVG of a closed planar polyline. The viewBox is the curve's
// bounding box grown by margin_fraction of its larger side on every edge;
// coordinates are emitted with fixed precision so identical curves yield
// identical bytes.
std::string svg_closed_curve(std::span<const double> xs,
                             std::span<const double> ys,
                             double margin_fraction = 0.05);

}  // namespace wavectl

#include "rsphere/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rsphere {

std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_curve_csv(const std::string& path, const std::vector<double>& svals,
                     const std::vector<Vector>& points) {
  if (svals.size() != points.size())
    throw std::invalid_argument("write_curve_csv: length mismatch");
  std::ofstream out = open_or_throw(path);
  const int m = points.empty() ? 0 : static_cast<int>(points.front().size());
  out << "s";
  for (int i = 1; i <= m; ++i) out << ",x" << i;
  out << "\n";
  for (std::size_t k = 0; k < svals.size(); ++k) {
    out << format_sig17(svals[k]);
    for (int i = 0; i < m; ++i) out << "," << format_sig17(points[k][i]);
    out << "\n";
  }
}

void write_points_csv(const std::string& path, double t,
                      const std::vector<SpherePoint>& points) {
  std::ofstream out = open_or_throw(path);
  const int m = points.empty() ? 0 : points.front().ambient_dim();
  out << "t";
  for (int i = 1; i <= m; ++i) out << ",x" << i;
  out << "\n";
  for (const SpherePoint& p : points) {
    out << format_sig17(t);
    for (int i = 0; i < m; ++i) out << "," << format_sig17(p.coords()[i]);
    out << "\n";
  }
}

void write_points_ply(const std::string& path, const std::vector<SpherePoint>& points,
                      const std::string& comment) {
  std::ofstream out = open_or_throw(path);
  const int m = points.empty() ? 3 : points.front().ambient_dim();
  out << "ply\nformat ascii 1.0\n";
  if (!comment.empty()) out << "comment " << comment << "\n";
  out << "element vertex " << points.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  for (int i = 4; i <= m; ++i) out << "property double x" << i << "\n";
  out << "end_header\n";
  for (const SpherePoint& p : points) {
    for (int i = 0; i < std::max(m, 3); ++i)
      out << (i ? " " : "") << format_sig17(i < m ? p.coords()[i] : 0.0);
    out << "\n";
  }
}

}  // namespace rsphere

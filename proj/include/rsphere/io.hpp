// CSV / PLY emission with fixed 17-significant-digit formatting.
#pragma once

#include <string>
#include <vector>

#include "rsphere/skew.hpp"

namespace rsphere {

std::string format_sig17(double v);

// Header s,x1,...,x{n+1}; one row per sample.
void write_curve_csv(const std::string& path, const std::vector<double>& svals,
                     const std::vector<Vector>& points);

// Header t,x1,...,x{n+1}; the parameter repeats per row.
void write_points_csv(const std::string& path, double t,
                      const std::vector<SpherePoint>& points);

// ASCII point cloud: properties x,y,z plus x4.. for higher ambient dims.
void write_points_ply(const std::string& path, const std::vector<SpherePoint>& points,
                      const std::string& comment);

}  // namespace rsphere

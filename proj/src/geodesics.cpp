#include "rsphere/geodesics.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace rsphere {

GeodesicSpec::GeodesicSpec(SkewGenerator Q, SpherePoint x, Vector X, Vector xbar)
    : Q_(std::move(Q)), x_(std::move(x)), X_(std::move(X)), xbar_(std::move(xbar)) {}

GeodesicSpec GeodesicSpec::from_velocity(SkewGenerator Q, SpherePoint x, TangentVector X) {
  if (!Q.admissible()) throw std::invalid_argument("GeodesicSpec: Q is not admissible");
  if ((X.base().coords() - x.coords()).norm() > 1e-12)
    throw std::invalid_argument("GeodesicSpec: velocity is not based at x");
  Vector xbar = X.vec() - Q.apply(x.coords());
  if (std::fabs(xbar.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("GeodesicSpec: F_Q(x, X) != 1 (navigation part |X - Qx| deviates from 1)");
  return GeodesicSpec(std::move(Q), std::move(x), X.vec(), std::move(xbar));
}

GeodesicSpec GeodesicSpec::from_navigation(SkewGenerator Q, SpherePoint x, Vector xbar) {
  if (!Q.admissible()) throw std::invalid_argument("GeodesicSpec: Q is not admissible");
  if (std::fabs(xbar.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("GeodesicSpec: |xbar| must be 1");
  if (std::fabs(x.coords().dot(xbar)) > 1e-10)
    throw std::invalid_argument("GeodesicSpec: xbar must be tangent at x");
  Vector X = xbar + Q.apply(x.coords());
  return GeodesicSpec(std::move(Q), std::move(x), std::move(X), std::move(xbar));
}

GeodesicSpec GeodesicSpec::from_direction(SkewGenerator Q, SpherePoint x, const Vector& direction) {
  TangentVector d = TangentVector::project(x, direction);
  if (d.norm() < 1e-12) throw std::invalid_argument("GeodesicSpec: zero direction");
  const double F = randers_F_ambient(Q, x.coords(), d.vec());
  TangentVector X(x, d.vec() / F);
  return from_velocity(std::move(Q), std::move(x), std::move(X));
}

SpherePoint geodesic_eval(const GeodesicSpec& G, double s) {
  const Vector inner = std::cos(s) * G.start().coords() + std::sin(s) * G.navigation_direction();
  return SpherePoint::project(G.generator().apply_exp(s, inner));
}

TangentVector geodesic_velocity(const GeodesicSpec& G, double s) {
  const Vector& x = G.start().coords();
  const Vector& xb = G.navigation_direction();
  const Vector inner = std::cos(s) * x + std::sin(s) * xb;
  const Vector dinner = -std::sin(s) * x + std::cos(s) * xb;
  const Vector vel = G.generator().apply_exp(s, G.generator().apply(inner) + dinner);
  return TangentVector(geodesic_eval(G, s), vel);
}

SkewGenerator s2_generator(double a, double b, double c) {
  Matrix Q(3, 3);
  Q << 0, a, b, -a, 0, c, -b, -c, 0;
  return SkewGenerator(Q);
}

GeodesicSpec s2_spec(double a, double b, double c) {
  SkewGenerator Q = s2_generator(a, b, c);
  if (!Q.admissible())
    throw std::invalid_argument("s2_spec: (a, b, c) is inadmissible, |V| reaches 1");
  Vector x(3), xb(3);
  x << 1, 0, 0;
  xb << 0, 1, 0;
  return GeodesicSpec::from_navigation(std::move(Q), SpherePoint(x), xb);
}

SpherePoint s2_geodesic(double a, double b, double c, double s) {
  if (!s2_generator(a, b, c).admissible())
    throw std::invalid_argument("s2_geodesic: (a, b, c) is inadmissible");
  const double u = (1.0 - a) * s;
  Vector g(3);
  g << std::cos(b * s) * std::cos(u),
      std::cos(c * s) * std::sin(u) - std::sin(b * s) * std::sin(c * s) * std::cos(u),
      -std::sin(b * s) * std::cos(c * s) * std::cos(u) - std::sin(u) * std::sin(c * s);
  return SpherePoint::project(g);
}

ClosednessReport classify_closedness(double a, double b, double c, double tolerance,
                                     long long max_denominator) {
  if (std::fabs(1.0 - a) < 1e-12)
    throw std::invalid_argument("classify_closedness: a = 1 degenerates the base frequency");
  if (!s2_generator(a, b, c).admissible())
    throw std::invalid_argument("classify_closedness: (a, b, c) is inadmissible");
  if (tolerance <= 0.0) throw std::invalid_argument("classify_closedness: tolerance must be positive");

  ClosednessReport rep;
  rep.tolerance = tolerance;
  rep.max_denominator = max_denominator;
  rep.first_ratio = best_rational(b / (1.0 - a), max_denominator);
  rep.second_ratio = best_rational(c / (1.0 - a), max_denominator);

  const double worst = std::max(rep.first_ratio.scaled_error, rep.second_ratio.scaled_error);
  if (worst <= tolerance) {
    rep.verdict = Closedness::Closed;
    const long long L = std::lcm(rep.first_ratio.den, rep.second_ratio.den);
    rep.period = 2.0 * M_PI * static_cast<double>(L) / (1.0 - a);
  } else if (worst <= 10.0 * tolerance) {
    rep.verdict = Closedness::Undecided;
  } else {
    rep.verdict = Closedness::NonClosed;
  }
  return rep;
}

namespace {

// Central-difference partials of L = F^2 under the ambient extension.
Vector dL_dx(const SkewGenerator& Q, const Vector& x, const Vector& y, double h) {
  Vector g(x.size());
  Vector probe = x;
  for (int i = 0; i < x.size(); ++i) {
    const double xi = probe[i];
    probe[i] = xi + h;
    double Fp = randers_F_ambient(Q, probe, y);
    probe[i] = xi - h;
    double Fm = randers_F_ambient(Q, probe, y);
    probe[i] = xi;
    g[i] = (Fp * Fp - Fm * Fm) / (2.0 * h);
  }
  return g;
}

Vector dL_dy(const SkewGenerator& Q, const Vector& x, const Vector& y, double h) {
  Vector g(y.size());
  Vector probe = y;
  for (int i = 0; i < y.size(); ++i) {
    const double yi = probe[i];
    probe[i] = yi + h;
    double Fp = randers_F_ambient(Q, x, probe);
    probe[i] = yi - h;
    double Fm = randers_F_ambient(Q, x, probe);
    probe[i] = yi;
    g[i] = (Fp * Fp - Fm * Fm) / (2.0 * h);
  }
  return g;
}

}  // namespace

double el_residual(const SkewGenerator& Q, const std::vector<Vector>& samples, double ds) {
  if (ds <= 0.0 || ds > 1e-3 + 1e-15)
    throw std::invalid_argument("el_residual: step must satisfy 0 < ds <= 1e-3");
  if (samples.size() < 7)
    throw std::invalid_argument("el_residual: need at least 7 samples");
  for (const Vector& p : samples)
    if (std::fabs(p.norm() - 1.0) > 1e-8)
      throw std::invalid_argument("el_residual: curve leaves the sphere beyond 1e-8");

  const double h = 1e-6;
  const std::size_t N = samples.size();

  // Velocities by central differences of positions; momenta p = dL/dy.
  std::vector<Vector> momentum(N);
  std::vector<Vector> velocity(N);
  for (std::size_t k = 1; k + 1 < N; ++k) {
    velocity[k] = (samples[k + 1] - samples[k - 1]) / (2.0 * ds);
    momentum[k] = dL_dy(Q, samples[k], velocity[k], h);
  }

  double worst = 0.0;
  for (std::size_t k = 2; k + 2 < N; ++k) {
    const Vector dpds = (momentum[k + 1] - momentum[k - 1]) / (2.0 * ds);
    const Vector R = dpds - dL_dx(Q, samples[k], velocity[k], h);
    const Vector xhat = samples[k] / samples[k].norm();
    const Vector tangential = R - R.dot(xhat) * xhat;
    worst = std::max(worst, tangential.norm());
  }
  return worst;
}

namespace {

struct Candidate {
  double s1, s2;
};

// Polish on positions alone (works when the branches cross transversally).
bool polish_transversal(const GeodesicSpec& G, double& s1, double& s2) {
  for (int it = 0; it < 40; ++it) {
    const Vector r = geodesic_eval(G, s1).coords() - geodesic_eval(G, s2).coords();
    Eigen::Matrix<double, Eigen::Dynamic, 2> J(r.size(), 2);
    J.col(0) = geodesic_velocity(G, s1).vec();
    J.col(1) = -geodesic_velocity(G, s2).vec();
    Eigen::Matrix2d JtJ = J.transpose() * J;
    JtJ += 1e-14 * Eigen::Matrix2d::Identity();
    const Eigen::Vector2d delta = JtJ.ldlt().solve(J.transpose() * r);
    s1 -= delta[0];
    s2 -= delta[1];
    if (delta.norm() < 1e-14) break;
  }
  return (geodesic_eval(G, s1).coords() - geodesic_eval(G, s2).coords()).norm() < 1e-10;
}

// Tangential crossings have parallel velocities, so the position Jacobian is
// rank-deficient; stacking the velocity-match equations restores full rank.
bool polish_tangential(const GeodesicSpec& G, double& s1, double& s2, double sign) {
  const auto resid = [&](double t1, double t2) {
    const Vector r1 = geodesic_eval(G, t1).coords() - geodesic_eval(G, t2).coords();
    Vector v1 = geodesic_velocity(G, t1).vec();
    Vector v2 = geodesic_velocity(G, t2).vec();
    const Vector r2 = v1.normalized() - sign * v2.normalized();
    Vector r(r1.size() + r2.size());
    r << r1, r2;
    return r;
  };
  const double fd = 1e-7;
  for (int it = 0; it < 60; ++it) {
    const Vector r = resid(s1, s2);
    Eigen::Matrix<double, Eigen::Dynamic, 2> J(r.size(), 2);
    J.col(0) = (resid(s1 + fd, s2) - resid(s1 - fd, s2)) / (2.0 * fd);
    J.col(1) = (resid(s1, s2 + fd) - resid(s1, s2 - fd)) / (2.0 * fd);
    Eigen::Matrix2d JtJ = J.transpose() * J;
    JtJ += 1e-13 * JtJ.trace() * Eigen::Matrix2d::Identity();
    const Eigen::Vector2d delta = JtJ.ldlt().solve(J.transpose() * r);
    s1 -= delta[0];
    s2 -= delta[1];
    if (delta.norm() < 1e-13) break;
  }
  return (geodesic_eval(G, s1).coords() - geodesic_eval(G, s2).coords()).norm() < 1e-10;
}

}  // namespace

std::vector<SelfIntersection> find_self_intersections(const GeodesicSpec& G, double s_max,
                                                      double grid_step, double min_separation) {
  if (s_max <= 0.0 || grid_step <= 0.0)
    throw std::invalid_argument("find_self_intersections: bad window");
  const int N = static_cast<int>(std::ceil(s_max / grid_step)) + 1;
  std::vector<Vector> pts(N);
  for (int i = 0; i < N; ++i) pts[i] = geodesic_eval(G, i * grid_step).coords();

  const double capture = 2.0 * grid_step;
  std::vector<Candidate> cands;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      if ((j - i) * grid_step < min_separation) continue;
      if ((pts[i] - pts[j]).norm() > capture) continue;
      const double s1 = i * grid_step, s2 = j * grid_step;
      bool dup = false;
      for (const auto& c : cands)
        if (std::fabs(c.s1 - s1) < 5.0 * grid_step && std::fabs(c.s2 - s2) < 5.0 * grid_step)
          dup = true;
      if (!dup) cands.push_back({s1, s2});
    }

  std::vector<SelfIntersection> out;
  for (const auto& c : cands) {
    double s1 = c.s1, s2 = c.s2;
    // Decide branch geometry from the coarse velocities.
    const Vector v1 = geodesic_velocity(G, s1).vec().normalized();
    const Vector v2 = geodesic_velocity(G, s2).vec().normalized();
    const double align = v1.dot(v2);
    bool ok = false;
    if (std::fabs(align) > 0.9)
      ok = polish_tangential(G, s1, s2, align > 0.0 ? 1.0 : -1.0);
    else
      ok = polish_transversal(G, s1, s2);
    if (!ok) continue;
    if (s1 < -grid_step || s2 > s_max + grid_step || s2 - s1 < min_separation) continue;
    bool dup = false;
    for (const auto& r : out)
      if (std::fabs(r.s1 - s1) < 1e-6 && std::fabs(r.s2 - s2) < 1e-6) dup = true;
    if (dup) continue;
    SelfIntersection si;
    si.s1 = s1;
    si.s2 = s2;
    si.point = geodesic_eval(G, s1).coords();
    si.velocity_alignment =
        geodesic_velocity(G, s1).vec().normalized().dot(geodesic_velocity(G, s2).vec().normalized());
    out.push_back(std::move(si));
  }
  return out;
}

void sample_geodesic(const GeodesicSpec& G, double s0, double s1, int count,
                     std::vector<double>& svals, std::vector<Vector>& points) {
  if (count < 2) throw std::invalid_argument("sample_geodesic: count must be at least 2");
  svals.resize(count);
  points.resize(count);
  for (int i = 0; i < count; ++i) {
    const double s = s0 + (s1 - s0) * static_cast<double>(i) / (count - 1);
    svals[i] = s;
    points[i] = geodesic_eval(G, s).coords();
  }
}

}  // namespace rsphere

#include "rsphere/metric.hpp"

#include <cmath>

namespace rsphere {

bool verify_homogeneity(const ScalarField& f, int ambient_dim, int samples,
                        std::uint64_t seed, double tol) {
  RandomStream rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Vector x = rng.unit_vector(ambient_dim) * rng.uniform(0.5, 1.5);
    const double t = rng.uniform(0.2, 5.0);
    const double lhs = f(t * x);
    const double rhs = std::pow(t, f.degree) * f(x);
    const double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    if (std::fabs(lhs - rhs) > tol * scale) return false;
  }
  return true;
}

NavigationDatum::NavigationDatum(SkewGenerator Q) : Q_(std::move(Q)) {
  if (!Q_.admissible())
    throw std::invalid_argument("NavigationDatum: Q is not admissible, F_Q would degenerate");
}

double randers_F_ambient(const SkewGenerator& Q, const Vector& x, const Vector& y) {
  const Vector V = Q.apply(x);
  const double lambda = 1.0 - V.squaredNorm();
  if (lambda <= 0.0)
    throw std::invalid_argument("randers_F_ambient: |Qx| >= 1 at the evaluation point");
  const double v0 = V.dot(y);
  const double s = std::sqrt(lambda * y.squaredNorm() + v0 * v0);
  return (s - v0) / lambda;
}

double metric_eval(const NavigationDatum& D, const SpherePoint& x, const TangentVector& y) {
  if ((y.base().coords() - x.coords()).norm() > 1e-12)
    throw std::invalid_argument("metric_eval: tangent vector is not based at x");
  return randers_F_ambient(D.generator(), x.coords(), y.vec());
}

double dual_norm(const NavigationDatum& D, const SpherePoint& x, const TangentVector& gradh) {
  return gradh.vec().norm() + gradh.vec().dot(D.generator().apply(x.coords()));
}

TangentVector sphere_gradient(const ScalarField& u, const SpherePoint& x, double step) {
  if (u.degree != 0)
    throw std::invalid_argument("sphere_gradient: field must be the degree-0 extension");
  const int m = x.ambient_dim();
  Vector g(m);
  Vector probe = x.coords();
  for (int i = 0; i < m; ++i) {
    const double xi = probe[i];
    probe[i] = xi + step;
    const double up = u(probe);
    probe[i] = xi - step;
    const double um = u(probe);
    probe[i] = xi;
    g[i] = (up - um) / (2.0 * step);
  }
  return TangentVector::project(x, g);
}

double sphere_laplacian(const ScalarField& u, const SpherePoint& x, double step, int order) {
  if (u.degree != 0)
    throw std::invalid_argument("sphere_laplacian: field must be the degree-0 extension");
  if (step < 1e-8) throw std::invalid_argument("sphere_laplacian: step underflow");
  if (order != 2 && order != 4) throw std::invalid_argument("sphere_laplacian: order must be 2 or 4");
  const int m = x.ambient_dim();
  const double u0 = u(x.coords());
  Vector probe = x.coords();
  double lap = 0.0;
  for (int i = 0; i < m; ++i) {
    const double xi = probe[i];
    if (order == 2) {
      probe[i] = xi + step;
      const double up = u(probe);
      probe[i] = xi - step;
      const double um = u(probe);
      lap += (up - 2.0 * u0 + um) / (step * step);
    } else {
      probe[i] = xi + 2.0 * step;
      const double up2 = u(probe);
      probe[i] = xi + step;
      const double up1 = u(probe);
      probe[i] = xi - step;
      const double um1 = u(probe);
      probe[i] = xi - 2.0 * step;
      const double um2 = u(probe);
      lap += (-up2 + 16.0 * up1 - 30.0 * u0 + 16.0 * um1 - um2) / (12.0 * step * step);
    }
    probe[i] = xi;
  }
  return lap;
}

IsoSystemValues iso_system_lhs(const NavigationDatum& D, const ScalarField& u,
                               const SpherePoint& x, double step1, double step2) {
  const SkewGenerator& Q = D.generator();
  const TangentVector gf = sphere_gradient(u, x, step1);
  const double ng = gf.norm();
  if (ng < 1e-7)
    throw degenerate_point_error("iso_system_lhs: |grad u| below 1e-7 (focal or critical point)");

  IsoSystemValues out;
  out.a_value = ng + gf.vec().dot(Q.apply(x.coords()));

  // w = <grad_h u, V> as its own degree-0 field, differentiated in turn.
  ScalarField w{0, [&u, &Q, step1](const Vector& z) {
                  const SpherePoint zs = SpherePoint::project(z);
                  const TangentVector g2 = sphere_gradient(u, zs, step1);
                  return g2.vec().dot(Q.apply(zs.coords()));
                }};
  const TangentVector gw = sphere_gradient(w, x, step1);
  out.b_value = sphere_laplacian(u, x, step2) / ng + gw.vec().dot(gf.vec()) / (ng * ng);
  return out;
}

}  // namespace rsphere

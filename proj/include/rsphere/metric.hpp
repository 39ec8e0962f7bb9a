// The Randers metric F_Q produced by navigation from the round sphere metric
// and the Killing field V = Qx, its dual norm on gradients, and sphere
// differential operators built from ambient finite differences of degree-0
// homogeneous extensions.
#pragma once

#include <functional>

#include "rsphere/skew.hpp"

namespace rsphere {

// Ambient scalar field with a declared positive homogeneity degree.
struct ScalarField {
  int degree = 0;
  std::function<double(const Vector&)> eval;
  double operator()(const Vector& x) const { return eval(x); }
};

// Checks f(t x) = t^k f(x) on random rays.
bool verify_homogeneity(const ScalarField& f, int ambient_dim, int samples,
                        std::uint64_t seed, double tol = 1e-8);

// Navigation datum (h, V = Qx) with h the round metric; requires |V| < 1.
class NavigationDatum {
 public:
  explicit NavigationDatum(SkewGenerator Q);
  const SkewGenerator& generator() const { return Q_; }
  int ambient_dim() const { return Q_.ambient_dim(); }

 private:
  SkewGenerator Q_;
};

// F at an arbitrary ambient point and vector, with V = Qx and Euclidean h:
//   F = (sqrt(lambda |y|^2 + V0^2) - V0) / lambda,
//   lambda = 1 - |Qx|^2, V0 = <Qx, y>.
// Restricted to tangent vectors on the sphere this is exactly F_Q.
double randers_F_ambient(const SkewGenerator& Q, const Vector& x, const Vector& y);

double metric_eval(const NavigationDatum& D, const SpherePoint& x, const TangentVector& y);

// Finsler norm of the Legendre gradient, without building the transform:
// F_Q(grad u) = |grad_h u| + <grad_h u, Qx>.
double dual_norm(const NavigationDatum& D, const SpherePoint& x, const TangentVector& gradh);

// grad_h of a degree-0 field by ambient central differences, projected
// tangentially. Throws std::invalid_argument unless u.degree == 0.
TangentVector sphere_gradient(const ScalarField& u, const SpherePoint& x, double step = 1e-5);

// Laplacian of the degree-0 extension at |x| = 1 (equals the sphere
// Laplacian); order 2 or 4 central stencils.
double sphere_laplacian(const ScalarField& u, const SpherePoint& x, double step = 1e-4,
                        int order = 2);

class degenerate_point_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IsoSystemValues {
  double a_value = 0.0;  // |du|_h + <du, V>
  double b_value = 0.0;  // lap u / |du| + <d<du,V>, du> / |du|^2  (div V = 0)
};

// Left-hand sides of the Randers isoparametric system. Throws
// degenerate_point_error when |grad_h u| < 1e-7.
IsoSystemValues iso_system_lhs(const NavigationDatum& D, const ScalarField& u,
                               const SpherePoint& x, double step1 = 1e-5,
                               double step2 = 1e-4);

}  // namespace rsphere

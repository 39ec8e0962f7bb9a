// Level-set samples with Finsler unit normals, the tube map tau_s(x) =
// exp(sQ)((cos s)x + sin s(n - V)), isoparametric family snapshots, focal
// submanifolds at s = +-pi/(2g), and the finite-difference focal rank test.
#pragma once

#include "rsphere/geodesics.hpp"
#include "rsphere/isoparametric.hpp"

namespace rsphere {

struct LevelSample {
  std::vector<SpherePoint> points;     // on {phi/|x|^g = level}
  std::vector<TangentVector> normals;  // Finsler unit normals n = nbar + Qx
  double level = 0.0;
  std::uint64_t seed = 0;
};

// Newton-projected random samples of the level set, with normals oriented
// toward increasing phi.
LevelSample sample_level(const CMPolynomial& phi, const SkewGenerator& Q, double t0,
                         int count, std::uint64_t seed);

// Normal geodesic displacement by Finsler distance s.
SpherePoint tube_map(const SkewGenerator& Q, const SpherePoint& x, const TangentVector& n,
                     double s);

struct FamilySnapshot {
  std::optional<double> t;  // level parameter in (-1, 1); empty for focal sets
  int focal_sign = 0;       // +1 / -1 for the focal submanifolds
  std::vector<SpherePoint> points;
};

// Pushes a base sample to the level-t member of the family: the riemannian
// tube over zeta(t) - zeta(L.level), flowed by exp(zeta(t) Q). For a
// level-0 base this is tube_map with s = zeta(t). With verify set, every
// output is checked to satisfy iso_eval = t within 1e-8.
FamilySnapshot family_snapshot(const IsoFunction& F, const LevelSample& L, double t,
                               bool verify = false);

// M_{+-} = tau_{+- pi/(2g)}(M); each output is checked against the focal
// degeneracy proxy g sqrt(1 - f^2) < 1e-4.
std::pair<FamilySnapshot, FamilySnapshot> focal_submanifolds(const IsoFunction& F,
                                                             const LevelSample& L);

// Orthonormal basis of the hypersurface tangent space at x (orthogonal to x
// and to the level normal).
std::vector<Vector> level_tangent_basis(const CMPolynomial& phi, const SpherePoint& x);

// Singular values of d tau_s restricted to the hypersurface tangents,
// by central differences with level re-projection. Descending order.
Vector focal_rank_singular_values(const IsoFunction& F, const SpherePoint& x,
                                  const TangentVector& n, const std::vector<Vector>& basis,
                                  double s, double fd_step = 1e-5);

}  // namespace rsphere

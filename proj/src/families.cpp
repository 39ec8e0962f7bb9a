#include "rsphere/families.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace rsphere {

LevelSample sample_level(const CMPolynomial& phi, const SkewGenerator& Q, double t0,
                         int count, std::uint64_t seed) {
  if (phi.ambient_dim() != Q.ambient_dim())
    throw std::invalid_argument("sample_level: dimension mismatch");
  if (!Q.admissible()) throw std::invalid_argument("sample_level: Q is not admissible");

  LevelSample out;
  out.level = t0;
  out.seed = seed;
  out.points = sample_polynomial_level(phi, t0, count, seed);
  out.normals.reserve(out.points.size());
  for (const SpherePoint& x : out.points) {
    const Vector gh = phi.sphere_gradient_exact(x);
    const double ng = gh.norm();
    if (ng < 1e-10)
      throw std::runtime_error("sample_level: degenerate gradient on a regular level");
    out.normals.emplace_back(x, Vector(gh / ng + Q.apply(x.coords())));
  }
  return out;
}

SpherePoint tube_map(const SkewGenerator& Q, const SpherePoint& x, const TangentVector& n,
                     double s) {
  if ((n.base().coords() - x.coords()).norm() > 1e-12)
    throw std::invalid_argument("tube_map: normal is not based at x");
  const Vector nbar = n.vec() - Q.apply(x.coords());
  if (std::fabs(nbar.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("tube_map: F_Q(x, n) != 1 (|n - Qx| deviates from 1)");
  const Vector inner = std::cos(s) * x.coords() + std::sin(s) * nbar;
  return SpherePoint::project(Q.apply_exp(s, inner));
}

namespace {

// A base sample sits on the riemannian level L.level; the family member at
// level t is reached by the riemannian tube over the zeta difference,
// flowed by the absolute angle zeta(t). For a level-0 base this is exactly
// tube_map with s = zeta(t).
SpherePoint transported_point(const IsoFunction& F, const SpherePoint& x,
                              const TangentVector& n, double flow_angle, double base_zeta) {
  const Vector nbar = n.vec() - F.generator().apply(x.coords());
  const double delta = flow_angle - base_zeta;
  const Vector bar = std::cos(delta) * x.coords() + std::sin(delta) * nbar;
  return SpherePoint::project(F.generator().apply_exp(flow_angle, bar));
}

}  // namespace

FamilySnapshot family_snapshot(const IsoFunction& F, const LevelSample& L, double t,
                               bool verify) {
  if (std::fabs(t) >= 1.0)
    throw std::invalid_argument("family_snapshot: t must lie in (-1, 1)");
  const double base_zeta = F.zeta(L.level);
  FamilySnapshot snap;
  snap.t = t;
  snap.points.reserve(L.points.size());
  for (std::size_t i = 0; i < L.points.size(); ++i) {
    SpherePoint y = transported_point(F, L.points[i], L.normals[i], F.zeta(t), base_zeta);
    if (verify) {
      const double fv = F.iso_eval(y);
      if (std::fabs(fv - t) > 1e-8) {
        std::ostringstream msg;
        msg << "family_snapshot: iso_eval = " << fv << " misses level " << t;
        throw std::runtime_error(msg.str());
      }
    }
    snap.points.push_back(std::move(y));
  }
  return snap;
}

std::pair<FamilySnapshot, FamilySnapshot> focal_submanifolds(const IsoFunction& F,
                                                             const LevelSample& L) {
  const double s = M_PI / (2.0 * F.degree());
  FamilySnapshot plus, minus;
  plus.focal_sign = +1;
  minus.focal_sign = -1;
  plus.points.reserve(L.points.size());
  minus.points.reserve(L.points.size());
  const int g = F.degree();
  const double base_zeta = F.zeta(L.level);
  for (std::size_t i = 0; i < L.points.size(); ++i) {
    SpherePoint yp = transported_point(F, L.points[i], L.normals[i], s, base_zeta);
    SpherePoint ym = transported_point(F, L.points[i], L.normals[i], -s, base_zeta);
    for (const SpherePoint* y : {&yp, &ym}) {
      const double fv = F.polynomial().restricted(F.psi_inverse(*y).coords());
      const double proxy = g * std::sqrt(std::max(0.0, 1.0 - fv * fv));
      if (proxy >= 1e-4) {
        std::ostringstream msg;
        msg << "focal_submanifolds: gradient proxy " << proxy << " not degenerate at a focal point";
        throw std::runtime_error(msg.str());
      }
    }
    plus.points.push_back(std::move(yp));
    minus.points.push_back(std::move(ym));
  }
  return {std::move(plus), std::move(minus)};
}

std::vector<Vector> level_tangent_basis(const CMPolynomial& phi, const SpherePoint& x) {
  const int m = phi.ambient_dim();
  const Vector gh = phi.sphere_gradient_exact(x);
  const double ng = gh.norm();
  if (ng < 1e-10) throw std::invalid_argument("level_tangent_basis: focal point");

  std::vector<Vector> basis;
  basis.reserve(m - 2);
  std::vector<Vector> frame = {x.coords(), gh / ng};
  for (int i = 0; i < m && static_cast<int>(basis.size()) < m - 2; ++i) {
    Vector v = Vector::Unit(m, i);
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& f : frame) v -= f.dot(v) * f;
      for (const Vector& b : basis) v -= b.dot(v) * b;
    }
    const double nv = v.norm();
    if (nv < 1e-6) continue;
    basis.push_back(v / nv);
  }
  if (static_cast<int>(basis.size()) != m - 2)
    throw std::runtime_error("level_tangent_basis: failed to complete the frame");
  return basis;
}

Vector focal_rank_singular_values(const IsoFunction& F, const SpherePoint& x,
                                  const TangentVector& n, const std::vector<Vector>& basis,
                                  double s, double fd_step) {
  const CMPolynomial& phi = F.polynomial();
  const SkewGenerator& Q = F.generator();
  const double t0 = phi.restricted(x.coords());
  const Vector nbar_ref = n.vec() - Q.apply(x.coords());

  // Moving along the hypersurface: re-project to the level, rebuild the
  // normal there, then push through the tube.
  const auto tube_at = [&](const Vector& seed_pt) {
    SpherePoint q = project_to_level(phi, t0, SpherePoint::project(seed_pt));
    const Vector gh = phi.sphere_gradient_exact(q);
    Vector nb = gh / gh.norm();
    if (nb.dot(nbar_ref) < 0.0) nb = -nb;  // keep the orientation of the input normal
    const TangentVector nn(q, Vector(nb + Q.apply(q.coords())));
    return tube_map(Q, q, nn, s);
  };

  const int m = x.ambient_dim();
  Matrix J(m, static_cast<int>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Vector plus = tube_at(x.coords() + fd_step * basis[k]).coords();
    const Vector minus = tube_at(x.coords() - fd_step * basis[k]).coords();
    J.col(static_cast<int>(k)) = (plus - minus) / (2.0 * fd_step);
  }
  Eigen::JacobiSVD<Matrix> svd(J);
  return svd.singularValues();
}

}  // namespace rsphere

// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rsphere/families.hpp"
#include "rsphere/io.hpp"

using namespace rsphere;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SkewGenerator random_skew(RandomStream& rng, int m, double target_rate) {
  Matrix A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = rng.gaussian();
  Matrix Q = 0.5 * (A - A.transpose());
  SkewGenerator raw(Q);
  return SkewGenerator(Matrix((target_rate / raw.max_rate()) * Q));
}

SkewGenerator fig34_generator() {
  Matrix Q = Matrix::Zero(3, 3);
  Q(0, 2) = 0.5;
  Q(2, 0) = -0.5;
  return SkewGenerator(Q);
}

IsoFunction g1_example() {
  return IsoFunction(CMPolynomial::linear(Vector::Unit(3, 0)), fig34_generator());
}

IsoFunction g2_example(int p, int q, double a) {
  Matrix Q = Matrix::Zero(p + q + 2, p + q + 2);
  Q(p, p + 1) = a;
  Q(p + 1, p) = -a;
  return IsoFunction(CMPolynomial::clifford_quadric(p, q), SkewGenerator(Q));
}

char detail_buf[256];

// 1. Fig. 1: (0, 1/2, 0) closes at T = 4 pi in position and velocity; the
//    classifier agrees; everything inside one second.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const GeodesicSpec G = s2_spec(0.0, 0.5, 0.0);
  const double T = 4.0 * M_PI;
  const double pos = (geodesic_eval(G, T).coords() - geodesic_eval(G, 0.0).coords()).norm();
  const double vel = (geodesic_velocity(G, T).vec() - geodesic_velocity(G, 0.0).vec()).norm();
  const ClosednessReport rep = classify_closedness(0.0, 0.5, 0.0);
  const bool classified = rep.verdict == Closedness::Closed && rep.period &&
                          std::fabs(*rep.period - T) < 1e-12;
  const double dt = seconds_since(t0);
  std::snprintf(detail_buf, sizeof(detail_buf),
                "pos %.2e, vel %.2e, T=%s, %.2fs", pos, vel,
                classified ? "4pi" : "wrong", dt);
  report(1, pos < 1e-8 && vel < 1e-8 && classified && dt < 1.0, "fig. 1 closed geodesic",
         detail_buf);
}

// 2. b = c = 0: period 2 pi / (1 - a) for a in {0.2, 0.5}.
void criterion_2() {
  bool ok = true;
  double worst = 0.0;
  for (double a : {0.2, 0.5}) {
    const ClosednessReport rep = classify_closedness(a, 0.0, 0.0);
    if (rep.verdict != Closedness::Closed || !rep.period) {
      ok = false;
      continue;
    }
    worst = std::max(worst, std::fabs(*rep.period - 2.0 * M_PI / (1.0 - a)));
  }
  std::snprintf(detail_buf, sizeof(detail_buf), "max period error %.2e", worst);
  report(2, ok && worst < 1e-9, "great-circle periods 2pi/(1-a)", detail_buf);
}

// 3. b = 1 - 1/sqrt(2): non-closed at denominator 1e6 and the phase point
//    stays 1e-3 away from the start over s in [0.1, 200].
void criterion_3() {
  const double b = 1.0 - 1.0 / std::sqrt(2.0);
  const ClosednessReport rep = classify_closedness(0.0, b, 0.0, 1e-9, 1000000);
  const GeodesicSpec G = s2_spec(0.0, b, 0.0);
  const Vector p0 = geodesic_eval(G, 0.0).coords();
  const Vector v0 = geodesic_velocity(G, 0.0).vec();
  double closest = 1e300;
  for (double s = 0.1; s <= 200.0; s += 1e-3) {
    const double d = (geodesic_eval(G, s).coords() - p0).norm() +
                     (geodesic_velocity(G, s).vec() - v0).norm();
    closest = std::min(closest, d);
  }
  std::snprintf(detail_buf, sizeof(detail_buf), "verdict %s, min return %.3e",
                rep.verdict == Closedness::NonClosed ? "non-closed" : "wrong", closest);
  report(3, rep.verdict == Closedness::NonClosed && closest > 1e-3,
         "fig. 2 irrational winding never returns", detail_buf);
}

// 4. 20 random admissible generators in ambient dims 3..6, 10 initial
//    conditions each: unit speed within 1e-9 and EL residual below 1e-4.
void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  RandomStream rng(20240);
  double worst_unit = 0.0, worst_el = 0.0;
  for (int m = 3; m <= 6; ++m) {
    for (int rep_i = 0; rep_i < 5; ++rep_i) {
      const SkewGenerator Q = random_skew(rng, m, rng.uniform(0.3, 0.9));
      const NavigationDatum D(Q);
      for (int ic = 0; ic < 10; ++ic) {
        const SpherePoint x = SpherePoint::project(rng.unit_vector(m));
        const GeodesicSpec G = GeodesicSpec::from_direction(Q, x, rng.gaussian_vector(m));
        for (int k = 0; k <= 40; ++k) {
          const double s = -6.0 + 12.0 * k / 40.0;
          const double F = metric_eval(D, geodesic_eval(G, s), geodesic_velocity(G, s));
          worst_unit = std::max(worst_unit, std::fabs(F - 1.0));
        }
        std::vector<double> svals;
        std::vector<Vector> pts;
        sample_geodesic(G, 0.0, 0.25, 501, svals, pts);
        worst_el = std::max(worst_el, el_residual(Q, pts, 5e-4));
      }
    }
  }
  const double dt = seconds_since(t0);
  std::snprintf(detail_buf, sizeof(detail_buf), "unit %.2e, el %.2e, %.1fs", worst_unit,
                worst_el, dt);
  report(4, worst_unit < 1e-9 && worst_el < 1e-4 && dt < 60.0,
         "unit speed and euler-lagrange oracle on random generators", detail_buf);
}

// 5. Cartan-Munzner residuals below 1e-10 for both families, n = 2..8,
//    fitted c = 0 for g=1 and 2(p-q) for g=2.
void criterion_5() {
  RandomStream rng(5);
  double worst = 0.0, worst_c = 0.0;
  bool orientation_ok = true;
  for (int n = 2; n <= 8; ++n) {
    const auto lin = cm_check(CMPolynomial::linear(rng.unit_vector(n + 1)), 200, 50 + n);
    worst = std::max({worst, lin.max_gradient_residual, lin.max_laplace_residual});
    worst_c = std::max(worst_c, std::fabs(lin.c_fit));
    if (n >= 3) {
      const int p = (n - 1) / 2, q = n - 1 - p;
      const auto qd = cm_check(CMPolynomial::clifford_quadric(p, q), 200, 80 + n);
      worst = std::max({worst, qd.max_gradient_residual, qd.max_laplace_residual});
      worst_c = std::max(worst_c, std::fabs(qd.c_fit - 2.0 * (p - q)));
      if (qd.c_predicted &&
          std::fabs(std::fabs(*qd.c_predicted) - std::fabs(qd.c_fit)) > 1e-10)
        orientation_ok = false;
    }
  }
  std::snprintf(detail_buf, sizeof(detail_buf), "max residual %.2e, max c error %.2e", worst,
                worst_c);
  report(5, worst < 1e-10 && worst_c < 1e-10 && orientation_ok,
         "cartan-munzner equations for the built-in families", detail_buf);
}

// 6. psi round trip below 1e-10 at 1000 points for g in {1, 2}; the scan
//    oracle agrees with the root finder below 1e-9.
void criterion_6() {
  double worst_rt = 0.0, worst_scan = 0.0;
  for (int variant = 0; variant < 2; ++variant) {
    const IsoFunction F = variant == 0 ? g1_example() : g2_example(1, 2, 0.3);
    const int m = F.ambient_dim();
    RandomStream rng(600 + variant);
    for (int k = 0; k < 1000; ++k) {
      const SpherePoint x = SpherePoint::project(rng.unit_vector(m));
      const SpherePoint back = F.psi_inverse(F.psi(x));
      worst_rt = std::max(worst_rt, (back.coords() - x.coords()).norm());
    }
    const double half = M_PI / (2.0 * F.degree()) + 1e-6;
    for (int k = 0; k < 100; ++k) {
      const SpherePoint y = SpherePoint::project(rng.unit_vector(m));
      const auto offset = [&](double t) {
        const Vector z = F.generator().apply_exp(-t, y.coords());
        return t - F.zeta(F.polynomial().restricted(z));
      };
      double lo = -half, hi = half, prev = offset(lo), prev_t = lo;
      const int grid = 100000;
      for (int i = 1; i <= grid; ++i) {
        const double t = -half + 2.0 * half * i / grid;
        const double ft = offset(t);
        if (prev <= 0.0 && ft >= 0.0) {
          lo = prev_t;
          hi = t;
          break;
        }
        prev = ft;
        prev_t = t;
      }
      for (int i = 0; i < 120; ++i) {
        const double mid = 0.5 * (lo + hi);
        (offset(mid) <= 0.0 ? lo : hi) = mid;
      }
      worst_scan = std::max(worst_scan, std::fabs(0.5 * (lo + hi) - F.psi_inverse_angle(y)));
    }
  }
  std::snprintf(detail_buf, sizeof(detail_buf), "round trip %.2e, scan gap %.2e", worst_rt,
                worst_scan);
  report(6, worst_rt < 1e-10 && worst_scan < 1e-9, "psi homeomorphism round trip", detail_buf);
}

// 7. Isoparametric verification at 500 non-focal samples for both examples;
//    the identity-psi control must fail by more than 1e-2.
void criterion_7() {
  const VerifyReport r1 = iso_verify(g1_example(), 500, 7);
  const VerifyReport r2 = iso_verify(g2_example(1, 2, 0.3), 500, 7);
  VerifyOptions control;
  control.identity_psi_control = true;
  const VerifyReport rc = iso_verify(g1_example(), 150, 7, control);
  std::snprintf(detail_buf, sizeof(detail_buf),
                "A dev %.2e / %.2e, B spread %.2e / %.2e, control %.2e", r1.max_a_deviation,
                r2.max_a_deviation, r1.max_b_spread, r2.max_b_spread, rc.max_a_deviation);
  report(7,
         r1.max_a_deviation < 2e-4 && r2.max_a_deviation < 2e-4 && r1.max_b_spread < 5e-4 &&
             r2.max_b_spread < 5e-4 && rc.max_a_deviation > 1e-2,
         "isoparametric system holds; control fails", detail_buf);
}

// 8. Focal points: the g=1 example lands on (+-sqrt2/2, 0, -sqrt2/2) within
//    1e-12; g=2 focal samples satisfy the linear constraint within 1e-10.
void criterion_8() {
  const IsoFunction F = g1_example();
  const LevelSample L = sample_level(F.polynomial(), F.generator(), 0.0, 25, 8);
  const auto [plus, minus] = focal_submanifolds(F, L);
  Vector mp(3), mm(3);
  mp << std::sqrt(2.0) / 2.0, 0.0, -std::sqrt(2.0) / 2.0;
  mm << -std::sqrt(2.0) / 2.0, 0.0, -std::sqrt(2.0) / 2.0;
  double dev1 = 0.0;
  for (const SpherePoint& y : plus.points) dev1 = std::max(dev1, (y.coords() - mp).norm());
  for (const SpherePoint& y : minus.points) dev1 = std::max(dev1, (y.coords() - mm).norm());

  const int p = 1, q = 2;
  const double a = 0.3;
  const IsoFunction G = g2_example(p, q, a);
  const LevelSample L2 = sample_level(G.polynomial(), G.generator(), 0.0, 50, 8);
  const auto [gp, gm] = focal_submanifolds(G, L2);
  double dev2 = 0.0;
  for (const SpherePoint& y : gp.points)
    dev2 = std::max(dev2, std::fabs(y.coords()[p + 1] + std::tan(M_PI * a / 4.0) * y.coords()[p]));
  std::snprintf(detail_buf, sizeof(detail_buf), "g1 point dev %.2e, g2 constraint %.2e", dev1,
                dev2);
  report(8, dev1 < 1e-12 && dev2 < 1e-10, "focal submanifolds match the predictions", detail_buf);
}

// 9. Focal rank: for the p = q = 1 quadric, d tau_{pi/4} on the hypersurface
//    tangents has exactly one singular value below 1e-4, the rest above 1e-3.
void criterion_9() {
  const IsoFunction G = g2_example(1, 1, 0.3);
  const LevelSample L = sample_level(G.polynomial(), G.generator(), 0.0, 10, 9);
  bool ok = true;
  double worst_small = 0.0, worst_large = 1e300;
  for (std::size_t i = 0; i < L.points.size(); ++i) {
    const auto basis = level_tangent_basis(G.polynomial(), L.points[i]);
    const Vector sv = focal_rank_singular_values(G, L.points[i], L.normals[i], basis, M_PI / 4.0);
    int small = 0, large = 0;
    for (int k = 0; k < sv.size(); ++k) {
      if (sv[k] < 1e-4) {
        ++small;
        worst_small = std::max(worst_small, sv[k]);
      }
      if (sv[k] > 1e-3) {
        ++large;
        worst_large = std::min(worst_large, sv[k]);
      }
    }
    if (small != 1 || large != static_cast<int>(basis.size()) - 1) ok = false;
  }
  std::snprintf(detail_buf, sizeof(detail_buf), "collapsed sv <= %.2e, surviving sv >= %.2e",
                worst_small, worst_large);
  report(9, ok, "tube degeneracy count equals the multiplicity q", detail_buf);
}

// 10. Family snapshots evaluate to their level within 1e-8 for both examples
//     and the riemannian / randers flows of one seed hypersurface differ.
void criterion_10() {
  const std::vector<double> levels = {-0.9, -0.5, 0.0, 0.5, 0.9};
  double worst = 0.0;
  const IsoFunction F1 = g1_example();
  const IsoFunction F2 = g2_example(1, 2, 0.3);
  for (const IsoFunction* F : {&F1, &F2}) {
    const LevelSample L = sample_level(F->polynomial(), F->generator(), 0.0, 40, 10);
    for (double t : levels) {
      const FamilySnapshot snap = family_snapshot(*F, L, t);
      for (const SpherePoint& y : snap.points)
        worst = std::max(worst, std::fabs(F->iso_eval(y) - t));
    }
  }

  const SkewGenerator zero = SkewGenerator::zero(2);
  const IsoFunction F0(CMPolynomial::linear(Vector::Unit(3, 0)), zero);
  const LevelSample Lq = sample_level(F1.polynomial(), F1.generator(), 0.0, 40, 10);
  const LevelSample L0 = sample_level(F0.polynomial(), zero, 0.0, 40, 10);
  double displacement = 0.0;
  const FamilySnapshot randers = family_snapshot(F1, Lq, 0.5);
  const FamilySnapshot riemann = family_snapshot(F0, L0, 0.5);
  for (std::size_t i = 0; i < randers.points.size(); ++i)
    displacement = std::max(
        displacement, (randers.points[i].coords() - riemann.points[i].coords()).norm());
  std::snprintf(detail_buf, sizeof(detail_buf), "level error %.2e, flow separation %.2e", worst,
                displacement);
  report(10, worst < 1e-8 && displacement > 1e-2, "family levels and the two distinct flows",
         detail_buf);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("acceptance: %d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}

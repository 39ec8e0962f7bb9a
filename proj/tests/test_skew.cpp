#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "rsphere/skew.hpp"

using namespace rsphere;

namespace {

SkewGenerator random_skew(RandomStream& rng, int m, double target_rate) {
  Matrix A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = rng.gaussian();
  Matrix Q = 0.5 * (A - A.transpose());
  SkewGenerator raw(Q);
  const double scale = raw.max_rate() > 0 ? target_rate / raw.max_rate() : 0.0;
  return SkewGenerator(Matrix(scale * Q));
}

Matrix abc_matrix(double a, double b, double c) {
  Matrix Q(3, 3);
  Q << 0, a, b, -a, 0, c, -b, -c, 0;
  return Q;
}

}  // namespace

TEST_CASE("sphere point and tangent vector invariants") {
  Vector v(3);
  v << 1, 0, 0;
  CHECK_NOTHROW(SpherePoint{v});
  v << 1, 1e-5, 0;  // norm defect ~5e-11, beyond the 1e-12 gate
  CHECK_THROWS_AS(SpherePoint{v}, std::invalid_argument);
  const SpherePoint p = SpherePoint::project(v);
  CHECK(std::fabs(p.coords().norm() - 1.0) < 1e-15);

  const SpherePoint e1(Vector(Vector::Unit(3, 0)));
  Vector t(3);
  t << 0, 1, 0;
  CHECK_NOTHROW(TangentVector(e1, t));
  t << 1e-6, 1, 0;
  CHECK_THROWS_AS(TangentVector(e1, t), std::invalid_argument);
}

TEST_CASE("constructor symmetrizes small defects and rejects large ones") {
  Matrix Q = abc_matrix(0.1, 0.2, 0.3);
  Q(0, 1) += 5e-13;
  const SkewGenerator G(Q);
  CHECK((G.entries() + G.entries().transpose()).cwiseAbs().maxCoeff() == 0.0);

  Q(0, 1) += 1e-6;
  CHECK_THROWS_AS(SkewGenerator{Q}, std::invalid_argument);
}

TEST_CASE("admissibility: identity, paper 3x3, boundary rate") {
  CHECK(validate_admissible(SkewGenerator::zero(2)).admissible);
  CHECK(validate_admissible(SkewGenerator::zero(2)).min_eigenvalue == doctest::Approx(1.0));

  // (a,b,c) = (0, 1/2, 0): rates 1/2 and 0, min eigenvalue of I+Q^2 is 3/4.
  const SkewGenerator G(abc_matrix(0.0, 0.5, 0.0));
  const auto rep = validate_admissible(G);
  CHECK(rep.admissible);
  CHECK(rep.min_eigenvalue == doctest::Approx(0.75).epsilon(1e-12));

  Matrix B(2, 2);
  B << 0, 1, -1, 0;
  CHECK_FALSE(SkewGenerator(B).admissible());
}

TEST_CASE("mat_exp: identity at t=0, planar closed form, paper point") {
  RandomStream rng(11);
  const SkewGenerator G = random_skew(rng, 4, 0.7);
  CHECK((mat_exp(G, 0.0).matrix() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

  // 2x2 block of rate a: rotation by angle t*a.
  Matrix B(2, 2);
  const double a = 0.37, t = 1.9;
  B << 0, a, -a, 0;
  const Matrix R = mat_exp(SkewGenerator(B), t).matrix();
  CHECK(R(0, 0) == doctest::Approx(std::cos(a * t)).epsilon(1e-14));
  CHECK(R(0, 1) == doctest::Approx(std::sin(a * t)).epsilon(1e-14));
  CHECK(R(1, 0) == doctest::Approx(-std::sin(a * t)).epsilon(1e-14));

  // q13 = 1/2, q31 = -1/2, t = pi/2 sends (1,0,0) to (sqrt2/2, 0, -sqrt2/2).
  const SkewGenerator F34(abc_matrix(0.0, 0.5, 0.0));
  Vector p(3);
  p << 1, 0, 0;
  const Vector img = mat_exp(F34, M_PI / 2.0).apply(p);
  CHECK(std::fabs(img[0] - std::sqrt(2.0) / 2.0) < 1e-14);
  CHECK(std::fabs(img[1]) < 1e-14);
  CHECK(std::fabs(img[2] + std::sqrt(2.0) / 2.0) < 1e-14);
}

TEST_CASE("exp group law and orthogonality over random generators") {
  RandomStream rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 3 + static_cast<int>(rng.u01() * 4);
    const SkewGenerator G = random_skew(rng, m, rng.uniform(0.2, 0.9));
    const double s = rng.uniform(-10.0, 10.0), t = rng.uniform(-10.0, 10.0);
    const Matrix Rs = mat_exp(G, s).matrix();
    const Matrix Rt = mat_exp(G, t).matrix();
    const Matrix Rst = mat_exp(G, s + t).matrix();
    CHECK((Rs * Rt - Rst).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((Rs.transpose() - mat_exp(G, -s).matrix()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((Rs.transpose() * Rs - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-10);
    for (int k = 0; k < 100; ++k) {
      const Vector x = rng.unit_vector(m);
      CHECK(std::fabs(G.apply_exp(s, x).norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("standard form: zero, block fixed point, eigensolver oracle, round trips") {
  const StandardForm z = standard_form(SkewGenerator::zero(3));
  CHECK(z.rates().empty());
  CHECK(z.zero_block_size() == 4);

  Matrix B = Matrix::Zero(5, 5);
  B(0, 1) = 0.5;
  B(1, 0) = -0.5;
  B(2, 3) = 0.3;
  B(3, 2) = -0.3;
  const StandardForm sf = standard_form(SkewGenerator(B));
  REQUIRE(sf.rates().size() == 2);
  CHECK(sf.rates()[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sf.rates()[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(sf.zero_block_size() == 1);
  CHECK((sf.reconstruct() - B).cwiseAbs().maxCoeff() < 1e-10);

  // Rates must match the imaginary parts from a general complex eigensolver.
  RandomStream rng(21);
  const SkewGenerator G = random_skew(rng, 5, 0.8);
  Eigen::EigenSolver<Matrix> es(G.entries());
  std::vector<double> imag;
  for (int i = 0; i < 5; ++i)
    if (es.eigenvalues()[i].imag() > 1e-9) imag.push_back(es.eigenvalues()[i].imag());
  std::sort(imag.rbegin(), imag.rend());
  const auto& rates = G.standard_form().rates();
  REQUIRE(rates.size() == imag.size());
  for (std::size_t i = 0; i < rates.size(); ++i)
    CHECK(rates[i] == doctest::Approx(imag[i]).epsilon(1e-10));

  // 50 random generators in ambient dims 3..8 reconstruct within 1e-10.
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 3 + trial % 6;
    const SkewGenerator R = random_skew(rng, m, rng.uniform(0.1, 0.95));
    CHECK((R.standard_form().reconstruct() - R.entries()).cwiseAbs().maxCoeff() < 1e-10);
    const auto& rs = R.standard_form().rates();
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) CHECK(rs[i] >= rs[i + 1]);
  }

  // Repeated rates still pair into clean planes.
  Matrix D = Matrix::Zero(4, 4);
  D(0, 1) = 0.4;
  D(1, 0) = -0.4;
  D(2, 3) = 0.4;
  D(3, 2) = -0.4;
  const SkewGenerator Geq(D);
  CHECK((Geq.standard_form().reconstruct() - D).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("killing field: zero, paper example, norm bound, rejection") {
  Vector e1(3);
  e1 << 1, 0, 0;
  const SpherePoint x(e1);
  const TangentVector v0 = killing_field(SkewGenerator::zero(2), x);
  CHECK(v0.norm() == 0.0);

  const SkewGenerator G(abc_matrix(0.0, 0.5, 0.0));
  const TangentVector v = killing_field(G, x);
  CHECK(v.vec()[0] == doctest::Approx(0.0));
  CHECK(v.vec()[1] == doctest::Approx(0.0));
  CHECK(v.vec()[2] == doctest::Approx(-0.5));

  RandomStream rng(3);
  const SkewGenerator R = random_skew(rng, 5, 0.85);
  for (int k = 0; k < 200; ++k) {
    const SpherePoint p = SpherePoint::project(rng.unit_vector(5));
    CHECK(killing_field(R, p).norm() <= R.max_rate() + 1e-12);
    CHECK(killing_field(R, p).norm() < 1.0);
  }

  Matrix B(2, 2);
  B << 0, 1, -1, 0;
  CHECK_THROWS_AS(killing_field(SkewGenerator(B), SpherePoint::project(Vector::Unit(2, 0))),
                  std::invalid_argument);
}

TEST_CASE("killing property via finite-difference covariant derivatives") {
  RandomStream rng(17);
  const SkewGenerator G = random_skew(rng, 4, 0.8);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const SpherePoint x = SpherePoint::project(rng.unit_vector(4));
    const TangentVector X = TangentVector::project(x, rng.gaussian_vector(4));
    const TangentVector Y = TangentVector::project(x, rng.gaussian_vector(4));
    // nabla^h_X V at x: ambient directional derivative of V(z)=Qz along X,
    // projected back to the tangent space at x.
    const auto cov = [&](const Vector& dir) {
      const Vector zp = (x.coords() + h * dir).normalized();
      const Vector zm = (x.coords() - h * dir).normalized();
      const Vector d = (G.apply(zp) - G.apply(zm)) / (2.0 * h);
      return (d - x.coords().dot(d) * x.coords()).eval();
    };
    const double sym = cov(X.vec()).dot(Y.vec()) + cov(Y.vec()).dot(X.vec());
    CHECK(std::fabs(sym) < 1e-6 * std::max(1.0, X.norm() * Y.norm()));
  }
}

TEST_CASE("flow: fixed point, group law, planar quarter turn, derivative") {
  const SkewGenerator G(abc_matrix(0.0, 0.5, 0.0));
  const SpherePoint x = SpherePoint::project(Vector::Unit(3, 0));
  CHECK((flow(G, 0.0, x).coords() - x.coords()).norm() == 0.0);

  RandomStream rng(9);
  for (int k = 0; k < 10; ++k) {
    const SpherePoint p = SpherePoint::project(rng.unit_vector(3));
    const double s = rng.uniform(-3, 3), t = rng.uniform(-3, 3);
    const Vector lhs = flow(G, s, flow(G, t, p)).coords();
    const Vector rhs = flow(G, s + t, p).coords();
    CHECK((lhs - rhs).norm() < 1e-12);
  }

  // Rate-1/2 block acting on e1 for t = pi: quarter turn of the plane.
  Matrix B = Matrix::Zero(4, 4);
  B(0, 1) = 0.5;
  B(1, 0) = -0.5;
  const SkewGenerator Gb(B);
  const SpherePoint e1 = SpherePoint::project(Vector::Unit(4, 0));
  const Vector q = flow(Gb, M_PI, e1).coords();
  CHECK(std::fabs(q[0] - std::cos(M_PI / 2)) < 1e-14);
  CHECK(std::fabs(q[1] + std::sin(M_PI / 2)) < 1e-14);

  // d/dt flow at t=0 matches the Killing field (central differences, 1e-6).
  const SkewGenerator R = random_skew(rng, 4, 0.8);
  for (int k = 0; k < 10; ++k) {
    const SpherePoint p = SpherePoint::project(rng.unit_vector(4));
    const double h = 1e-6;
    const Vector fd = (flow(R, h, p).coords() - flow(R, -h, p).coords()) / (2.0 * h);
    CHECK((fd - killing_field(R, p).vec()).norm() < 1e-8);
  }
}

TEST_CASE("json round trip for generators") {
  const SkewGenerator G(abc_matrix(0.1, 0.2, 0.3));
  const SkewGenerator back = SkewGenerator::from_json(G.to_json());
  CHECK((back.entries() - G.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.sphere_dim() == 2);

  nlohmann::json bad = {{"n", 2}, {"entries", {{0, 1}, {1, 0}}}};
  CHECK_THROWS_AS(SkewGenerator::from_json(bad), std::invalid_argument);
}

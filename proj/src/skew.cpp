#include "rsphere/skew.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace rsphere {

namespace {

constexpr double kUnitNormTol = 1e-12;
constexpr double kTangencyTol = 1e-10;
constexpr double kAntisymmetryTol = 1e-12;
constexpr double kOrthogonalityTol = 1e-12;
constexpr double kReconstructTol = 1e-10;
constexpr double kAdmissibleEig = 1e-12;

}  // namespace

SpherePoint::SpherePoint(Vector coords) : coords_(std::move(coords)) {
  const double n = coords_.norm();
  if (std::fabs(n - 1.0) > kUnitNormTol) {
    std::ostringstream msg;
    msg << "SpherePoint: |coords| = " << n << " deviates from 1 beyond 1e-12";
    throw std::invalid_argument(msg.str());
  }
}

SpherePoint SpherePoint::project(const Vector& v) {
  const double n = v.norm();
  if (n < 1e-100) throw std::invalid_argument("SpherePoint::project: zero vector");
  return SpherePoint(v / n);
}

TangentVector::TangentVector(SpherePoint base, Vector vec)
    : base_(std::move(base)), vec_(std::move(vec)) {
  if (vec_.size() != base_.coords().size())
    throw std::invalid_argument("TangentVector: dimension mismatch");
  const double ip = base_.coords().dot(vec_);
  if (std::fabs(ip) > kTangencyTol) {
    std::ostringstream msg;
    msg << "TangentVector: <base, vec> = " << ip << " exceeds 1e-10";
    throw std::invalid_argument(msg.str());
  }
}

TangentVector TangentVector::project(const SpherePoint& base, const Vector& v) {
  Vector t = v - base.coords().dot(v) * base.coords();
  // One more pass kills the rounding residue of the first projection.
  t -= base.coords().dot(t) * base.coords();
  return TangentVector(base, std::move(t));
}

Rotation::Rotation(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("Rotation: non-square");
  const Matrix defect = m_.transpose() * m_ - Matrix::Identity(m_.rows(), m_.cols());
  if (defect.cwiseAbs().maxCoeff() > kOrthogonalityTol)
    throw std::invalid_argument("Rotation: R^T R deviates from identity beyond 1e-12");
  if (m_.determinant() < 0.0)
    throw std::invalid_argument("Rotation: determinant is negative");
}

StandardForm::StandardForm(Matrix conjugator, std::vector<double> rates, int zero_block)
    : conjugator_(std::move(conjugator)), rates_(std::move(rates)), zero_block_(zero_block) {
  if (2 * static_cast<int>(rates_.size()) + zero_block_ != ambient_dim())
    throw std::invalid_argument("StandardForm: block sizes do not add up");
}

Matrix StandardForm::block_diagonal() const {
  const int m = ambient_dim();
  Matrix B = Matrix::Zero(m, m);
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    const int r = static_cast<int>(2 * i);
    B(r, r + 1) = rates_[i];
    B(r + 1, r) = -rates_[i];
  }
  return B;
}

Matrix StandardForm::reconstruct() const {
  return conjugator_ * block_diagonal() * conjugator_.transpose();
}

Matrix StandardForm::exp_block_diagonal(double t) const {
  const int m = ambient_dim();
  Matrix E = Matrix::Identity(m, m);
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    const int r = static_cast<int>(2 * i);
    const double c = std::cos(rates_[i] * t);
    const double s = std::sin(rates_[i] * t);
    E(r, r) = c;
    E(r, r + 1) = s;
    E(r + 1, r) = -s;
    E(r + 1, r + 1) = c;
  }
  return E;
}

namespace {

// Pairs the eigenspaces of S = -Q^2 into invariant rotation planes. Each
// positive eigenvalue a^2 of S contributes planes spanned by (Qu/a, u); in
// that column order the conjugated block is [[0, a], [-a, 0]].
StandardForm build_standard_form(const Matrix& Q) {
  const int m = static_cast<int>(Q.rows());
  Matrix S = -(Q * Q);
  S = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("standard_form: eigensolver failed");

  const double rate_scale = std::max(1.0, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
  const double zero_rate = 1e-7 * rate_scale;

  Matrix P(m, m);
  std::vector<double> rates;
  int col = 0;
  std::vector<int> kernel_idx;

  auto orthogonalize = [&](Vector v) {
    for (int pass = 0; pass < 2; ++pass)
      for (int c = 0; c < col; ++c) v -= P.col(c).dot(v) * P.col(c);
    return v;
  };

  // Descending eigenvalue order so rates come out sorted.
  for (int k = m - 1; k >= 0; --k) {
    const double lam = es.eigenvalues()[k];
    const double rate = std::sqrt(std::max(0.0, lam));
    if (rate <= zero_rate) {
      kernel_idx.push_back(k);
      continue;
    }
    Vector u = orthogonalize(es.eigenvectors().col(k));
    if (u.norm() < 0.5) continue;  // plane already covered by a paired vector
    u.normalize();
    Vector w = Q * u;
    const double a = w.norm();
    if (a <= zero_rate) continue;
    Vector v = orthogonalize(w / a);
    v.normalize();
    P.col(col) = v;
    P.col(col + 1) = u;
    rates.push_back(a);
    col += 2;
  }
  for (int k : kernel_idx) {
    Vector u = orthogonalize(es.eigenvectors().col(k));
    if (u.norm() < 0.5) continue;
    u.normalize();
    P.col(col) = u;
    ++col;
  }
  if (col != m) throw std::runtime_error("standard_form: basis construction lost rank");

  const int zero_block = m - 2 * static_cast<int>(rates.size());
  // Read the rates back off P^T Q P so the reconstruction is self-consistent.
  const Matrix T = P.transpose() * Q * P;
  for (std::size_t i = 0; i < rates.size(); ++i) rates[i] = T(2 * i, 2 * i + 1);

  StandardForm form(std::move(P), std::move(rates), zero_block);
  const double defect = (form.reconstruct() - Q).cwiseAbs().maxCoeff();
  if (defect > kReconstructTol) {
    std::ostringstream msg;
    msg << "standard_form: reconstruction defect " << defect << " exceeds 1e-10";
    throw std::runtime_error(msg.str());
  }
  return form;
}

AdmissibilityReport check_admissible(const Matrix& Q) {
  const int m = static_cast<int>(Q.rows());
  Matrix A = Matrix::Identity(m, m) + Q * Q;
  A = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  AdmissibilityReport rep;
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.admissible = rep.min_eigenvalue > kAdmissibleEig;
  return rep;
}

}  // namespace

SkewGenerator::SkewGenerator(Matrix entries)
    : entries_(std::move(entries)),
      standard_form_(Matrix::Identity(1, 1), {}, 1),
      admissibility_() {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("SkewGenerator: matrix is not square");
  if (entries_.rows() < 2)
    throw std::invalid_argument("SkewGenerator: ambient dimension must be at least 2");
  const double defect = (entries_ + entries_.transpose()).cwiseAbs().maxCoeff();
  if (defect > kAntisymmetryTol) {
    std::ostringstream msg;
    msg << "SkewGenerator: antisymmetry defect " << defect << " exceeds 1e-12";
    throw std::invalid_argument(msg.str());
  }
  entries_ = 0.5 * (entries_ - entries_.transpose().eval());
  standard_form_ = build_standard_form(entries_);
  admissibility_ = check_admissible(entries_);
}

SkewGenerator SkewGenerator::zero(int sphere_dim) {
  if (sphere_dim < 1) throw std::invalid_argument("SkewGenerator::zero: sphere_dim < 1");
  return SkewGenerator(Matrix::Zero(sphere_dim + 1, sphere_dim + 1));
}

SkewGenerator SkewGenerator::from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const auto& rows = j.at("entries");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n + 1)
    throw std::invalid_argument("SkewGenerator::from_json: entries must be (n+1) rows");
  Matrix Q(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    const auto& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != n + 1)
      throw std::invalid_argument("SkewGenerator::from_json: ragged entries");
    for (int k = 0; k <= n; ++k) Q(i, k) = row.at(k).get<double>();
  }
  return SkewGenerator(std::move(Q));
}

nlohmann::json SkewGenerator::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < ambient_dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < ambient_dim(); ++k) row.push_back(entries_(i, k));
    rows.push_back(std::move(row));
  }
  return {{"n", sphere_dim()}, {"entries", std::move(rows)}};
}

double SkewGenerator::max_rate() const {
  return standard_form_.rates().empty() ? 0.0 : standard_form_.rates().front();
}

Vector SkewGenerator::apply_exp(double t, const Vector& v) const {
  const Matrix& P = standard_form_.conjugator();
  Vector w = P.transpose() * v;
  const auto& rates = standard_form_.rates();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const int r = static_cast<int>(2 * i);
    const double c = std::cos(rates[i] * t);
    const double s = std::sin(rates[i] * t);
    const double w0 = w[r], w1 = w[r + 1];
    w[r] = c * w0 + s * w1;
    w[r + 1] = -s * w0 + c * w1;
  }
  return P * w;
}

AdmissibilityReport validate_admissible(const SkewGenerator& Q) { return Q.admissibility(); }

Rotation mat_exp(const SkewGenerator& Q, double t) {
  const StandardForm& sf = Q.standard_form();
  const Matrix& P = sf.conjugator();
  return Rotation(P * sf.exp_block_diagonal(t) * P.transpose());
}

StandardForm standard_form(const SkewGenerator& Q) { return Q.standard_form(); }

TangentVector killing_field(const SkewGenerator& Q, const SpherePoint& x) {
  if (!Q.admissible())
    throw std::invalid_argument("killing_field: generator is not admissible (I + Q^2 has a non-positive eigenvalue)");
  if (Q.ambient_dim() != x.ambient_dim())
    throw std::invalid_argument("killing_field: dimension mismatch");
  return TangentVector(x, Q.apply(x.coords()));
}

SpherePoint flow(const SkewGenerator& Q, double t, const SpherePoint& x) {
  if (!Q.admissible())
    throw std::invalid_argument("flow: generator is not admissible");
  return SpherePoint::project(Q.apply_exp(t, x.coords()));
}

}  // namespace rsphere

// Skew-symmetric generators Q on R^{n+1}: admissibility (I + Q^2 > 0), the
// block standard form, matrix exponentials exp(tQ), the Killing field
// V = Qx on the sphere and its rotation flow.
#pragma once

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <vector>

#include "rsphere/numerics.hpp"

namespace rsphere {

// Unit vector on the sphere S^n inside R^{n+1}.
class SpherePoint {
 public:
  explicit SpherePoint(Vector coords);
  // Normalizes an ambient vector onto the sphere. Throws on (near-)zero input.
  static SpherePoint project(const Vector& v);

  const Vector& coords() const { return coords_; }
  int ambient_dim() const { return static_cast<int>(coords_.size()); }
  int sphere_dim() const { return ambient_dim() - 1; }

 private:
  Vector coords_;
};

// Vector tangent to the sphere at a base point: <base, vec> = 0.
class TangentVector {
 public:
  TangentVector(SpherePoint base, Vector vec);
  // Removes the normal component of v at base.
  static TangentVector project(const SpherePoint& base, const Vector& v);

  const SpherePoint& base() const { return base_; }
  const Vector& vec() const { return vec_; }
  double norm() const { return vec_.norm(); }

 private:
  SpherePoint base_;
  Vector vec_;
};

// Orthogonal matrix with determinant +1, within 1e-12 of exact.
class Rotation {
 public:
  explicit Rotation(Matrix m);
  const Matrix& matrix() const { return m_; }
  Vector apply(const Vector& v) const { return m_ * v; }

 private:
  Matrix m_;
};

// Orthogonal conjugation Q = P * blockdiag(Q_1..Q_j, 0) * P^T with
// Q_i = [[0, a_i], [-a_i, 0]], rates a_i >= 0 sorted descending.
class StandardForm {
 public:
  StandardForm(Matrix conjugator, std::vector<double> rates, int zero_block);

  const Matrix& conjugator() const { return conjugator_; }
  const std::vector<double>& rates() const { return rates_; }
  int zero_block_size() const { return zero_block_; }
  int ambient_dim() const { return static_cast<int>(conjugator_.rows()); }

  Matrix block_diagonal() const;  // blockdiag(Q_1..Q_j, 0)
  Matrix reconstruct() const;     // P * blockdiag * P^T
  // exp(t * blockdiag): planar rotation by t*a_i in each block.
  Matrix exp_block_diagonal(double t) const;

 private:
  Matrix conjugator_;
  std::vector<double> rates_;
  int zero_block_;
};

struct AdmissibilityReport {
  bool admissible = false;
  double min_eigenvalue = 0.0;  // smallest eigenvalue of I + Q^2
};

class SkewGenerator {
 public:
  // Accepts a square matrix with antisymmetry defect at most 1e-12 (projected
  // to (Q - Q^T)/2); larger defects are rejected.
  explicit SkewGenerator(Matrix entries);

  static SkewGenerator zero(int sphere_dim);
  static SkewGenerator from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  int sphere_dim() const { return static_cast<int>(entries_.rows()) - 1; }
  int ambient_dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

  const AdmissibilityReport& admissibility() const { return admissibility_; }
  bool admissible() const { return admissibility_.admissible; }
  double max_rate() const;
  const StandardForm& standard_form() const { return standard_form_; }

  Vector apply(const Vector& v) const { return entries_ * v; }
  // exp(tQ) v through the cached standard form (exact planar rotations).
  Vector apply_exp(double t, const Vector& v) const;

 private:
  Matrix entries_;
  StandardForm standard_form_;
  AdmissibilityReport admissibility_;
};

AdmissibilityReport validate_admissible(const SkewGenerator& Q);
Rotation mat_exp(const SkewGenerator& Q, double t);
StandardForm standard_form(const SkewGenerator& Q);

// V = Qx, tangent since <x, Qx> = 0. Requires admissible Q.
TangentVector killing_field(const SkewGenerator& Q, const SpherePoint& x);
// Integral curve of V through x: exp(tQ) x.
SpherePoint flow(const SkewGenerator& Q, double t, const SpherePoint& x);

}  // namespace rsphere

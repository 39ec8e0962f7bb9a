// Cartan-Munzner polynomials: the degree-1 height family, the degree-2
// Clifford quadric |x1|^2 - |x2|^2, and generic monomial tables, with exact
// value / Euclidean gradient / Euclidean Laplacian and a sampled check of
// the defining equations |grad phi|^2 = g^2 r^{2g-2}, lap phi = c r^{g-2}.
#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <variant>
#include <vector>

#include "rsphere/skew.hpp"

namespace rsphere {

struct MonomialTerm {
  Eigen::VectorXi exponents;
  double coeff = 0.0;
};

class CMPolynomial {
 public:
  static CMPolynomial linear(Vector p);  // phi(x) = <x, p>, |p| = 1
  static CMPolynomial clifford_quadric(int p, int q);
  static CMPolynomial generic(int degree, int ambient_dim, std::vector<MonomialTerm> terms);
  // {"g": int, "terms": [{"exponents": [...], "coeff": real}]}
  static CMPolynomial from_json(const nlohmann::json& j);

  int degree() const { return degree_; }
  int ambient_dim() const { return ambient_dim_; }
  int sphere_dim() const { return ambient_dim_ - 1; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;   // grad_E
  double laplacian(const Vector& x) const;  // laplacian_E

  // phi(x) / |x|^g, the degree-0 extension of the sphere restriction.
  double restricted(const Vector& x) const;
  // grad^h = grad_E phi - g phi x at |x| = 1.
  Vector sphere_gradient_exact(const SpherePoint& x) const;

  void declare_multiplicities(int m1, int m2);
  std::optional<std::pair<int, int>> multiplicities() const { return multiplicities_; }

  // Clifford block split (p, q) when applicable.
  std::optional<std::pair<int, int>> clifford_split() const;

 private:
  struct Linear {
    Vector p;
  };
  struct Quadric {
    int p;
    int q;
  };
  struct Generic {
    std::vector<MonomialTerm> terms;
  };

  CMPolynomial() = default;

  int degree_ = 0;
  int ambient_dim_ = 0;
  std::variant<Linear, Quadric, Generic> body_;
  std::optional<std::pair<int, int>> multiplicities_;
};

Vector grad_E(const CMPolynomial& phi, const Vector& x);
double laplacian_E(const CMPolynomial& phi, const Vector& x);

struct CMCheckReport {
  double max_gradient_residual = 0.0;  // max | |grad phi|^2 - g^2 r^{2g-2} |
  double max_laplace_residual = 0.0;   // max | lap phi - c_fit r^{g-2} |
  double c_fit = 0.0;                  // least-squares c over the samples
  std::optional<double> c_predicted;   // g^2 (m2 - m1) / 2 when declared
  int samples = 0;
  std::uint64_t seed = 0;
};

// Samples random ambient points with |x| in [0.5, 2].
CMCheckReport cm_check(const CMPolynomial& phi, int samples, std::uint64_t seed);

// Newton projection of a sphere point onto {phi/|x|^g = t0} along the sphere
// gradient, renormalized each step. Throws on non-convergence.
SpherePoint project_to_level(const CMPolynomial& phi, double t0, SpherePoint guess,
                             int max_iter = 50, double tol = 1e-12);

// Random points on the level set {restricted = t0}, |t0| < 1. Draws are
// rejected when Newton fails; gives up if the acceptance rate drops below 1%.
std::vector<SpherePoint> sample_polynomial_level(const CMPolynomial& phi, double t0,
                                                 int count, std::uint64_t seed);

}  // namespace rsphere

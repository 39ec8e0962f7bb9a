// The zeta reparametrization, the sphere self-map psi(x) =
// exp(zeta(phi(x)/|x|^g) Q) x, its scalar-root inverse, the transported
// isoparametric function f = phi o psi^{-1}, and the sampled verification
// that f solves the Randers isoparametric system.
#pragma once

#include "rsphere/cartan_munzner.hpp"
#include "rsphere/metric.hpp"

namespace rsphere {

class IsoFunction {
 public:
  // Requires matching dimensions and admissible Q.
  IsoFunction(CMPolynomial phi, SkewGenerator Q);

  const CMPolynomial& polynomial() const { return phi_; }
  const SkewGenerator& generator() const { return Q_; }
  int degree() const { return phi_.degree(); }
  int ambient_dim() const { return Q_.ambient_dim(); }

  // zeta(t) = (1/g) asin t on [-1, 1]; ratios in (1, 1 + 1e-9] clamp to 1,
  // beyond that band the input is rejected.
  double zeta(double t, bool* clamped = nullptr) const;
  double zeta_inv(double theta) const;  // sin(g theta)

  // exp(zeta(phi(x)/|x|^g) Q) x; norm preserving and degree-1 homogeneous.
  Vector psi_forward(const Vector& x) const;
  SpherePoint psi(const SpherePoint& x) const;

  // Unique preimage via the bracketing scalar root of
  // t = zeta(phi(exp(-tQ) y) / |y|^g); polished so |psi(xbar) - y| < 1e-10.
  SpherePoint psi_inverse(const SpherePoint& y) const;
  double psi_inverse_angle(const SpherePoint& y) const;

  // f(y) = phi(psi^{-1}(y)) on the sphere; equals sin(g t*) at the root t*.
  double iso_eval(const SpherePoint& y) const;
  ScalarField field() const;  // degree-0 ambient extension of f

  NavigationDatum navigation() const { return NavigationDatum(Q_); }

 private:
  CMPolynomial phi_;
  SkewGenerator Q_;
};

// Block evaluation of psi when Q is already in the standard block-diagonal
// layout: plane (2i-1, 2i) rotates by a_i * zeta. Independent of the
// matrix-exponential path; rejects generators not in that layout.
Vector psi_block_form(const IsoFunction& F, const Vector& x);

struct VerifyOptions {
  std::vector<double> levels = {-0.8, -0.5, -0.2, 0.0, 0.2, 0.5, 0.8};
  double gradient_threshold = 1e-7;  // points below are excluded and counted
  bool identity_psi_control = false; // negative control: f := phi restriction
  double fd_step1 = 1e-5;
  double fd_step2 = 1e-4;
};

struct VerifyReport {
  std::vector<double> levels;
  double max_a_deviation = 0.0;  // max |A - g sqrt(1 - f^2)|
  double max_b_spread = 0.0;     // max over levels of (max B - min B)
  int excluded_near_focal = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  nlohmann::json to_json() const;
};

// Samples `samples` points spread over the requested levels of f and checks
// the isoparametric system: A = g sqrt(1 - f^2) pointwise, B constant per
// level.
VerifyReport iso_verify(const IsoFunction& F, int samples, std::uint64_t seed,
                        const VerifyOptions& opts = {});

// General profile reparametrization zeta(t) = int_{anchor}^{t} d theta / a(theta)
// by tanh-sinh quadrature; admits square-root vanishing at the endpoints.
class GeneralZeta {
 public:
  GeneralZeta(std::function<double(double)> profile, double lo, double hi, double anchor);
  double operator()(double t) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double anchor() const { return anchor_; }

 private:
  std::function<double(double)> profile_;
  double lo_, hi_, anchor_;
};

double general_zeta(const GeneralZeta& gz, double t);

}  // namespace rsphere

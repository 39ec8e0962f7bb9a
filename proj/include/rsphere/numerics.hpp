// Scalar root finding, rational reconstruction from floats, and a
// deterministic random stream shared by every sampled operation.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace rsphere {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0.
// Returns the abscissa once the bracket shrinks below tol (plus the
// unavoidable 2*eps*|x| floor). Throws std::runtime_error if the root is
// not bracketed or the iteration cap is hit.
double brent(const std::function<double(double)>& f, double a, double b,
             double tol = 1e-15, int max_iter = 200);

struct RationalApproximant {
  long long num = 0;
  long long den = 1;
  double error = 0.0;         // |r - num/den|
  double scaled_error = 0.0;  // |r*den - num|, the phase drift per den cycles
};

// Best continued-fraction convergent of r with denominator <= max_den,
// minimizing the scaled error |r*q - p|. Convergents are always in lowest
// terms, so den is the canonical denominator of the detected rational.
RationalApproximant best_rational(double r, long long max_den);

// Deterministic random stream (splitmix64 + Box-Muller). Self-contained so
// that seeded output does not depend on libstdc++ distribution internals.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_raw();
  double u01();  // uniform in [0, 1)
  double uniform(double lo, double hi);
  double gaussian();
  Vector gaussian_vector(int dim);
  Vector unit_vector(int dim);  // uniform on the unit sphere in R^dim

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rsphere

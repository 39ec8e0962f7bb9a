#include "rsphere/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rsphere {

double brent(const std::function<double(double)>& f, double x1, double x2,
             double tol, int max_iter) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = x1, b = x2, c = x2;
  double fa = f(a), fb = f(b), fc = fb;

  if ((fa > 0.0 && fb > 0.0) || (fa < 0.0 && fb < 0.0)) {
    std::ostringstream msg;
    msg << "brent: root not bracketed, f(" << a << ")=" << fa << ", f(" << b
        << ")=" << fb;
    throw std::runtime_error(msg.str());
  }

  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      // inverse quadratic / secant step
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
      const double min2 = std::fabs(e * q);
      if (2.0 * p < (min1 < min2 ? min1 : min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::fabs(d) > tol1)
      b += d;
    else
      b += (xm > 0.0 ? std::fabs(tol1) : -std::fabs(tol1));
    fb = f(b);
  }
  throw std::runtime_error("brent: iteration cap reached");
}

RationalApproximant best_rational(double r, long long max_den) {
  if (max_den < 1) throw std::invalid_argument("best_rational: max_den < 1");
  if (!std::isfinite(r)) throw std::invalid_argument("best_rational: non-finite input");

  RationalApproximant best;
  best.num = static_cast<long long>(std::llround(r));
  best.den = 1;
  best.error = std::fabs(r - static_cast<double>(best.num));
  best.scaled_error = best.error;

  // Walk the continued-fraction convergents p_k/q_k of r.
  double x = r;
  long long p_prev = 1, p_prev2 = 0;
  long long q_prev = 0, q_prev2 = 1;
  for (int k = 0; k < 64; ++k) {
    const double af = std::floor(x);
    if (std::fabs(af) > 9.0e17) break;  // would overflow the convergents
    const long long a = static_cast<long long>(af);
    const long long p = a * p_prev + p_prev2;
    const long long q = a * q_prev + q_prev2;
    if (q > max_den || q < 0) break;
    if (q > 0) {
      const double err_scaled = std::fabs(r * static_cast<double>(q) - static_cast<double>(p));
      if (err_scaled < best.scaled_error) {
        best.num = p;
        best.den = q;
        best.scaled_error = err_scaled;
        best.error = err_scaled / static_cast<double>(q);
      }
    }
    const double frac = x - af;
    if (frac < 1e-18) break;  // exact termination
    x = 1.0 / frac;
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
  }
  return best;
}

std::uint64_t RandomStream::next_raw() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomStream::u01() {
  return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * u01();
}

double RandomStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - u01();  // (0, 1]
  const double u2 = u01();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * M_PI * u2;
  spare_ = rad * std::sin(ang);
  have_spare_ = true;
  return rad * std::cos(ang);
}

Vector RandomStream::gaussian_vector(int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gaussian();
  return v;
}

Vector RandomStream::unit_vector(int dim) {
  for (;;) {
    Vector v = gaussian_vector(dim);
    const double n = v.norm();
    if (n > 1e-8) return v / n;
  }
}

}  // namespace rsphere

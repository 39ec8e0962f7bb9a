#include "rsphere/isoparametric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

namespace rsphere {

namespace {
constexpr double kClampBand = 1e-9;
constexpr double kBracketPad = 1e-6;
}  // namespace

IsoFunction::IsoFunction(CMPolynomial phi, SkewGenerator Q)
    : phi_(std::move(phi)), Q_(std::move(Q)) {
  if (phi_.ambient_dim() != Q_.ambient_dim())
    throw std::invalid_argument("IsoFunction: polynomial and generator dimensions differ");
  if (!Q_.admissible()) throw std::invalid_argument("IsoFunction: Q is not admissible");
}

double IsoFunction::zeta(double t, bool* clamped) const {
  if (clamped) *clamped = false;
  if (std::fabs(t) > 1.0 + kClampBand) {
    std::ostringstream msg;
    msg << "zeta: |t| = " << std::fabs(t) << " beyond the 1 + 1e-9 clamp band";
    throw std::invalid_argument(msg.str());
  }
  if (std::fabs(t) > 1.0) {
    t = t > 0.0 ? 1.0 : -1.0;
    if (clamped) *clamped = true;
  }
  return std::asin(t) / degree();
}

double IsoFunction::zeta_inv(double theta) const { return std::sin(degree() * theta); }

Vector IsoFunction::psi_forward(const Vector& x) const {
  const double r = x.norm();
  if (r < 1e-100) throw std::invalid_argument("psi_forward: zero vector");
  const double ratio = phi_.value(x) / std::pow(r, degree());
  return Q_.apply_exp(zeta(ratio), x);
}

SpherePoint IsoFunction::psi(const SpherePoint& x) const {
  return SpherePoint::project(psi_forward(x.coords()));
}

double IsoFunction::psi_inverse_angle(const SpherePoint& y) const {
  const double half = M_PI / (2.0 * degree());
  const auto offset = [&](double t) {
    const Vector z = Q_.apply_exp(-t, y.coords());
    return t - zeta(phi_.restricted(z));
  };
  const double lo = -half - kBracketPad, hi = half + kBracketPad;
  const double flo = offset(lo), fhi = offset(hi);
  if (flo > 0.0 || fhi < 0.0)
    throw std::runtime_error(
        "psi_inverse: no sign change in the bracket; internal inconsistency");
  return brent(offset, lo, hi, 1e-16);
}

SpherePoint IsoFunction::psi_inverse(const SpherePoint& y) const {
  const double t = psi_inverse_angle(y);
  const SpherePoint xbar = SpherePoint::project(Q_.apply_exp(-t, y.coords()));
  const double defect = (psi_forward(xbar.coords()) - y.coords()).norm();
  if (defect > 1e-10) {
    std::ostringstream msg;
    msg << "psi_inverse: round-trip defect " << defect << " exceeds 1e-10";
    throw std::runtime_error(msg.str());
  }
  return xbar;
}

double IsoFunction::iso_eval(const SpherePoint& y) const {
  return zeta_inv(psi_inverse_angle(y));
}

ScalarField IsoFunction::field() const {
  return ScalarField{0, [this](const Vector& z) { return iso_eval(SpherePoint::project(z)); }};
}

Vector psi_block_form(const IsoFunction& F, const Vector& x) {
  const SkewGenerator& Q = F.generator();
  const int m = Q.ambient_dim();
  const Matrix& E = Q.entries();

  // Read rates off the block diagonal and insist the rest vanishes.
  std::vector<double> rates;
  Matrix pattern = Matrix::Zero(m, m);
  int i = 0;
  while (i + 1 < m && std::fabs(E(i, i + 1)) > 0.0) {
    rates.push_back(E(i, i + 1));
    pattern(i, i + 1) = E(i, i + 1);
    pattern(i + 1, i) = -E(i, i + 1);
    i += 2;
  }
  if ((E - pattern).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("psi_block_form: generator is not in standard block layout");

  const double r = x.norm();
  if (r < 1e-100) throw std::invalid_argument("psi_block_form: zero vector");
  const double theta = F.zeta(F.polynomial().value(x) / std::pow(r, F.degree()));

  Vector out = x;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    const int r0 = static_cast<int>(2 * k);
    const double c = std::cos(rates[k] * theta);
    const double s = std::sin(rates[k] * theta);
    const double u = x[r0], v = x[r0 + 1];
    out[r0] = c * u + s * v;
    out[r0 + 1] = -s * u + c * v;
  }
  return out;
}

nlohmann::json VerifyReport::to_json() const {
  return {{"levels", levels},
          {"maxA_dev", max_a_deviation},
          {"maxB_spread", max_b_spread},
          {"excluded_near_focal", excluded_near_focal},
          {"samples", samples},
          {"seed", seed}};
}

VerifyReport iso_verify(const IsoFunction& F, int samples, std::uint64_t seed,
                        const VerifyOptions& opts) {
  if (samples < 1) throw std::invalid_argument("iso_verify: samples < 1");
  if (opts.levels.empty()) throw std::invalid_argument("iso_verify: no levels requested");

  const NavigationDatum nav(F.generator());
  const ScalarField f = opts.identity_psi_control
                            ? ScalarField{0, [&F](const Vector& z) { return F.polynomial().restricted(z); }}
                            : F.field();
  const int g = F.degree();
  const int per_level =
      (samples + static_cast<int>(opts.levels.size()) - 1) / static_cast<int>(opts.levels.size());

  VerifyReport rep;
  rep.levels = opts.levels;
  rep.seed = seed;

  for (std::size_t li = 0; li < opts.levels.size(); ++li) {
    const double t = opts.levels[li];
    const auto base = sample_polynomial_level(F.polynomial(), t, per_level,
                                              seed + 0x9e3779b9u * (li + 1));
    double bmin = 0.0, bmax = 0.0;
    bool first = true;
    for (const SpherePoint& xbar : base) {
      // Place the sample exactly on the f-level through psi.
      const SpherePoint y = opts.identity_psi_control ? xbar : F.psi(xbar);
      ++rep.samples;
      try {
        const IsoSystemValues v = iso_system_lhs(nav, f, y, opts.fd_step1, opts.fd_step2);
        const double fv = f(y.coords());
        const double target = g * std::sqrt(std::max(0.0, 1.0 - fv * fv));
        rep.max_a_deviation = std::max(rep.max_a_deviation, std::fabs(v.a_value - target));
        if (first) {
          bmin = bmax = v.b_value;
          first = false;
        } else {
          bmin = std::min(bmin, v.b_value);
          bmax = std::max(bmax, v.b_value);
        }
      } catch (const degenerate_point_error&) {
        ++rep.excluded_near_focal;
      }
    }
    if (!first) rep.max_b_spread = std::max(rep.max_b_spread, bmax - bmin);
  }
  return rep;
}

GeneralZeta::GeneralZeta(std::function<double(double)> profile, double lo, double hi,
                         double anchor)
    : profile_(std::move(profile)), lo_(lo), hi_(hi), anchor_(anchor) {
  if (!(lo_ < hi_)) throw std::invalid_argument("GeneralZeta: empty interval");
  if (anchor_ <= lo_ || anchor_ >= hi_)
    throw std::invalid_argument("GeneralZeta: anchor must lie in the open interval");
}

double GeneralZeta::operator()(double t) const {
  if (t < lo_ - 1e-12 || t > hi_ + 1e-12)
    throw std::invalid_argument("GeneralZeta: argument outside the profile interval");
  t = std::min(std::max(t, lo_), hi_);
  if (t == anchor_) return 0.0;

  const auto rate = [this](double th) {
    const double a = profile_(th);
    if (!(a > 0.0))
      throw std::invalid_argument("GeneralZeta: profile must be positive on the open interval");
    return a;
  };

  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err_total = 0.0;
  const auto piece = [&](const std::function<double(double)>& f, double a, double b) {
    if (!(b > a)) return 0.0;
    double err = 0.0;
    double val = 0.0;
    try {
      val = Quad::integrate(f, a, b, 14, 1e-12, &err);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error(
          std::string("GeneralZeta: quadrature failed (non-integrable profile?): ") + e.what());
    }
    err_total += std::fabs(err);
    return val;
  };

  // Square-root substitutions near the endpoints remove the admissible
  // profile singularities: theta = lo + u^2 resp. theta = hi - u^2 turn
  // dtheta / a into the bounded 2u du / a. The rounded-off endpoint itself
  // is nudged one ulp inward.
  const auto at_lo = [&](double u) {
    double th = lo_ + u * u;
    if (th <= lo_) th = std::nextafter(lo_, hi_);
    return 2.0 * u / rate(th);
  };
  const auto at_hi = [&](double u) {
    double th = hi_ - u * u;
    if (th >= hi_) th = std::nextafter(hi_, lo_);
    return 2.0 * u / rate(th);
  };
  const double margin = 0.25 * (hi_ - lo_);
  const double cut_lo = lo_ + margin, cut_hi = hi_ - margin;
  const double l = std::min(anchor_, t), r = std::max(anchor_, t);

  double val = 0.0;
  {
    const double a = l, b = std::min(r, cut_lo);
    if (b > a)
      val += piece(at_lo, std::sqrt(std::max(0.0, a - lo_)), std::sqrt(std::max(0.0, b - lo_)));
  }
  val += piece([&](double th) { return 1.0 / rate(th); }, std::max(l, cut_lo), std::min(r, cut_hi));
  {
    const double a = std::max(l, cut_hi), b = r;
    if (b > a)
      val += piece(at_hi, std::sqrt(std::max(0.0, hi_ - b)), std::sqrt(std::max(0.0, hi_ - a)));
  }

  if (!std::isfinite(val) || err_total > 1e-9 * std::max(1.0, std::fabs(val)))
    throw std::runtime_error("GeneralZeta: quadrature did not converge (non-integrable profile?)");
  return t > anchor_ ? val : -val;
}

double general_zeta(const GeneralZeta& gz, double t) { return gz(t); }

}  // namespace rsphere

#include "rsphere/cartan_munzner.hpp"

#include <cmath>
#include <sstream>

namespace rsphere {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

CMPolynomial CMPolynomial::linear(Vector p) {
  const double n = p.norm();
  if (std::fabs(n - 1.0) > 1e-12)
    throw std::invalid_argument("CMPolynomial::linear: |p| must be 1");
  CMPolynomial phi;
  phi.degree_ = 1;
  phi.ambient_dim_ = static_cast<int>(p.size());
  phi.body_ = Linear{std::move(p)};
  // Both focal points of the height function carry the full multiplicity.
  phi.multiplicities_ = std::make_pair(phi.ambient_dim_ - 2, phi.ambient_dim_ - 2);
  return phi;
}

CMPolynomial CMPolynomial::clifford_quadric(int p, int q) {
  if (p < 1 || q < 1)
    throw std::invalid_argument("CMPolynomial::clifford_quadric: p, q must be positive");
  CMPolynomial phi;
  phi.degree_ = 2;
  phi.ambient_dim_ = p + q + 2;
  phi.body_ = Quadric{p, q};
  // Labeling with m2 = p matches lap phi = 2(p - q) = g^2 (m2 - m1)/2 under
  // the orientation where the normal points toward increasing phi.
  phi.multiplicities_ = std::make_pair(q, p);
  return phi;
}

CMPolynomial CMPolynomial::generic(int degree, int ambient_dim, std::vector<MonomialTerm> terms) {
  if (degree < 1) throw std::invalid_argument("CMPolynomial::generic: degree < 1");
  if (ambient_dim < 2) throw std::invalid_argument("CMPolynomial::generic: ambient_dim < 2");
  for (const auto& t : terms) {
    if (static_cast<int>(t.exponents.size()) != ambient_dim)
      throw std::invalid_argument("CMPolynomial::generic: exponent vector has wrong length");
    if (t.exponents.minCoeff() < 0)
      throw std::invalid_argument("CMPolynomial::generic: negative exponent");
    if (t.exponents.sum() != degree)
      throw std::invalid_argument("CMPolynomial::generic: term degree differs from g (polynomial must be homogeneous)");
  }
  CMPolynomial phi;
  phi.degree_ = degree;
  phi.ambient_dim_ = ambient_dim;
  phi.body_ = Generic{std::move(terms)};
  return phi;
}

CMPolynomial CMPolynomial::from_json(const nlohmann::json& j) {
  const int g = j.at("g").get<int>();
  const auto& jterms = j.at("terms");
  if (!jterms.is_array() || jterms.empty())
    throw std::invalid_argument("CMPolynomial::from_json: terms must be a non-empty array");
  std::vector<MonomialTerm> terms;
  int dim = -1;
  for (const auto& jt : jterms) {
    MonomialTerm t;
    const auto& je = jt.at("exponents");
    if (dim < 0) dim = static_cast<int>(je.size());
    t.exponents.resize(je.size());
    for (std::size_t i = 0; i < je.size(); ++i) t.exponents[static_cast<int>(i)] = je.at(i).get<int>();
    t.coeff = jt.at("coeff").get<double>();
    terms.push_back(std::move(t));
  }
  return generic(g, dim, std::move(terms));
}

double CMPolynomial::value(const Vector& x) const {
  if (static_cast<int>(x.size()) != ambient_dim_)
    throw std::invalid_argument("CMPolynomial::value: dimension mismatch");
  if (const auto* lin = std::get_if<Linear>(&body_)) return lin->p.dot(x);
  if (const auto* qd = std::get_if<Quadric>(&body_)) {
    double s = 0.0;
    for (int i = 0; i <= qd->p; ++i) s += x[i] * x[i];
    for (int i = qd->p + 1; i < ambient_dim_; ++i) s -= x[i] * x[i];
    return s;
  }
  const auto& terms = std::get<Generic>(body_).terms;
  double s = 0.0;
  for (const auto& t : terms) {
    double m = t.coeff;
    for (int i = 0; i < ambient_dim_; ++i) m *= ipow(x[i], t.exponents[i]);
    s += m;
  }
  return s;
}

Vector CMPolynomial::gradient(const Vector& x) const {
  if (static_cast<int>(x.size()) != ambient_dim_)
    throw std::invalid_argument("CMPolynomial::gradient: dimension mismatch");
  if (const auto* lin = std::get_if<Linear>(&body_)) return lin->p;
  if (const auto* qd = std::get_if<Quadric>(&body_)) {
    Vector g(ambient_dim_);
    for (int i = 0; i <= qd->p; ++i) g[i] = 2.0 * x[i];
    for (int i = qd->p + 1; i < ambient_dim_; ++i) g[i] = -2.0 * x[i];
    return g;
  }
  const auto& terms = std::get<Generic>(body_).terms;
  Vector g = Vector::Zero(ambient_dim_);
  for (const auto& t : terms)
    for (int k = 0; k < ambient_dim_; ++k) {
      if (t.exponents[k] == 0) continue;
      double m = t.coeff * t.exponents[k];
      for (int i = 0; i < ambient_dim_; ++i)
        m *= ipow(x[i], i == k ? t.exponents[i] - 1 : t.exponents[i]);
      g[k] += m;
    }
  return g;
}

double CMPolynomial::laplacian(const Vector& x) const {
  if (static_cast<int>(x.size()) != ambient_dim_)
    throw std::invalid_argument("CMPolynomial::laplacian: dimension mismatch");
  if (std::holds_alternative<Linear>(body_)) return 0.0;
  if (const auto* qd = std::get_if<Quadric>(&body_))
    return 2.0 * (qd->p + 1) - 2.0 * (ambient_dim_ - qd->p - 1);
  const auto& terms = std::get<Generic>(body_).terms;
  double s = 0.0;
  for (const auto& t : terms)
    for (int k = 0; k < ambient_dim_; ++k) {
      if (t.exponents[k] < 2) continue;
      double m = t.coeff * t.exponents[k] * (t.exponents[k] - 1);
      for (int i = 0; i < ambient_dim_; ++i)
        m *= ipow(x[i], i == k ? t.exponents[i] - 2 : t.exponents[i]);
      s += m;
    }
  return s;
}

double CMPolynomial::restricted(const Vector& x) const {
  const double r = x.norm();
  if (r < 1e-100) throw std::invalid_argument("CMPolynomial::restricted: zero vector");
  return value(x) / ipow(r, degree_);
}

Vector CMPolynomial::sphere_gradient_exact(const SpherePoint& x) const {
  const Vector& c = x.coords();
  return gradient(c) - static_cast<double>(degree_) * value(c) * c;
}

void CMPolynomial::declare_multiplicities(int m1, int m2) {
  multiplicities_ = std::make_pair(m1, m2);
}

std::optional<std::pair<int, int>> CMPolynomial::clifford_split() const {
  if (const auto* qd = std::get_if<Quadric>(&body_)) return std::make_pair(qd->p, qd->q);
  return std::nullopt;
}

Vector grad_E(const CMPolynomial& phi, const Vector& x) { return phi.gradient(x); }
double laplacian_E(const CMPolynomial& phi, const Vector& x) { return phi.laplacian(x); }

CMCheckReport cm_check(const CMPolynomial& phi, int samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("cm_check: need at least 2 samples");
  RandomStream rng(seed);
  const int m = phi.ambient_dim();
  const int g = phi.degree();

  std::vector<Vector> pts;
  pts.reserve(samples);
  for (int i = 0; i < samples; ++i)
    pts.push_back(rng.uniform(0.5, 2.0) * rng.unit_vector(m));

  CMCheckReport rep;
  rep.samples = samples;
  rep.seed = seed;

  double num = 0.0, den = 0.0;
  std::vector<double> lap(samples), basis(samples);
  for (int i = 0; i < samples; ++i) {
    const double r = pts[i].norm();
    const double grad2 = phi.gradient(pts[i]).squaredNorm();
    const double target = static_cast<double>(g) * g * std::pow(r, 2 * g - 2);
    rep.max_gradient_residual = std::max(rep.max_gradient_residual, std::fabs(grad2 - target));
    lap[i] = phi.laplacian(pts[i]);
    basis[i] = std::pow(r, g - 2);
    num += lap[i] * basis[i];
    den += basis[i] * basis[i];
  }
  rep.c_fit = num / den;
  for (int i = 0; i < samples; ++i)
    rep.max_laplace_residual = std::max(rep.max_laplace_residual, std::fabs(lap[i] - rep.c_fit * basis[i]));

  if (auto ms = phi.multiplicities())
    rep.c_predicted = 0.5 * g * g * (ms->second - ms->first);
  return rep;
}

SpherePoint project_to_level(const CMPolynomial& phi, double t0, SpherePoint guess,
                             int max_iter, double tol) {
  Vector x = guess.coords();
  for (int it = 0; it < max_iter; ++it) {
    const double val = phi.restricted(x);
    if (std::fabs(val - t0) <= tol) return SpherePoint::project(x);
    const Vector gh = phi.gradient(x) - phi.degree() * phi.value(x) * x;
    const double g2 = gh.squaredNorm();
    if (g2 < 1e-20) break;
    x -= (val - t0) * gh / g2;
    x.normalize();
  }
  std::ostringstream msg;
  msg << "project_to_level: Newton failed to reach level " << t0;
  throw std::runtime_error(msg.str());
}

std::vector<SpherePoint> sample_polynomial_level(const CMPolynomial& phi, double t0,
                                                 int count, std::uint64_t seed) {
  if (std::fabs(t0) >= 1.0)
    throw std::invalid_argument("sample_polynomial_level: |t0| must be < 1");
  if (count < 1) throw std::invalid_argument("sample_polynomial_level: count < 1");
  RandomStream rng(seed);
  std::vector<SpherePoint> pts;
  pts.reserve(count);
  long long attempts = 0;
  const long long cap = 100LL * count;
  while (static_cast<int>(pts.size()) < count) {
    if (++attempts > cap)
      throw std::runtime_error("sample_polynomial_level: acceptance rate below 1%");
    SpherePoint draw = SpherePoint::project(rng.unit_vector(phi.ambient_dim()));
    try {
      pts.push_back(project_to_level(phi, t0, draw));
    } catch (const std::runtime_error&) {
      continue;  // discard non-converged draws
    }
  }
  return pts;
}

}  // namespace rsphere

// rsphere: geodesics, closedness classification, isoparametric verification,
// family / focal point clouds and psi diagnostics for Randers spheres by
// navigation. Subcommands: geodesic | classify | verify | family | focal | psi.
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rsphere/families.hpp"
#include "rsphere/io.hpp"

using nlohmann::json;
using namespace rsphere;

namespace {

constexpr double kFig2B = 0.29289321881345248;  // 1 - 1/sqrt(2)

// Fill options from a JSON config for every key the user did not pass
// explicitly on the command line.
void merge_config(CLI::App* cmd, const std::string& config_path) {
  if (config_path.empty()) return;
  std::ifstream in(config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
  json j;
  in >> j;
  for (auto it = j.begin(); it != j.end(); ++it) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + it.key());
    if (opt == nullptr)
      throw CLI::ValidationError("--config", "unknown key '" + it.key() + "'");
    if (opt->count() > 0) continue;  // explicit flags win
    std::vector<std::string> vals;
    if (it.value().is_array())
      for (const auto& v : it.value()) vals.push_back(v.dump());
    else if (it.value().is_string())
      vals.push_back(it.value().get<std::string>());
    else
      vals.push_back(it.value().dump());
    opt->add_result(vals);
    opt->run_callback();
  }
}

void write_json(const std::string& path, const json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

// Closure of the explicit closed-form family curve at the classified
// period: positions at several parameters plus a central-difference
// velocity at 0. This is the curve the rational-ratio criterion describes;
// it coincides with the exponential-form geodesic whenever at most one of
// a, b, c is nonzero.
std::pair<double, double> s2_closure_residuals(double a, double b, double c, double T) {
  double pos = 0.0;
  for (double s : {0.0, 0.77, 1.918}) {
    pos = std::max(pos,
                   (s2_geodesic(a, b, c, s + T).coords() - s2_geodesic(a, b, c, s).coords()).norm());
  }
  const double h = 1e-5;
  const auto fd_vel = [&](double s) {
    return ((s2_geodesic(a, b, c, s + h).coords() - s2_geodesic(a, b, c, s - h).coords()) /
            (2.0 * h))
        .eval();
  };
  const double vel = (fd_vel(T) - fd_vel(0.0)).norm();
  return {pos, vel};
}

json closedness_json(const ClosednessReport& rep) {
  const auto verdict = [](Closedness c) {
    switch (c) {
      case Closedness::Closed: return "closed";
      case Closedness::NonClosed: return "non-closed";
      default: return "undecided";
    }
  };
  json j = {{"verdict", verdict(rep.verdict)},
            {"tolerance", rep.tolerance},
            {"max_denominator", rep.max_denominator},
            {"first_ratio",
             {{"num", rep.first_ratio.num},
              {"den", rep.first_ratio.den},
              {"scaled_error", rep.first_ratio.scaled_error}}},
            {"second_ratio",
             {{"num", rep.second_ratio.num},
              {"den", rep.second_ratio.den},
              {"scaled_error", rep.second_ratio.scaled_error}}}};
  if (rep.period) j["period"] = *rep.period;
  return j;
}

struct ExampleParams {
  std::string example = "g1";
  int n = 0;          // sphere dimension (0 = per-example default)
  double rate = 0.0;  // 0 = per-example default
  int p = 0, q = 0;   // quadric split (0 = derived from n)
  std::string qjson;    // generator file overriding the preset Q
  std::string phijson;  // polynomial file overriding the preset phi
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

bool has_custom_inputs(const ExampleParams& ep) {
  return !ep.qjson.empty() || !ep.phijson.empty();
}

IsoFunction build_example(const ExampleParams& ep) {
  if (has_custom_inputs(ep)) {
    std::optional<CMPolynomial> phi;
    std::optional<SkewGenerator> Q;
    if (!ep.phijson.empty()) phi = CMPolynomial::from_json(load_json_file(ep.phijson));
    if (!ep.qjson.empty()) Q = SkewGenerator::from_json(load_json_file(ep.qjson));
    if (phi && !Q) Q = SkewGenerator::zero(phi->sphere_dim());
    if (Q && !phi) phi = CMPolynomial::linear(Vector::Unit(Q->ambient_dim(), 0));
    return IsoFunction(std::move(*phi), std::move(*Q));
  }
  if (ep.example == "g1") {
    const int n = ep.n > 0 ? ep.n : 2;
    if (n < 2) throw CLI::ValidationError("--n", "g1 needs sphere dimension >= 2");
    const double rate = ep.rate > 0.0 ? ep.rate : 0.5;
    Matrix Q = Matrix::Zero(n + 1, n + 1);
    Q(0, 2) = rate;
    Q(2, 0) = -rate;
    return IsoFunction(CMPolynomial::linear(Vector::Unit(n + 1, 0)), SkewGenerator(Q));
  }
  if (ep.example == "g2") {
    const int n = ep.n > 0 ? ep.n : 4;
    if (n < 3) throw CLI::ValidationError("--n", "g2 needs sphere dimension >= 3");
    int p = ep.p, q = ep.q;
    if (p <= 0 || q <= 0) {
      p = (n - 1) / 2;
      q = n - 1 - p;
    }
    if (p + q + 1 != n)
      throw CLI::ValidationError("--p/--q", "the split must satisfy p + q = n - 1");
    const double rate = ep.rate > 0.0 ? ep.rate : 0.3;
    Matrix Q = Matrix::Zero(n + 1, n + 1);
    Q(p, p + 1) = rate;
    Q(p + 1, p) = -rate;
    return IsoFunction(CMPolynomial::clifford_quadric(p, q), SkewGenerator(Q));
  }
  throw CLI::ValidationError("--example", "must be g1 or g2");
}

void add_example_options(CLI::App* cmd, ExampleParams& ep) {
  cmd->add_option("--example", ep.example, "built-in example: g1 or g2")
      ->check(CLI::IsMember({"g1", "g2"}));
  cmd->add_option("--n", ep.n, "sphere dimension (default 2 for g1, 4 for g2)");
  cmd->add_option("--rate", ep.rate, "rotation rate of Q (default 0.5 for g1, 0.3 for g2)");
  cmd->add_option("--p", ep.p, "quadric split p (g2)");
  cmd->add_option("--q", ep.q, "quadric split q (g2)");
  cmd->add_option("--qjson", ep.qjson, "generator JSON file {\"n\":., \"entries\":[[..]]}");
  cmd->add_option("--phijson", ep.phijson,
                  "polynomial JSON file {\"g\":., \"terms\":[{\"exponents\":[..],\"coeff\":.}]}");
}

int finish(const json& summary, const std::string& out, const std::vector<std::string>& failures) {
  json j = summary;
  j["failures"] = failures;
  write_json(out, j);
  return failures.empty() ? 0 : 1;
}

// ---------------------------------------------------------------- geodesic

int run_geodesic(bool fig1, bool fig2, std::vector<double>& abc, const std::string& qjson,
                 std::vector<double>& x0, std::vector<double>& xbar0, std::vector<double>& range,
                 int resolution, bool el_check, double el_step, double tol_unit,
                 double tol_closure, double tol_el, const std::string& curve_out,
                 const std::string& summary_out) {
  std::vector<std::string> failures;
  json summary;
  summary["command"] = "geodesic";

  if (fig1) {
    abc = {0.0, 0.5, 0.0};
    if (range.empty()) range = {0.0, 4.0 * M_PI};
  } else if (fig2) {
    abc = {0.0, kFig2B, 0.0};
    if (range.empty()) range = {0.0, 29.0 * M_PI};
  }
  if (abc.size() != 3 && qjson.empty())
    throw CLI::ValidationError("--abc", "expected three values a b c (or a --qjson file)");
  if (range.empty()) range = {0.0, 4.0 * M_PI};
  if (range.size() != 2 || !(range[1] > range[0]))
    throw CLI::ValidationError("--range", "expected lo hi with hi > lo");
  if (resolution < 2) throw CLI::ValidationError("--resolution", "need at least 2 samples");

  const bool abc_family = qjson.empty();
  const GeodesicSpec spec = [&]() {
    if (abc_family) return s2_spec(abc[0], abc[1], abc[2]);
    SkewGenerator Q = SkewGenerator::from_json(load_json_file(qjson));
    const int m = Q.ambient_dim();
    Vector x = Vector::Unit(m, 0), xb = Vector::Unit(m, 1);
    if (!x0.empty()) {
      if (static_cast<int>(x0.size()) != m)
        throw CLI::ValidationError("--x", "dimension must match the generator");
      x = Eigen::Map<Vector>(x0.data(), m);
    }
    if (!xbar0.empty()) {
      if (static_cast<int>(xbar0.size()) != m)
        throw CLI::ValidationError("--xbar", "dimension must match the generator");
      xb = Eigen::Map<Vector>(xbar0.data(), m);
    }
    return GeodesicSpec::from_navigation(std::move(Q), SpherePoint::project(x),
                                         Vector(xb.normalized()));
  }();
  if (abc_family) summary["abc"] = abc;
  summary["range"] = range;
  summary["resolution"] = resolution;

  std::vector<double> svals;
  std::vector<Vector> pts;
  sample_geodesic(spec, range[0], range[1], resolution, svals, pts);
  if (!curve_out.empty()) {
    write_curve_csv(curve_out, svals, pts);
    summary["curve_csv"] = curve_out;
  }

  const NavigationDatum D(spec.generator());
  double unit_residual = 0.0;
  for (double s : svals) {
    const double F = metric_eval(D, geodesic_eval(spec, s), geodesic_velocity(spec, s));
    unit_residual = std::max(unit_residual, std::fabs(F - 1.0));
  }
  summary["unit_speed_residual"] = unit_residual;
  if (unit_residual > tol_unit) failures.push_back("unit speed residual above tolerance");

  if (abc_family) {
    const ClosednessReport rep = classify_closedness(abc[0], abc[1], abc[2]);
    summary["closedness"] = closedness_json(rep);

    // How far the closed-form family curve sits from the sampled geodesic
    // (zero whenever at most one of a, b, c is active).
    double agreement = 0.0;
    for (double s : svals)
      agreement =
          std::max(agreement, (s2_geodesic(abc[0], abc[1], abc[2], s).coords() -
                               geodesic_eval(spec, s).coords())
                                  .norm());
    summary["explicit_form_agreement"] = agreement;

    if (rep.verdict == Closedness::Closed) {
      const double T = *rep.period;
      const auto [pos, vel] = s2_closure_residuals(abc[0], abc[1], abc[2], T);
      summary["closure_residual_position"] = pos;
      summary["closure_residual_velocity"] = vel;
      if (pos > tol_closure || vel > tol_closure)
        failures.push_back("closed verdict but the family curve does not return at the period");
      if (agreement < 1e-10) {
        // The verdict also certifies the sampled geodesic.
        const double gpos =
            (geodesic_eval(spec, T).coords() - geodesic_eval(spec, 0.0).coords()).norm();
        const double gvel =
            (geodesic_velocity(spec, T).vec() - geodesic_velocity(spec, 0.0).vec()).norm();
        summary["geodesic_closure_position"] = gpos;
        summary["geodesic_closure_velocity"] = gvel;
        if (gpos > tol_closure || gvel > tol_closure)
          failures.push_back("closed verdict but the geodesic does not return at the period");
      }
    }
  }

  if (el_check) {
    const double window = std::min(range[1] - range[0], 1.0);
    const int count = static_cast<int>(window / el_step) + 1;
    std::vector<double> es;
    std::vector<Vector> ep;
    sample_geodesic(spec, range[0], range[0] + (count - 1) * el_step, count, es, ep);
    const double res = el_residual(spec.generator(), ep, el_step);
    summary["el_residual"] = res;
    summary["el_step"] = el_step;
    if (res > tol_el) failures.push_back("euler-lagrange residual above tolerance");
  }

  return finish(summary, summary_out, failures);
}

// ---------------------------------------------------------------- classify

int run_classify(const std::vector<double>& abc, double tol, long long maxden,
                 double tol_closure, const std::string& out) {
  if (abc.size() != 3) throw CLI::ValidationError("--abc", "expected three values a b c");
  std::vector<std::string> failures;
  const ClosednessReport rep = classify_closedness(abc[0], abc[1], abc[2], tol, maxden);
  json summary;
  summary["command"] = "classify";
  summary["abc"] = abc;
  summary["closedness"] = closedness_json(rep);
  if (rep.verdict == Closedness::Closed) {
    const double T = *rep.period;
    const auto [pos, vel] = s2_closure_residuals(abc[0], abc[1], abc[2], T);
    summary["closure_residual_position"] = pos;
    summary["closure_residual_velocity"] = vel;
    if (pos > tol_closure || vel > tol_closure)
      failures.push_back("closed verdict inconsistent with the family curve");
  }
  return finish(summary, out, failures);
}

// ---------------------------------------------------------------- verify

int run_verify(const ExampleParams& ep, int samples, std::uint64_t seed,
               std::vector<double> levels, bool control, double tol_a, double tol_b,
               double control_min, const std::string& out) {
  const IsoFunction F = build_example(ep);
  VerifyOptions opts;
  if (!levels.empty()) opts.levels = std::move(levels);
  opts.identity_psi_control = control;
  const VerifyReport rep = iso_verify(F, samples, seed, opts);

  std::vector<std::string> failures;
  json summary = rep.to_json();
  summary["command"] = "verify";
  summary["example"] = ep.example;
  summary["control"] = control;
  if (control) {
    if (rep.max_a_deviation <= control_min)
      failures.push_back("negative control unexpectedly satisfies the isoparametric system");
  } else {
    if (rep.max_a_deviation > tol_a) failures.push_back("A deviates from g sqrt(1 - f^2)");
    if (rep.max_b_spread > tol_b) failures.push_back("B is not constant on level sets");
  }
  return finish(summary, out, failures);
}

// ---------------------------------------------------------------- family

int run_family(const ExampleParams& ep, bool fig34, std::vector<double> tvals, int count,
               std::uint64_t seed, const std::string& format, const std::string& prefix,
               bool verify, const std::string& out) {
  if (tvals.empty()) tvals = {-0.9, -0.5, 0.0, 0.5, 0.9};
  if (prefix.empty()) throw CLI::ValidationError("--prefix", "output prefix is required");
  std::vector<std::string> failures;
  json summary;
  summary["command"] = "family";
  summary["t"] = tvals;
  summary["seed"] = seed;
  json files = json::array();

  const auto emit = [&](const IsoFunction& F, const std::string& tag) {
    const LevelSample L = sample_level(F.polynomial(), F.generator(), 0.0, count, seed);
    for (double t : tvals) {
      FamilySnapshot snap;
      try {
        snap = family_snapshot(F, L, t, verify);
      } catch (const std::runtime_error& e) {
        failures.push_back(e.what());
        continue;
      }
      std::ostringstream name;
      name << prefix << tag << "_t";
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%+.2f", t);
      name << buf << (format == "csv" ? ".csv" : ".ply");
      if (format == "csv")
        write_points_csv(name.str(), t, snap.points);
      else {
        std::ostringstream comment;
        comment << "isoparametric level t=" << format_sig17(t);
        write_points_ply(name.str(), snap.points, comment.str());
      }
      files.push_back(name.str());
    }
  };

  if (fig34) {
    // The same seed hypersurface flowed in (S^2, h) and (S^2, F_Q).
    const IsoFunction Fq = build_example(ep);
    const IsoFunction Fh(Fq.polynomial(), SkewGenerator::zero(Fq.ambient_dim() - 1));
    emit(Fh, "_h");
    emit(Fq, "_fq");
  } else {
    emit(build_example(ep), "");
  }
  summary["files"] = files;
  return finish(summary, out, failures);
}

// ---------------------------------------------------------------- focal

int run_focal(const ExampleParams& ep, int count, std::uint64_t seed, const std::string& format,
              const std::string& prefix, double tol_point, double tol_constraint,
              const std::string& out) {
  const IsoFunction F = build_example(ep);
  const LevelSample L = sample_level(F.polynomial(), F.generator(), 0.0, count, seed);
  const auto [plus, minus] = focal_submanifolds(F, L);

  std::vector<std::string> failures;
  json summary;
  summary["command"] = "focal";
  summary["example"] = ep.example;
  summary["seed"] = seed;

  if (!prefix.empty()) {
    const std::string ext = format == "csv" ? ".csv" : ".ply";
    const std::string fplus = prefix + "_plus" + ext;
    const std::string fminus = prefix + "_minus" + ext;
    if (format == "csv") {
      write_points_csv(fplus, 1.0, plus.points);
      write_points_csv(fminus, -1.0, minus.points);
    } else {
      write_points_ply(fplus, plus.points, "focal submanifold M+");
      write_points_ply(fminus, minus.points, "focal submanifold M-");
    }
    summary["files"] = {fplus, fminus};
  }

  if (has_custom_inputs(ep)) {
    // No closed-form prediction for user-supplied data; the focal
    // degeneracy proxy inside focal_submanifolds is the check.
    summary["points_plus"] = plus.points.size();
    summary["points_minus"] = minus.points.size();
  } else if (ep.example == "g1") {
    // Both focal sets are single points: exp(+-(pi/2) Q)(+-p).
    const int m = F.ambient_dim();
    const Vector target_plus = F.generator().apply_exp(M_PI / 2.0, Vector::Unit(m, 0));
    const Vector target_minus = F.generator().apply_exp(-M_PI / 2.0, Vector(-Vector::Unit(m, 0)));
    double dev = 0.0;
    for (const SpherePoint& y : plus.points) dev = std::max(dev, (y.coords() - target_plus).norm());
    for (const SpherePoint& y : minus.points)
      dev = std::max(dev, (y.coords() - target_minus).norm());
    summary["max_point_deviation"] = dev;
    summary["predicted_plus"] = std::vector<double>(target_plus.data(), target_plus.data() + m);
    summary["predicted_minus"] = std::vector<double>(target_minus.data(), target_minus.data() + m);
    if (dev > tol_point) failures.push_back("focal points deviate from the predicted points");
  } else {
    const auto split = F.polynomial().clifford_split();
    const int p = split->first;
    const double rate = F.generator().entries()(p, p + 1);
    double dev = 0.0;
    for (const SpherePoint& y : plus.points)
      dev = std::max(dev, std::fabs(y.coords()[p + 1] + std::tan(M_PI * rate / 4.0) * y.coords()[p]));
    for (const SpherePoint& y : minus.points)
      dev = std::max(dev, std::fabs(y.coords()[p] + std::tan(M_PI * rate / 4.0) * y.coords()[p + 1]));
    summary["max_constraint_residual"] = dev;
    if (dev > tol_constraint) failures.push_back("focal samples violate the linear constraint");
  }
  return finish(summary, out, failures);
}

// ---------------------------------------------------------------- psi

int run_psi(const ExampleParams& ep, int samples, std::uint64_t seed, int scan_check,
            double tol_roundtrip, double tol_scan, const std::string& out) {
  const IsoFunction F = build_example(ep);
  const int m = F.ambient_dim();
  RandomStream rng(seed);

  double max_roundtrip = 0.0;
  for (int k = 0; k < samples; ++k) {
    const SpherePoint x = SpherePoint::project(rng.unit_vector(m));
    const SpherePoint back = F.psi_inverse(F.psi(x));
    max_roundtrip = std::max(max_roundtrip, (back.coords() - x.coords()).norm());
  }

  std::vector<std::string> failures;
  json summary;
  summary["command"] = "psi";
  summary["example"] = ep.example;
  summary["samples"] = samples;
  summary["seed"] = seed;
  summary["max_roundtrip_error"] = max_roundtrip;
  if (max_roundtrip > tol_roundtrip) failures.push_back("psi round trip above tolerance");

  if (scan_check > 0) {
    double max_gap = 0.0;
    const double half = M_PI / (2.0 * F.degree()) + 1e-6;
    for (int k = 0; k < scan_check; ++k) {
      const SpherePoint y = SpherePoint::project(rng.unit_vector(m));
      const double t_impl = F.psi_inverse_angle(y);
      // dense scan + bisection refinement, independent of the brent path
      const auto offset = [&](double t) {
        const Vector z = F.generator().apply_exp(-t, y.coords());
        return t - F.zeta(F.polynomial().restricted(z));
      };
      double lo = -half, hi = half;
      const int grid = 100000;
      double prev = offset(lo), prev_t = lo;
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
      max_gap = std::max(max_gap, std::fabs(0.5 * (lo + hi) - t_impl));
    }
    summary["scan_disagreement"] = max_gap;
    if (max_gap > tol_scan) failures.push_back("scan oracle disagrees with the root finder");
  }
  return finish(summary, out, failures);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randers sphere toolkit: navigation geodesics and isoparametric families"};
  app.require_subcommand(1);

  std::string config;

  // geodesic
  auto* cmd_geo = app.add_subcommand("geodesic", "sample a geodesic, check unit speed and closure");
  bool fig1 = false, fig2 = false, el_check = false;
  std::vector<double> abc, range, geo_x, geo_xbar;
  int resolution = 2001;
  double el_step = 5e-4, tol_unit = 1e-9, tol_closure = 1e-8, tol_el = 1e-4;
  std::string curve_out, geo_summary, geo_qjson;
  cmd_geo->add_flag("--fig1", fig1, "preset a=c=0, b=1/2, s in [0, 4pi]");
  cmd_geo->add_flag("--fig2", fig2, "preset a=c=0, b=1-1/sqrt(2), s in [0, 29pi]");
  cmd_geo->add_option("--abc", abc, "coefficients a b c of the S^2 generator")->expected(3);
  cmd_geo->add_option("--qjson", geo_qjson, "generator JSON file for a general-dimension run");
  cmd_geo->add_option("--x", geo_x, "initial point (with --qjson; default e1)");
  cmd_geo->add_option("--xbar", geo_xbar, "navigation direction X - Qx (with --qjson; default e2)");
  cmd_geo->add_option("--range", range, "parameter window lo hi")->expected(2);
  cmd_geo->add_option("--resolution", resolution, "number of samples")->check(CLI::Range(2, 1000000000));
  cmd_geo->add_flag("--el-check", el_check, "run the euler-lagrange residual oracle");
  cmd_geo->add_option("--el-step", el_step, "oracle step (<= 1e-3)")->check(CLI::PositiveNumber);
  cmd_geo->add_option("--tol-unit", tol_unit, "unit speed tolerance")->check(CLI::PositiveNumber);
  cmd_geo->add_option("--tol-closure", tol_closure, "closure tolerance")->check(CLI::PositiveNumber);
  cmd_geo->add_option("--tol-el", tol_el, "residual tolerance")->check(CLI::PositiveNumber);
  cmd_geo->add_option("--out", curve_out, "curve CSV path");
  cmd_geo->add_option("--summary", geo_summary, "summary JSON path (stdout otherwise)");
  cmd_geo->add_option("--config", config, "JSON config file");

  // classify
  auto* cmd_cls = app.add_subcommand("classify", "closedness of the S^2 family");
  std::vector<double> cls_abc;
  double cls_tol = 1e-9, cls_closure = 1e-8;
  long long maxden = 1000000;
  std::string cls_out;
  cmd_cls->add_option("--abc", cls_abc, "coefficients a b c")->expected(3);
  cmd_cls->add_option("--tol", cls_tol, "rational coherence tolerance")->check(CLI::PositiveNumber);
  cmd_cls->add_option("--max-denominator", maxden, "largest denominator searched")->check(CLI::Range(1, 1000000000));
  cmd_cls->add_option("--tol-closure", cls_closure, "numeric closure tolerance")->check(CLI::PositiveNumber);
  cmd_cls->add_option("--out", cls_out, "report JSON path");
  cmd_cls->add_option("--config", config, "JSON config file");

  // verify
  auto* cmd_ver = app.add_subcommand("verify", "isoparametric system verification");
  ExampleParams ver_ep;
  add_example_options(cmd_ver, ver_ep);
  int ver_samples = 500;
  std::uint64_t ver_seed = 0;
  std::vector<double> ver_levels;
  bool ver_control = false;
  double tol_a = 2e-4, tol_b = 5e-4, control_min = 1e-2;
  std::string ver_out;
  cmd_ver->add_option("--samples", ver_samples, "total sample budget")->check(CLI::Range(1, 1000000000));
  cmd_ver->add_option("--seed", ver_seed, "sampling seed");
  cmd_ver->add_option("--levels", ver_levels, "levels of f to probe");
  cmd_ver->add_flag("--control", ver_control, "negative control: identity psi inverse");
  cmd_ver->add_option("--tol-a", tol_a, "tolerance on A - g sqrt(1-f^2)")->check(CLI::PositiveNumber);
  cmd_ver->add_option("--tol-b", tol_b, "tolerance on the per-level B spread")->check(CLI::PositiveNumber);
  cmd_ver->add_option("--control-min", control_min, "control must deviate by more than this")->check(CLI::PositiveNumber);
  cmd_ver->add_option("--out", ver_out, "report JSON path");
  cmd_ver->add_option("--config", config, "JSON config file");

  // family
  auto* cmd_fam = app.add_subcommand("family", "emit isoparametric family snapshots");
  ExampleParams fam_ep;
  add_example_options(cmd_fam, fam_ep);
  bool fig34 = false, fam_verify = false;
  std::vector<double> fam_t;
  int fam_count = 200;
  std::uint64_t fam_seed = 0;
  std::string fam_format = "ply", fam_prefix, fam_out;
  cmd_fam->add_flag("--fig34", fig34, "emit the g1 family for both Q=0 and the preset Q");
  cmd_fam->add_option("--t", fam_t, "levels to emit");
  cmd_fam->add_option("--count", fam_count, "points per snapshot")->check(CLI::Range(1, 1000000000));
  cmd_fam->add_option("--seed", fam_seed, "sampling seed");
  cmd_fam->add_option("--format", fam_format, "ply or csv")->check(CLI::IsMember({"ply", "csv"}));
  cmd_fam->add_option("--prefix", fam_prefix, "output path prefix");
  cmd_fam->add_flag("--verify", fam_verify, "check iso_eval = t on every emitted point");
  cmd_fam->add_option("--out", fam_out, "summary JSON path");
  cmd_fam->add_option("--config", config, "JSON config file");

  // focal
  auto* cmd_foc = app.add_subcommand("focal", "emit focal submanifolds and check predictions");
  ExampleParams foc_ep;
  add_example_options(cmd_foc, foc_ep);
  int foc_count = 100;
  std::uint64_t foc_seed = 0;
  double tol_point = 1e-12, tol_constraint = 1e-10;
  std::string foc_format = "ply", foc_prefix, foc_out;
  cmd_foc->add_option("--count", foc_count, "seed points on the zero level")->check(CLI::Range(1, 1000000000));
  cmd_foc->add_option("--seed", foc_seed, "sampling seed");
  cmd_foc->add_option("--format", foc_format, "ply or csv")->check(CLI::IsMember({"ply", "csv"}));
  cmd_foc->add_option("--prefix", foc_prefix, "output path prefix");
  cmd_foc->add_option("--tol-point", tol_point, "tolerance against the predicted focal points (g1)")->check(CLI::PositiveNumber);
  cmd_foc->add_option("--tol-constraint", tol_constraint, "tolerance on the focal constraint (g2)")->check(CLI::PositiveNumber);
  cmd_foc->add_option("--out", foc_out, "summary JSON path");
  cmd_foc->add_option("--config", config, "JSON config file");

  // psi
  auto* cmd_psi = app.add_subcommand("psi", "round-trip diagnostics of the psi homeomorphism");
  ExampleParams psi_ep;
  add_example_options(cmd_psi, psi_ep);
  int psi_samples = 1000, scan_check = 0;
  std::uint64_t psi_seed = 0;
  double tol_roundtrip = 1e-10, tol_scan = 1e-9;
  std::string psi_out;
  cmd_psi->add_option("--samples", psi_samples, "round-trip sample count")->check(CLI::Range(1, 1000000000));
  cmd_psi->add_option("--seed", psi_seed, "sampling seed");
  cmd_psi->add_option("--scan-check", scan_check, "points cross-checked against the scan oracle")->check(CLI::Range(0, 1000000000));
  cmd_psi->add_option("--tol-roundtrip", tol_roundtrip, "round-trip tolerance")->check(CLI::PositiveNumber);
  cmd_psi->add_option("--tol-scan", tol_scan, "scan agreement tolerance")->check(CLI::PositiveNumber);
  cmd_psi->add_option("--out", psi_out, "report JSON path");
  cmd_psi->add_option("--config", config, "JSON config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_geo->parsed()) {
      merge_config(cmd_geo, config);
      return run_geodesic(fig1, fig2, abc, geo_qjson, geo_x, geo_xbar, range, resolution,
                          el_check, el_step, tol_unit, tol_closure, tol_el, curve_out,
                          geo_summary);
    }
    if (cmd_cls->parsed()) {
      merge_config(cmd_cls, config);
      return run_classify(cls_abc, cls_tol, maxden, cls_closure, cls_out);
    }
    if (cmd_ver->parsed()) {
      merge_config(cmd_ver, config);
      return run_verify(ver_ep, ver_samples, ver_seed, ver_levels, ver_control, tol_a, tol_b,
                        control_min, ver_out);
    }
    if (cmd_fam->parsed()) {
      merge_config(cmd_fam, config);
      return run_family(fam_ep, fig34, fam_t, fam_count, fam_seed, fam_format, fam_prefix,
                        fam_verify, fam_out);
    }
    if (cmd_foc->parsed()) {
      merge_config(cmd_foc, config);
      return run_focal(foc_ep, foc_count, foc_seed, foc_format, foc_prefix, tol_point,
                       tol_constraint, foc_out);
    }
    if (cmd_psi->parsed()) {
      merge_config(cmd_psi, config);
      return run_psi(psi_ep, psi_samples, psi_seed, scan_check, tol_roundtrip, tol_scan, psi_out);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

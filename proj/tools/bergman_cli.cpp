// Command-line front end. Exit codes: 0 success, 1 computational error, 2 usage error.
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "bergman/bergman.hpp"

using namespace bergman;

namespace {

struct RunConfig {
  std::string domain_file;
  int degree = 12;
  std::string quad;  // "scheme:resolution"
  std::uint64_t seed = 0;
  std::string kernel = "model";  // or "exact"
  std::string cache_dir;
  std::string out;
  std::vector<std::string> tol;
  std::string point, X, Y;
};

using Source = std::variant<KernelModel, ClosedFormKernel>;

std::map<std::string, double> parse_tols(const std::vector<std::string>& items) {
  static const std::map<std::string, double> defaults{{"drop_tol", 1e-12},  {"psd_tol", 1e-10},
                                                      {"profile_tol", 1e-10}, {"deriv_tol", 1e-6},
                                                      {"lower_slack", 1e-9}};
  std::map<std::string, double> t = defaults;
  for (const std::string& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects name=value, got '" + s + "'");
    const std::string name = s.substr(0, eq);
    if (!defaults.count(name)) throw UsageError("--tol: unknown tolerance '" + name + "'");
    try {
      t[name] = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--tol: bad value in '" + s + "'");
    }
  }
  return t;
}

std::optional<QuadratureRule> make_quad(const RunConfig& rc, const DomainSpec& d) {
  std::string qspec = rc.quad;
  if (qspec.empty()) {
    if (d.is_reinhardt()) return std::nullopt;
    qspec = "monte-carlo:200000";
  }
  const auto colon = qspec.find(':');
  if (colon == std::string::npos) throw UsageError("--quad expects scheme:resolution, got '" + qspec + "'");
  int res = 0;
  try {
    res = std::stoi(qspec.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("--quad: bad resolution in '" + qspec + "'");
  }
  return build_quadrature(d, parse_scheme(qspec.substr(0, colon)), res, rc.seed);
}

std::string quad_id(const RunConfig& rc, const DomainSpec& d) {
  if (rc.quad.empty() && d.is_reinhardt()) return "closed-form";
  return (rc.quad.empty() ? std::string("monte-carlo:200000") : rc.quad) + "@" + std::to_string(rc.seed);
}

KernelModel make_model(const RunConfig& rc, const DomainSpec& d, const std::map<std::string, double>& tol) {
  if (rc.degree < 0) throw UsageError("--degree must be >= 0");
  BuildOptions opt;
  opt.drop_tol = tol.at("drop_tol");
  auto build = [&] { return build_model(d, rc.degree, make_quad(rc, d), opt); };
  if (rc.cache_dir.empty()) return build();
  ModelCache cache(rc.cache_dir);
  return cache.get_or_build(model_cache_key(d, rc.degree, quad_id(rc, d), opt), build);
}

Source make_source(const RunConfig& rc, const DomainSpec& d, const std::map<std::string, double>& tol) {
  if (rc.kernel == "exact") {
    if (const auto* b = std::get_if<Ball>(&d.variant())) return ClosedFormKernel::ball(b->center, b->radius);
    if (const auto* p = std::get_if<Polydisc>(&d.variant())) return ClosedFormKernel::polydisc(p->center, p->radii);
    throw UsageError("--kernel exact is available for balls and polydiscs only");
  }
  if (rc.kernel != "model") throw UsageError("--kernel must be 'model' or 'exact'");
  return make_model(rc, d, tol);
}

json source_meta(const Source& s) {
  json m;
  if (const auto* k = std::get_if<KernelModel>(&s)) {
    m["kernel"] = "model";
    m["degree"] = k->degree();
    m["basis_size"] = k->basis().size();
    m["retained"] = k->size();
    m["cond_estimate"] = k->cond_estimate();
    m["norm_source"] = k->norm_source();
    m["dropped"] = k->dropped();
  } else {
    m["kernel"] = "exact";
    m["degree"] = nullptr;
    m["cond_estimate"] = 1.0;
  }
  return m;
}

CVec require_vec(const std::string& s, const std::string& flag, int n) {
  if (s.empty()) throw UsageError(flag + " is required");
  const CVec v = parse_cvec(s, flag);
  if (v.size() != n) throw UsageError(flag + ": expected " + std::to_string(n) + " complex entries");
  return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& flag) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw UsageError(flag + ": cannot parse '" + tok + "'");
    }
  }
  if (v.empty()) throw UsageError(flag + ": empty list");
  return v;
}

/// CSV goes to --out (metadata next to it as <out>.meta.json) or to stdout
/// followed by a "# meta" line.
void emit(const RunConfig& rc, const CsvWriter& csv, json meta) {
  meta["seed"] = rc.seed;
  if (rc.out.empty()) {
    std::cout << csv.str() << "# meta " << meta.dump() << "\n";
  } else {
    write_text_file(rc.out, csv.str());
    write_text_file(rc.out + ".meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << rc.out << " and " << rc.out << ".meta.json\n";
  }
}

std::string f(double v) { return fmt_double(v); }

std::string show(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Bergman spaces: kernels, curvature, minimum integrals and boundary experiments"};
  app.require_subcommand(1);
  RunConfig rc;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--domain", rc.domain_file, "Domain JSON file")->required();
    sc->add_option("--degree", rc.degree, "Truncation degree")->default_val(12);
    sc->add_option("--quad", rc.quad, "Quadrature scheme:resolution (tensor-grid or monte-carlo)");
    sc->add_option("--seed", rc.seed, "Random seed")->default_val(0);
    sc->add_option("--kernel", rc.kernel, "model (truncated) or exact (balls and polydiscs)")->default_val("model");
    sc->add_option("--cache", rc.cache_dir, "Model cache directory");
    sc->add_option("--out", rc.out, "Output path");
    sc->add_option("--tol", rc.tol, "Tolerance override name=value");
  };

  auto* build = app.add_subcommand("build", "Build and serialize a model");
  common(build);
  auto* kernel = app.add_subcommand("kernel", "Kernel and derivative table at a point");
  common(kernel);
  kernel->add_option("--point", rc.point, "Point as re,im,...");
  auto* curv = app.add_subcommand("curv", "Metric and curvatures at a point");
  common(curv);
  curv->add_option("--point", rc.point, "Point as re,im,...");
  curv->add_option("--X", rc.X, "Direction X");
  curv->add_option("--Y", rc.Y, "Direction Y (default X)");
  auto* minint = app.add_subcommand("minint", "Minimum integrals and identity residuals");
  common(minint);
  minint->add_option("--point", rc.point, "Point as re,im,...");
  minint->add_option("--X", rc.X, "Direction X");
  minint->add_option("--Y", rc.Y, "Direction Y (default X)");

  std::string q_str, t_str = "0.3,0.2,0.1,0.05,0.02,0.01";
  int pairs = 50;
  auto* sweep = app.add_subcommand("sweep", "Curvature along the inward normal");
  common(sweep);
  sweep->add_option("--q", q_str, "Boundary point (or point to project)")->required();
  sweep->add_option("--t", t_str, "Decreasing distances");
  sweep->add_option("--pairs", pairs, "Random direction pairs")->default_val(50);

  std::string U_file;
  int resolution = 200000;
  double basis_scale = 1.0;
  auto* localize = app.add_subcommand("localize", "Minimum-integral ratios against U cap domain");
  common(localize);
  localize->add_option("--U", U_file, "Neighborhood domain JSON")->required();
  localize->add_option("--q", q_str, "Boundary point")->required();
  localize->add_option("--t", t_str, "Decreasing distances");
  localize->add_option("--X", rc.X, "Direction X");
  localize->add_option("--Y", rc.Y, "Direction Y (default X)");
  localize->add_option("--nodes", resolution, "Monte-Carlo draws for U cap domain")->default_val(200000);
  localize->add_option("--basis-scale", basis_scale, "Monomial scale for the local space")->default_val(1.0);

  std::string radii_str;
  double C = 2.0;
  auto* squeeze = app.add_subcommand("squeeze", "Kernel and metric against an inscribed polydisc");
  common(squeeze);
  squeeze->add_option("--point", rc.point, "Point as re,im,...");
  squeeze->add_option("--radii", radii_str, "Polydisc radii")->required();
  squeeze->add_option("--C", C, "Comparison constant")->default_val(2.0);

  std::string coeff_str, profile = "catlin", beta_str;
  double delta = 0.01, ctilde = 1.0, M = 1.0;
  int ell = 0, samples = 10000;
  auto* weight = app.add_subcommand("check-weight", "Check hypotheses on w = sum c_j |z_j|^2 over a polydisc");
  weight->add_option("--domain", rc.domain_file, "Domain JSON (sampling region is intersected with it)");
  weight->add_option("--coeffs", coeff_str, "Coefficients c_j")->required();
  weight->add_option("--profile", profile, "catlin or psh")->default_val("catlin");
  weight->add_option("--beta", beta_str, "Polydisc radii (catlin)");
  weight->add_option("--Ctilde", ctilde, "Hessian constant (catlin)")->default_val(1.0);
  weight->add_option("--delta", delta, "delta (psh)")->default_val(0.01);
  weight->add_option("--ell", ell, "Levi rank (psh)")->default_val(0);
  weight->add_option("--C", C, "Profile constant (psh)")->default_val(2.0);
  weight->add_option("--M", M, "Bound on |w|")->default_val(1.0);
  weight->add_option("--samples", samples, "Sample count")->default_val(10000);
  weight->add_option("--seed", rc.seed, "Random seed")->default_val(0);
  weight->add_option("--tol", rc.tol, "Tolerance override name=value");
  weight->add_option("--out", rc.out, "Output path");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--seed", rc.seed, "Random seed")->default_val(0);
  verify->add_option("--out", rc.out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto tol = parse_tols(rc.tol);

    if (verify->parsed()) {
      CsvWriter csv({"module", "check", "pass", "detail"});
      int failed = 0;
      for (const CheckResult& r : verify_all(rc.seed)) {
        csv.row({r.module, r.name, r.pass ? "1" : "0", "\"" + r.detail + "\""});
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.module << "/" << r.name << ": " << r.detail << "\n";
        if (!r.pass) ++failed;
      }
      emit(rc, csv, json{{"command", "verify"}, {"failed", failed}});
      return failed == 0 ? 0 : 1;
    }

    if (weight->parsed()) {
      const std::vector<double> c = parse_list(coeff_str, "--coeffs");
      const int n = static_cast<int>(c.size());
      std::optional<DomainSpec> dom;
      if (!rc.domain_file.empty()) dom = load_domain(rc.domain_file);
      WeightFunction w;
      w.M = M;
      w.value = [c](const CVec& z) {
        double s = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * std::norm(z[static_cast<Eigen::Index>(j)]);
        return s;
      };
      w.hessian = [c, n](const CVec&) {
        CMat H = CMat::Zero(n, n);
        for (int j = 0; j < n; ++j) H(j, j) = c[static_cast<std::size_t>(j)];
        return H;
      };
      PolyBox region;
      HessianProfile prof;
      if (profile == "catlin") {
        const std::vector<double> b = parse_list(beta_str, "--beta");
        if (static_cast<int>(b.size()) != n) throw UsageError("--beta must have one radius per coefficient");
        region = PolyBox{CVec::Zero(n), Eigen::Map<const RVec>(b.data(), n)};
        prof = catlin_profile(region.radii, ctilde);
        w.beta = region.radii;
        w.C_alpha = {2.0 * n, 2.0 * n, 1.0};
      } else if (profile == "psh") {
        if (!dom) throw UsageError("--profile psh needs --domain (its rho enters the profile)");
        const AnisoBox box = aniso_box(AnisoKind::P_delta_a, CVec::Zero(n), delta, 1.0, ell);
        region = box.as_polybox();
        prof = psh_profile(*dom, delta, ell, C);
      } else {
        throw UsageError("--profile must be catlin or psh");
      }
      WeightCheckOptions opt;
      opt.samples = samples;
      opt.seed = rc.seed;
      opt.psd_tol = tol.at("psd_tol");
      opt.profile_tol = tol.at("profile_tol");
      opt.deriv_tol = tol.at("deriv_tol");
      const WeightCheckReport r = check_weight(w, region, dom ? &*dom : nullptr, prof, opt);
      CsvWriter csv({"hypothesis", "checked", "pass", "margin", "witness"});
      auto line = [&](const std::string& name, const HypothesisCheck& h) {
        std::string wit;
        for (Eigen::Index j = 0; j < h.witness.size(); ++j)
          wit += (j ? " " : "") + f(h.witness[j].real()) + " " + f(h.witness[j].imag());
        csv.row({name, h.checked ? "1" : "0", h.pass ? "1" : "0", f(h.margin), wit});
      };
      line("bounded", r.bounded);
      line("psh", r.psh);
      line("hessian_profile", r.hessian);
      line("derivative_bounds", r.derivs);
      emit(rc, csv, json{{"command", "check-weight"}, {"profile", profile}, {"samples", r.samples},
                         {"hessian_ratio_min", r.hessian_ratio_min}, {"passed", r.passed()}});
      return r.passed() ? 0 : 1;
    }

    const DomainSpec d = load_domain(rc.domain_file);
    const int n = d.dimension();
    json meta{{"domain", domain_to_json(d)}, {"quad", quad_id(rc, d)}};

    if (build->parsed()) {
      const KernelModel m = make_model(rc, d, tol);
      const std::string text = model_to_json(m).dump();
      if (rc.out.empty()) {
        std::cout << text << "\n";
      } else {
        write_text_file(rc.out, text);
        std::cout << "wrote " << rc.out << " (degree " << m.degree() << ", " << m.size() << " functions, cond "
                  << show(m.cond_estimate()) << ")\n";
      }
      return 0;
    }

    const Source src = make_source(rc, d, tol);
    meta.update(source_meta(src));

    if (kernel->parsed()) {
      const CVec p = require_vec(rc.point, "--point", n);
      const KernelDerivTable t = std::visit([&](const auto& s) { return s.derivs(p); }, src);
      CsvWriter csv({"holo_jet", "anti_jet", "re", "im"});
      auto jet_name = [&](int a) {
        std::string s;
        for (int j = 0; j < n; ++j) s += (j ? ":" : "") + std::to_string(t.jets[a][j]);
        return s;
      };
      for (int a = 0; a < t.jets.size(); ++a)
        for (int b = 0; b < t.jets.size(); ++b)
          csv.row({jet_name(a), jet_name(b), f(t.values(a, b).real()), f(t.values(a, b).imag())});
      meta["command"] = "kernel";
      meta["K"] = t.K();
      std::cerr << "K = " << show(t.K()) << "\n";
      emit(rc, csv, meta);
      return 0;
    }

    if (curv->parsed()) {
      const CVec p = require_vec(rc.point, "--point", n);
      const CVec X = require_vec(rc.X, "--X", n);
      const CVec Y = rc.Y.empty() ? X : require_vec(rc.Y, "--Y", n);
      const CurvatureReport c = std::visit([&](const auto& s) { return curvature_at(s, p); }, src);
      const double B = c.B(X, Y), H = c.H(X), Ric = c.Ric(X);
      std::cout << "B = " << show(B) << "\nH = " << show(H) << "\nRic = " << show(Ric) << "\n";
      CsvWriter csv({"quantity", "value"});
      csv.row({"B", f(B)});
      csv.row({"H", f(H)});
      csv.row({"Ric", f(Ric)});
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          csv.row({"g_re_" + std::to_string(j) + std::to_string(k), f(c.metric.g(j, k).real())});
          csv.row({"g_im_" + std::to_string(j) + std::to_string(k), f(c.metric.g(j, k).imag())});
        }
      meta["command"] = "curv";
      meta["metric_eigenvalues"] = std::vector<double>(c.metric.eigenvalues.data(),
                                                       c.metric.eigenvalues.data() + n);
      emit(rc, csv, meta);
      return 0;
    }

    if (minint->parsed()) {
      const CVec p = require_vec(rc.point, "--point", n);
      const CVec X = require_vec(rc.X, "--X", n);
      const CVec Y = rc.Y.empty() ? X : require_vec(rc.Y, "--Y", n);
      CsvWriter csv({"quantity", "value"});
      std::visit(
          [&](const auto& s) {
            const MinIntResult i0 = I0(s, p), i1 = I1(s, p, X), i2 = I2(s, p, X, Y);
            csv.row({"I0", f(i0.value)});
            csv.row({"I1", f(i1.value)});
            csv.row({"I2", f(i2.value)});
            const BergmanFuchsReport r = bergman_fuchs_check(s, p, X, Y);
            csv.row({"residual_kernel", f(r.kernel)});
            csv.row({"residual_metric", f(r.metric)});
            csv.row({"residual_holo", f(r.holo)});
            csv.row({"residual_pagano", f(r.pagano)});
            csv.row({"residual_polarized", f(r.polarized)});
            meta["constraint_condition"] = i2.condition;
            std::cerr << "I0 = " << show(i0.value) << "  I1 = " << show(i1.value) << "  I2 = " << show(i2.value)
                      << "\n";
          },
          src);
      meta["command"] = "minint";
      emit(rc, csv, meta);
      return 0;
    }

    if (sweep->parsed()) {
      SweepConfig cfg;
      cfg.q = require_vec(q_str, "--q", n);
      cfg.t = parse_list(t_str, "--t");
      cfg.direction_pairs = pairs;
      cfg.seed = rc.seed;
      const SweepResult r = std::visit([&](const auto& s) { return boundary_sweep(s, cfg); }, src);
      CsvWriter csv({"t", "H", "B_min", "B_max", "Ric", "degree", "cond", "status"});
      for (const SweepRow& row : r.rows)
        csv.row({f(row.t), f(row.H_min), f(row.B_min), f(row.B_max), f(row.Ric_min), std::to_string(row.degree),
                 f(row.cond), row.ok() ? "ok" : "degenerate"});
      meta["command"] = "sweep";
      meta["boundary_point"] = cvec_to_json(r.boundary_point);
      meta["direction_pairs"] = pairs;
      emit(rc, csv, meta);
      return 0;
    }

    if (localize->parsed()) {
      const auto* model = std::get_if<KernelModel>(&src);
      if (!model) throw UsageError("localize works on truncated models (--kernel model)");
      LocalizationConfig cfg{load_domain(U_file), {}, require_vec(rc.X, "--X", n), CVec()};
      cfg.Y = rc.Y.empty() ? cfg.X : require_vec(rc.Y, "--Y", n);
      const CVec q = require_vec(q_str, "--q", n);
      const std::vector<double> ts = parse_list(t_str, "--t");
      for (double t : ts) cfg.points.push_back(inward_point(d, q, t));
      cfg.basis_center = q;
      cfg.basis_scale = basis_scale;
      cfg.degree = rc.degree;
      cfg.resolution = resolution;
      cfg.seed = rc.seed;
      cfg.lower_slack = tol.at("lower_slack");
      const LocalizationResult r = localization_ratio(*model, cfg);
      CsvWriter csv({"t", "I0", "I0_loc", "I1", "I1_loc", "I2", "I2_loc", "r0", "r1", "r2", "lower_ok"});
      for (std::size_t k = 0; k < r.rows.size(); ++k) {
        const LocalizationRow& w = r.rows[k];
        csv.row({f(ts[k]), f(w.I0), f(w.I0_loc), f(w.I1), f(w.I1_loc), f(w.I2), f(w.I2_loc), f(w.r0), f(w.r1),
                 f(w.r2), w.lower_ok ? "1" : "0"});
      }
      meta["command"] = "localize";
      meta["U"] = domain_to_json(cfg.U);
      meta["local_cond_estimate"] = r.local_cond;
      meta["local_nodes"] = r.nodes;
      meta["max_ratio"] = r.max_ratio;
      meta["lower_ok"] = r.lower_ok;
      emit(rc, csv, meta);
      return r.lower_ok ? 0 : 1;
    }

    if (squeeze->parsed()) {
      const CVec p = require_vec(rc.point, "--point", n);
      const std::vector<double> rad = parse_list(radii_str, "--radii");
      if (static_cast<int>(rad.size()) != n) throw UsageError("--radii must have n entries");
      const PolyBox box{p, Eigen::Map<const RVec>(rad.data(), n)};
      const SqueezeReport r =
          std::visit([&](const auto& s) { return polydisc_squeeze_check(s, p, box, C, 200, rc.seed); }, src);
      CsvWriter csv({"quantity", "value"});
      csv.row({"K_scaled", f(r.K_scaled)});
      csv.row({"K_normalized", f(r.K_normalized)});
      csv.row({"metric_min", f(r.metric_min)});
      csv.row({"metric_max", f(r.metric_max)});
      meta["command"] = "squeeze";
      meta["C"] = C;
      meta["kernel_ok"] = r.kernel_ok;
      meta["metric_ok"] = r.metric_ok;
      emit(rc, csv, meta);
      return r.ok() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ComputationalError& e) {
    std::cerr << "computational error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

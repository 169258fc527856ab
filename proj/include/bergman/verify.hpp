#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bergman/closed_form_kernel.hpp"
#include "bergman/experiments/directions.hpp"
#include "bergman/experiments/ratio.hpp"
#include "bergman/experiments/squeeze.hpp"
#include "bergman/experiments/sweep.hpp"
#include "bergman/experiments/weight.hpp"
#include "bergman/minint.hpp"

namespace bergman {

struct CheckResult {
  std::string module;
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline CheckResult run_check(const std::string& module, const std::string& name,
                             const std::function<std::string(bool&)>& body) {
  CheckResult r{module, name, false, ""};
  try {
    bool ok = true;
    r.detail = body(ok);
    r.pass = ok;
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace detail

/// Invariant suite across all modules. Cheap enough to run from the command line.
inline std::vector<CheckResult> verify_all(std::uint64_t seed = 0) {
  using detail::num;
  std::vector<CheckResult> out;
  auto add = [&](const std::string& m, const std::string& n, const std::function<std::string(bool&)>& f) {
    out.push_back(detail::run_check(m, n, f));
  };

  const DomainSpec ball2 = DomainSpec::unit_ball(2);
  const ClosedFormKernel ballK = ClosedFormKernel::ball(CVec::Zero(2), 1.0);
  const ClosedFormKernel polyK = ClosedFormKernel::polydisc(CVec::Zero(2), RVec::Ones(2));
  const KernelModel ball12 = build_model(ball2, 12);
  const KernelModel ell12 = build_model(DomainSpec::ellipsoid({1, 2}), 12);
  const KernelModel poly6 = build_model(DomainSpec::unit_polydisc(2), 6);

  // domains ------------------------------------------------------------------
  add("domains", "project_then_inward_roundtrip", [&](bool& ok) {
    std::mt19937_64 rng(seed + 1);
    double worst = 0.0;
    for (const DomainSpec& d : {ball2, DomainSpec::ellipsoid({1, 2}), make_egg({1, 2})}) {
      for (int s = 0; s < 20; ++s) {
        CVec p = random_unit(2, rng) * 0.9;
        if (!d.contains(p) || d.rho(p) > -0.05) continue;
        const Projection pr = boundary_project(d, p);
        worst = std::max(worst, (inward_point(d, pr.point, pr.dist) - p).norm());
      }
    }
    ok = worst <= 1e-9;
    return "max |p - inward(project(p))| = " + num(worst);
  });
  add("domains", "reinhardt_phase_invariance", [&](bool& ok) {
    std::mt19937_64 rng(seed + 2);
    std::uniform_real_distribution<double> u(-1.2, 1.2), th(0.0, 2 * kPi);
    int bad = 0;
    for (const DomainSpec& d : {ball2, DomainSpec::ellipsoid({1, 3}), DomainSpec::unit_polydisc(2)})
      for (int s = 0; s < 500; ++s) {
        const CVec z = make_cvec({{u(rng), u(rng)}, {u(rng), u(rng)}});
        CVec w = z;
        for (int j = 0; j < 2; ++j) w[j] *= std::polar(1.0, th(rng));
        if (std::abs(d.rho(z)) > 1e-12 && d.contains(z) != d.contains(w)) ++bad;
      }
    ok = bad == 0;
    return std::to_string(bad) + " phase-rotation mismatches";
  });
  add("domains", "grid_mass_converges_on_disc", [&](bool& ok) {
    const DomainSpec disc = DomainSpec::unit_polydisc(1);
    double prev = 1e300;
    std::string s;
    ok = true;
    for (int res : {50, 100, 200}) {
      const double e = std::abs(build_quadrature(disc, QuadScheme::TensorGrid, res).total_mass() - kPi);
      ok = ok && e < prev;
      prev = e;
      s += num(e) + " ";
    }
    return "volume errors " + s;
  });

  // basis_kernel -------------------------------------------------------------
  add("basis_kernel", "degree_monotone_kernel", [&](bool& ok) {
    const CVec p = make_cvec({{0.3, 0.2}, {-0.1, 0.4}});
    double prev = 0.0;
    ok = true;
    for (int d = 0; d <= 14; d += 2) {
      const double k = build_model(ball2, d).kernel(p);
      ok = ok && k >= prev && k > 0.0;
      prev = k;
    }
    ok = ok && prev <= ballK.kernel(p);
    return "K_14 = " + num(prev) + ", exact " + num(ballK.kernel(p));
  });
  add("basis_kernel", "deriv_table_hermitian", [&](bool& ok) {
    const KernelDerivTable t = ell12.derivs(make_cvec({{0.2, 0.1}, {0.3, -0.2}}));
    ok = t.values == t.values.adjoint();
    return ok ? "exact" : "asymmetric";
  });
  add("basis_kernel", "quadrature_matches_closed_form_disc", [&](bool& ok) {
    const DomainSpec disc = DomainSpec::unit_polydisc(1);
    const KernelModel a = build_model(disc, 8);
    const KernelModel b = build_model(disc, 8, build_quadrature(disc, QuadScheme::TensorGrid, 400));
    double worst = 0.0;
    for (double r : {0.0, 0.2, 0.35, 0.5}) {
      const CVec p = make_cvec({{r * 0.6, r * 0.8}});
      worst = std::max(worst, std::abs(a.kernel(p) - b.kernel(p)) / a.kernel(p));
    }
    ok = worst <= 0.01;
    return "max relative difference " + num(worst);
  });

  // geometry -----------------------------------------------------------------
  std::mt19937_64 rng(seed + 3);
  add("geometry", "universal_upper_bounds", [&](bool& ok) {
    double bmax = -1e300, rmax = -1e300;
    for (int s = 0; s < 20; ++s) {
      const CVec p = random_in_ball(2, 0.6, rng);
      for (const CurvatureReport& c : {curvature_at(ball12, p), curvature_at(ell12, p), curvature_at(ballK, p)})
        for (int k = 0; k < 5; ++k) {
          const CVec X = random_unit(2, rng), Y = random_unit(2, rng);
          bmax = std::max(bmax, c.B(X, Y));
          rmax = std::max(rmax, c.Ric(X));
        }
    }
    ok = bmax < 2.0 && rmax < 3.0;
    return "max B = " + num(bmax) + ", max Ric = " + num(rmax);
  });
  add("geometry", "kahler_symmetries", [&](bool& ok) {
    const CurvatureReport c = curvature_at(ell12, make_cvec({{0.2, -0.1}, {0.4, 0.1}}));
    const CurvatureTensor& R = c.tensor;
    double worst = 0.0, scale = 0.0;
    for (int h = 0; h < 2; ++h)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            scale = std::max(scale, std::abs(R(h, j, k, l)));
            worst = std::max(worst, std::abs(R(h, j, k, l) - R(h, k, j, l)));
            worst = std::max(worst, std::abs(R(h, j, k, l) - R(l, j, k, h)));
            worst = std::max(worst, std::abs(R(h, j, k, l) - std::conj(R(j, h, l, k))));
          }
    ok = worst <= 1e-9 * scale;
    return "max relative asymmetry " + num(worst / scale);
  });
  add("geometry", "ricci_matches_logdet", [&](bool& ok) {
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
      const CVec p = random_in_ball(2, 0.5, rng), X = random_unit(2, rng);
      const double a = curvature_at(ballK, p).Ric(X), b = ricci_from_logdet(ballK, p, X);
      worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    ok = worst <= 1e-4;
    return "max relative difference " + num(worst);
  });
  add("geometry", "ricci_frame_independence", [&](bool& ok) {
    const CurvatureReport c = curvature_at(ell12, make_cvec({{0.1, 0.3}, {-0.2, 0.2}}));
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      CMat A(2, 2);
      for (int i = 0; i < 2; ++i) A.col(i) = random_unit(2, rng);
      const CMat U = Eigen::HouseholderQR<CMat>(A).householderQ();
      const CMat E = c.frame * U;
      const CVec X = random_unit(2, rng);
      worst = std::max(worst, std::abs(ricci(c.tensor, c.metric, X, &E) - c.Ric(X)));
    }
    ok = worst <= 1e-10;
    return "max deviation " + num(worst);
  });
  add("geometry", "mobius_invariance", [&](bool& ok) {
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
      const HoloMap f = ball_automorphism(random_in_ball(2, 0.5, rng));
      const CVec p = random_in_ball(2, 0.5, rng), X = random_unit(2, rng), Y = random_unit(2, rng);
      const CMat J = f.jacobian(p);
      const double a = curvature_at(ballK, p).B(X, Y), b = curvature_at(ballK, f(p)).B(J * X, J * Y);
      worst = std::max(worst, std::abs(a - b));
    }
    ok = worst <= 1e-8;
    return "max |B - B o f| = " + num(worst);
  });

  // minint -------------------------------------------------------------------
  add("minint", "rkhs_identity", [&](bool& ok) {
    double worst = 0.0;
    for (const KernelModel* m : {&ball12, &ell12, &poly6})
      for (int s = 0; s < 5; ++s) {
        const CVec p = random_in_ball(2, 0.6, rng);
        worst = std::max(worst, std::abs(I0(*m, p).value * m->kernel(p) - 1.0));
      }
    ok = worst <= 1e-10;
    return "max |I0 K - 1| = " + num(worst);
  });
  add("minint", "bergman_fuchs_polarized", [&](bool& ok) {
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      const CVec p = random_in_ball(2, 0.6, rng), X = random_unit(2, rng), Y = random_unit(2, rng);
      worst = std::max(worst, bergman_fuchs_check(ballK, p, X, Y).max_exact());
      worst = std::max(worst, bergman_fuchs_check(polyK, p * 0.9, X, Y).max_exact());
    }
    ok = worst <= 1e-8;
    return "max residual " + num(worst);
  });
  add("minint", "monotonicity_polydisc_in_ball", [&](bool& ok) {
    const KernelModel inner = build_model(DomainSpec::polydisc(CVec::Zero(2), RVec::Constant(2, 0.7)), 10);
    const KernelModel outer = build_model(ball2, 10);
    ok = true;
    for (int s = 0; s < 5; ++s) {
      const CVec p = random_in_ball(2, 0.5, rng);
      ok = ok && monotonicity_check(inner, outer, p, random_unit(2, rng), random_unit(2, rng)).all();
    }
    return ok ? "I^j(sub) <= I^j(sup) everywhere" : "violated";
  });
  add("minint", "routes_agree", [&](bool& ok) {
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
      const CVec p = random_in_ball(2, 0.6, rng), X = random_unit(2, rng), Y = random_unit(2, rng);
      const JetIndex J(2);
      std::vector<JetFunctional> fs{eval_functional(J), coordinate_deriv_functional(J, 0),
                                    coordinate_deriv_functional(J, 1), second_deriv_functional(J, X, Y)};
      const double a = I2(ell12, p, X, Y).value;
      const double b = solve_min_norm_jets(ell12.derivs(p), fs, detail::last_unit(4)).value;
      worst = std::max(worst, std::abs(a - b) / b);
    }
    ok = worst <= 1e-8;
    return "max relative difference " + num(worst);
  });

  // experiments --------------------------------------------------------------
  add("experiments", "ratio_plus_B", [&](bool& ok) {
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      const CVec p = random_in_ball(2, 0.6, rng), X = random_unit(2, rng), Y = random_unit(2, rng);
      const CurvatureReport c = curvature_at(ballK, p);
      const double cos2 = std::norm(c.metric(X, Y)) / (c.metric.norm2(X) * c.metric.norm2(Y));
      worst = std::max(worst, std::abs(curvature_ratio(ballK, p, X, Y) + c.B(X, Y) - 1.0 - cos2));
    }
    ok = worst <= 1e-8;
    return "max |ratio + B - 1 - cos^2| = " + num(worst);
  });
  add("experiments", "ball_sweep_constant", [&](bool& ok) {
    SweepConfig cfg;
    cfg.q = make_cvec({{1, 0}, {0, 0}});
    cfg.t = {0.3, 0.2, 0.1, 0.05, 0.02, 0.01};
    cfg.direction_pairs = 5;
    const SweepResult r = boundary_sweep(ballK, cfg);
    double mean = 0.0, var = 0.0;
    for (const auto& row : r.rows) mean += row.H_min / r.rows.size();
    for (const auto& row : r.rows) var += (row.H_min - mean) * (row.H_min - mean) / (r.rows.size() - 1);
    ok = std::sqrt(var) <= 1e-10;
    return "H = " + num(mean) + ", std " + num(std::sqrt(var));
  });
  add("experiments", "polydisc_bisectional_formula", [&](bool& ok) {
    double worst = 0.0;
    bool range = true;
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int s = 0; s < 100; ++s) {
      const RVec beta = RVec::NullaryExpr(2, [&](Eigen::Index) { return u(rng); });
      const ClosedFormKernel P = ClosedFormKernel::polydisc(CVec::Zero(2), beta);
      const CVec X = random_unit(2, rng), Y = random_unit(2, rng);
      double num_ = 0, gx = 0, gy = 0;
      for (int j = 0; j < 2; ++j) {
        const double b2 = beta[j] * beta[j];
        num_ += std::norm(X[j]) * std::norm(Y[j]) / (b2 * b2);
        gx += std::norm(X[j]) / b2;
        gy += std::norm(Y[j]) / b2;
      }
      const double mB = num_ / (gx * gy);
      range = range && mB >= 0.0 && mB <= 1.0;
      worst = std::max(worst, std::abs(curvature_at(P, CVec::Zero(2)).B(X, Y) + mB));
    }
    ok = range && worst <= 1e-9;
    return "max deviation " + num(worst);
  });
  add("experiments", "check_weight_monotone_in_C", [&](bool& ok) {
    const DomainSpec dom = make_model_hypersurface(2, 2.0);
    const double delta = 0.01;
    WeightFunction w;
    w.value = [=](const CVec& z) { return std::norm(z[0]) / (delta * delta) + std::norm(z[1]) / delta; };
    w.hessian = [=](const CVec&) {
      CMat H = CMat::Zero(2, 2);
      H(0, 0) = 1.0 / (delta * delta);
      H(1, 1) = 1.0 / delta;
      return H;
    };
    w.M = 2.0;
    const AnisoBox box = aniso_box(AnisoKind::P_delta_a, CVec::Zero(2), delta, 1.0, 0);
    WeightCheckOptions opt;
    opt.samples = 2000;
    bool prev = false;
    ok = true;
    std::string s;
    for (double C : {1.0, 1.5, 2.0, 2.2, 3.0, 5.0}) {
      const bool pass = check_weight(w, box, &dom, psh_profile(dom, delta, 0, C), opt).hessian.pass;
      ok = ok && (!prev || pass);
      prev = pass;
      s += pass ? "P" : "F";
    }
    return "pattern over C grid: " + s;
  });
  return out;
}

}  // namespace bergman

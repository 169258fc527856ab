#include <catch_amalgamated.hpp>

#include "bergman/aniso_box.hpp"
#include "bergman/closed_form_kernel.hpp"
#include "bergman/experiments/directions.hpp"
#include "bergman/experiments/localization.hpp"
#include "bergman/experiments/ratio.hpp"
#include "bergman/experiments/squeeze.hpp"
#include "bergman/experiments/sweep.hpp"
#include "bergman/experiments/weight.hpp"

using namespace bergman;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("boundary sweep on the ball", "[experiments]") {
  const ClosedFormKernel k = ClosedFormKernel::ball(CVec::Zero(2), 1.0);
  SweepConfig cfg;
  cfg.q = make_cvec({{1, 0}, {0, 0}});
  cfg.t = {0.5, 0.1, 0.01};
  cfg.direction_pairs = 20;
  const SweepResult r = boundary_sweep(k, cfg);
  REQUIRE(r.rows.size() == 3);
  for (const SweepRow& row : r.rows) {
    CHECK(row.ok());
    CHECK(row.degree == -1);
    CHECK_THAT(row.H_min, WithinAbs(-2.0 / 3.0, 1e-9));
    CHECK_THAT(row.H_max, WithinAbs(-2.0 / 3.0, 1e-9));
    CHECK(row.B_min >= -2.0 / 3.0 - 1e-9);
    CHECK(row.B_max <= -1.0 / 3.0 + 1e-9);
    CHECK_THAT(row.Ric_min, WithinAbs(-1.0, 1e-9));
    CHECK(row.B.size() == 4 + 20);
  }
  CHECK_THAT(r.rows[2].point[0].real(), WithinAbs(0.99, 1e-14));
}

TEST_CASE("sweep input validation", "[experiments]") {
  const ClosedFormKernel k = ClosedFormKernel::ball(CVec::Zero(2), 1.0);
  SweepConfig cfg;
  cfg.q = make_cvec({{1, 0}, {0, 0}});
  cfg.t = {0.1, 0.2};
  CHECK_THROWS_AS(boundary_sweep(k, cfg), UsageError);
  cfg.t = {0.1, 0.0};
  CHECK_THROWS_AS(boundary_sweep(k, cfg), UsageError);
  cfg.t = {};
  CHECK_THROWS_AS(boundary_sweep(k, cfg), UsageError);
  cfg.t = {0.1};
  cfg.q = CVec::Zero(2);  // the center has no nearest boundary point
  CHECK_THROWS_AS(boundary_sweep(k, cfg), ProjectionError);
}

TEST_CASE("sweep toward a flat ellipsoid point stays bounded", "[experiments]") {
  const KernelModel m = build_model(DomainSpec::ellipsoid({1, 2}), 14);
  SweepConfig cfg;
  cfg.q = make_cvec({{0.3, 0}, {0.6, 0}});  // projected onto the boundary first
  cfg.t = {0.2, 0.1, 0.05};
  cfg.seed = 2;
  const SweepResult r = boundary_sweep(m, cfg);
  CHECK(r.projection_dist > 0.0);
  CHECK(std::abs(m.domain().rho(r.boundary_point)) <= 1e-12);
  for (const SweepRow& row : r.rows) {
    REQUIRE(row.ok());
    CHECK(row.B_max < 2.0);
    CHECK(row.B_min > -10.0);
    CHECK(row.degree == 14);
  }
}

TEST_CASE("curvature ratio", "[experiments]") {
  const KernelModel pd = build_model(DomainSpec::unit_polydisc(2), 6);
  const CVec o = CVec::Zero(2), e1 = unit_vector(2, 0), e2 = unit_vector(2, 1);
  CHECK_THAT(curvature_ratio(pd, o, e1, e2), WithinRel(1.0, 1e-12));
  CHECK_THAT(curvature_ratio(pd, o, e1, e1), WithinRel(3.0, 1e-12));
  const KernelModel ball = build_model(DomainSpec::unit_ball(2), 6);
  CHECK_THAT(curvature_ratio(ball, o, e1, e1), WithinRel(8.0 / 3.0, 1e-12));
  CHECK_THROWS_AS(curvature_ratio(ball, o, CVec::Zero(2), e1), DegenerateConstraintsError);
}

TEST_CASE("ratio plus bisectional curvature", "[experiments][property]") {
  // ratio(X, Y) + B(X, Y) = 1 + |g(X,Y)|^2 / (g(X) g(Y)) for every kernel space
  std::mt19937_64 rng(19);
  const KernelModel m = build_model(DomainSpec::ellipsoid({1, 2}), 12);
  for (int s = 0; s < 30; ++s) {
    const CVec p = random_in_ball(2, 0.6, rng), X = random_unit(2, rng), Y = random_unit(2, rng);
    if (!m.domain().contains(p)) continue;
    const CurvatureReport c = curvature_at(m, p);
    const double cos2 = std::norm(c.metric(X, Y)) / (c.metric.norm2(X) * c.metric.norm2(Y));
    CHECK_THAT(curvature_ratio(m, p, X, Y) + c.B(X, Y), WithinAbs(1.0 + cos2, 1e-8));
  }
}

TEST_CASE("localization ratios", "[experiments]") {
  const KernelModel ball = build_model(DomainSpec::unit_ball(2), 4);
  SECTION("U covering the domain reuses the model") {
    LocalizationConfig cfg{DomainSpec::ball(CVec::Zero(2), 2.0), {make_cvec({{0.5, 0}, {0, 0}})},
                           unit_vector(2, 0), unit_vector(2, 1)};
    const LocalizationResult r = localization_ratio(ball, cfg);
    CHECK(r.reused);
    CHECK(r.rows[0].r0 == 1.0);
    CHECK(r.rows[0].r1 == 1.0);
    CHECK(r.rows[0].r2 == 1.0);
  }
  SECTION("shrinking the domain lowers the minimum integrals") {
    LocalizationConfig cfg{DomainSpec::ball(make_cvec({{1, 0}, {0, 0}}), 0.8),
                           {make_cvec({{0.7, 0}, {0, 0}}), make_cvec({{0.9, 0}, {0, 0}})},
                           unit_vector(2, 0), unit_vector(2, 1)};
    cfg.degree = 4;
    cfg.resolution = 60000;
    cfg.seed = 3;
    const LocalizationResult r = localization_ratio(ball, cfg);
    CHECK_FALSE(r.reused);
    CHECK(r.lower_ok);
    CHECK(r.nodes > 0);
    CHECK(r.max_ratio >= 1.0);
  }
  SECTION("points outside U") {
    LocalizationConfig cfg{DomainSpec::ball(make_cvec({{1, 0}, {0, 0}}), 0.8), {CVec::Zero(2)}, unit_vector(2, 0),
                           unit_vector(2, 1)};
    cfg.resolution = 1000;
    CHECK_THROWS_AS(localization_ratio(ball, cfg), UsageError);
    cfg.points.clear();
    CHECK_THROWS_AS(localization_ratio(ball, cfg), UsageError);
  }
}

TEST_CASE("polydisc squeeze", "[experiments]") {
  const KernelModel pd = build_model(DomainSpec::unit_polydisc(2), 4);
  const PolyBox unit{CVec::Zero(2), RVec::Ones(2)};
  SECTION("a polydisc against itself") {
    // K pi^2 = 1 and g = 2 |X|^2 at the center
    const SqueezeReport r = polydisc_squeeze_check(pd, CVec::Zero(2), unit, 2.0);
    CHECK_THAT(r.K_normalized, WithinAbs(1.0, 1e-12));
    CHECK_THAT(r.metric_min, WithinRel(2.0, 1e-12));
    CHECK_THAT(r.metric_max, WithinRel(2.0, 1e-12));
    CHECK(r.ok());
    CHECK_FALSE(polydisc_squeeze_check(pd, CVec::Zero(2), unit, 1.5).metric_ok);
  }
  SECTION("inscribed polydisc of the ball") {
    const ClosedFormKernel b = ClosedFormKernel::ball(CVec::Zero(2), 1.0);
    const double s = std::sqrt(0.5);
    const SqueezeReport r = polydisc_squeeze_check(b, CVec::Zero(2), PolyBox{CVec::Zero(2), RVec::Constant(2, s)}, 2.0);
    // K(0) = 2 / pi^2, beta^4 = 1/4; g = 3 I against |X|^2 / beta^2 = 2 |X|^2
    CHECK_THAT(r.K_normalized, WithinRel(0.5, 1e-12));
    CHECK_THAT(r.metric_min, WithinRel(1.5, 1e-9));
    CHECK(r.ok());
  }
  SECTION("invalid boxes") {
    CHECK_THROWS_AS(polydisc_squeeze_check(pd, make_cvec({{0.1, 0}, {0, 0}}), unit, 2.0), UsageError);
    CHECK_THROWS_AS(polydisc_squeeze_check(pd, CVec::Zero(2), PolyBox{CVec::Zero(2), RVec::Constant(2, 1.2)}, 2.0),
                    UsageError);
    CHECK_THROWS_AS(polydisc_squeeze_check(pd, CVec::Zero(2), unit, -1.0), UsageError);
  }
}

TEST_CASE("weight hypotheses", "[experiments]") {
  const RVec beta = (RVec(2) << 0.5, 0.2).finished();
  const PolyBox box{CVec::Zero(2), beta};
  WeightFunction w;
  w.name = "diagonal";
  w.value = [beta](const CVec& z) { return std::norm(z[0]) / (beta[0] * beta[0]) + std::norm(z[1]) / (beta[1] * beta[1]); };
  w.M = 2.0;
  w.beta = beta;
  w.C_alpha = {2.0, 2.0, 1.0};
  WeightCheckOptions opt;
  opt.samples = 2000;

  SECTION("diagonal weight satisfies every hypothesis") {
    const WeightCheckReport r = check_weight(w, box, nullptr, catlin_profile(beta, 1.0), opt);
    CHECK(r.passed());
    CHECK(r.samples == 2000);
    CHECK(r.derivs.checked);
    CHECK_THAT(r.hessian_ratio_min, WithinRel(1.0, 1e-4));
  }
  SECTION("too small a derivative constant fails") {
    w.C_alpha = {2.0, 1.5, 1.0};
    CHECK_FALSE(check_weight(w, box, nullptr, catlin_profile(beta, 1.0), opt).derivs.pass);
  }
  SECTION("negative weight is not plurisubharmonic") {
    WeightFunction neg;
    neg.value = [](const CVec& z) { return -z.squaredNorm(); };
    const WeightCheckReport r = check_weight(neg, box, nullptr, catlin_profile(beta, 1.0), opt);
    CHECK_FALSE(r.psh.pass);
    CHECK_THAT(r.psh.margin, WithinAbs(-1.0, 1e-4));
    CHECK(r.psh.witness.size() == 2);
    CHECK_FALSE(r.psh.note.empty());
  }
  SECTION("region outside the domain") {
    const DomainSpec b = DomainSpec::unit_ball(2);
    WeightCheckOptions few;
    few.samples = 5;
    CHECK_THROWS_AS(check_weight(w, PolyBox{make_cvec({{5, 0}, {5, 0}}), beta}, &b, catlin_profile(beta, 1.0), few),
                    UsageError);
  }
}

TEST_CASE("finite-difference complex Hessian", "[experiments]") {
  // w = |z1|^4 + Re(z1 conj(z2)): H_11 = 4 |z1|^2, H_12 = H_21 = 1/2, H_22 = 0
  auto w = [](const CVec& z) { return std::pow(std::norm(z[0]), 2) + (z[0] * std::conj(z[1])).real(); };
  const CVec z = make_cvec({{0.3, -0.2}, {0.1, 0.4}});
  const CMat H = detail::fd_complex_hessian(w, z, RVec::Constant(2, 1e-4));
  CHECK_THAT(H(0, 0).real(), WithinAbs(4 * std::norm(z[0]), 1e-6));
  CHECK_THAT(std::abs(H(0, 1) - 0.5), WithinAbs(0.0, 1e-6));
  CHECK_THAT(std::abs(H(1, 1)), WithinAbs(0.0, 1e-6));
}

TEST_CASE("anisotropic profile on the model hypersurface", "[experiments]") {
  // Scaling xi_2 by sqrt(delta) reduces the worst ratio to 1 / lambda_max of
  // [[1/4, r/2], [r/2, r^2 + 1]] with r = |z_2| / sqrt(delta) <= 1.
  const double delta = 0.01;
  const DomainSpec dom = make_model_hypersurface(2, 2.0);
  const double tr = 0.25 + 2.0, det = 0.25 * 2.0 - 0.25;
  const double exact = 1.0 / (0.5 * (tr + std::sqrt(tr * tr - 4 * det)));
  CHECK_THAT(exact, WithinAbs(0.4689, 1e-4));

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
  opt.samples = 4000;
  const WeightCheckReport r = check_weight(w, box, &dom, psh_profile(dom, delta, 0, 2.0), opt);
  CHECK(r.hessian_ratio_min >= exact - 1e-12);
  CHECK(r.hessian_ratio_min <= exact + 0.01);
  CHECK_FALSE(r.hessian.pass);
  CHECK(check_weight(w, box, &dom, psh_profile(dom, delta, 0, 1.0 / exact + 0.01), opt).hessian.pass);

  SECTION("the verdict is monotone in C") {
    bool prev = false;
    for (double C : {1.0, 1.5, 2.0, 2.2, 3.0, 5.0}) {
      const bool pass = check_weight(w, box, &dom, psh_profile(dom, delta, 0, C), opt).hessian.pass;
      CHECK((!prev || pass));
      prev = pass;
    }
  }
  CHECK_THROWS_AS(psh_profile(dom, delta, 2, 2.0), UsageError);
  CHECK_THROWS_AS(catlin_profile(RVec::Ones(2), 0.0), UsageError);
}

TEST_CASE("direction sampling", "[experiments]") {
  std::mt19937_64 a(1), b(1);
  const auto d = sample_directions(3, 5, a);
  CHECK(d.size() == 8);
  CHECK(d[0] == unit_vector(3, 0));
  for (const CVec& v : d) CHECK_THAT(v.norm(), WithinAbs(1.0, 1e-14));
  CHECK(sample_direction_pairs(2, 3, b).size() == 7);
}

#include <catch_amalgamated.hpp>

#include "bergman/closed_form_kernel.hpp"
#include "bergman/experiments/directions.hpp"
#include "bergman/maps.hpp"
#include "bergman/minint.hpp"

using namespace bergman;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// min |c|^2 subject to A c = b through the full KKT system [I A*; A 0].
double kkt_min_norm(const CMat& A, const CVec& b) {
  const Eigen::Index m = A.rows(), N = A.cols();
  CMat K = CMat::Zero(N + m, N + m);
  K.topLeftCorner(N, N).setIdentity();
  K.topRightCorner(N, m) = A.adjoint();
  K.bottomLeftCorner(m, N) = A;
  CVec rhs = CVec::Zero(N + m);
  rhs.tail(m) = b;
  const CVec x = K.fullPivLu().solve(rhs);
  return x.head(N).squaredNorm();
}

CVec random_cvec(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(g(rng), g(rng));
  return v;
}

}  // namespace

TEST_CASE("minimum-norm solver matches the KKT system", "[minint]") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dm(1, 4), dn(0, 20);
  for (int s = 0; s < 50; ++s) {
    const int m = dm(rng), N = m + dn(rng);
    std::vector<ConstraintRow> rows;
    CMat A(m, N);
    for (int i = 0; i < m; ++i) {
      rows.push_back({ConstraintKind::Eval, CVec::Zero(1), random_cvec(N, rng)});
      A.row(i) = rows.back().coefficients.transpose();
    }
    const CVec b = random_cvec(m, rng);
    const MinIntResult r = solve_min_norm(rows, b);
    CHECK_THAT(r.value, WithinRel(kkt_min_norm(A, b), 1e-10));
    CHECK(r.residual <= 1e-10 * (1 + b.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("dependent or oversized constraint sets", "[minint]") {
  const CVec a = make_cvec({{1, 0}, {2, 0}, {0, 1}});
  std::vector<ConstraintRow> rows{{ConstraintKind::Eval, CVec(), a}, {ConstraintKind::Eval, CVec(), 2.0 * a}};
  CHECK_THROWS_AS(solve_min_norm(rows, make_cvec({{1, 0}, {0, 0}})), DegenerateConstraintsError);
  std::vector<ConstraintRow> tall{{ConstraintKind::Eval, CVec(), CVec::Ones(1)},
                                  {ConstraintKind::Eval, CVec(), CVec::Ones(1)}};
  CHECK_THROWS_AS(solve_min_norm(tall, CVec::Ones(2)), DegenerateConstraintsError);
  CHECK_THROWS_AS(solve_min_norm({}, CVec()), UsageError);
}

TEST_CASE("unit polydisc at the origin", "[minint]") {
  // disc norms ||z^a||^2 = pi / (a + 1); extremals 1, z1, z1^2 / 2, z1 z2
  const KernelModel m = build_model(DomainSpec::unit_polydisc(2), 6);
  const CVec o = CVec::Zero(2), e1 = unit_vector(2, 0), e2 = unit_vector(2, 1);
  const double pi2 = kPi * kPi;
  CHECK_THAT(I0(m, o).value, WithinRel(pi2, 1e-14));
  CHECK_THAT(I1(m, o, e1).value, WithinRel(pi2 / 2, 1e-14));
  CHECK_THAT(I2(m, o, e1, e1).value, WithinRel(pi2 / 3 / 4, 1e-14));
  CHECK_THAT(I2(m, o, e1, e2).value, WithinRel(pi2 / 4, 1e-14));
}

TEST_CASE("I0 is the reciprocal of the kernel", "[minint][property]") {
  std::mt19937_64 rng(5);
  const DomainSpec egg = make_egg({1, 2});
  const std::vector<KernelModel> models = {build_model(DomainSpec::ellipsoid({1, 2}), 10),
                                           build_model(egg, 5, build_quadrature(egg, QuadScheme::MonteCarlo, 20000, 6))};
  for (const KernelModel& m : models)
    for (int s = 0; s < 20; ++s) {
      const CVec p = random_in_ball(2, 0.9, rng);
      if (!m.domain().contains(p)) continue;
      CHECK_THAT(I0(m, p).value * m.kernel(p), WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("minimum integrals recover kernel, metric and curvature", "[minint]") {
  std::mt19937_64 rng(12);
  const ClosedFormKernel k = ClosedFormKernel::ball(CVec::Zero(2), 1.0);
  for (int s = 0; s < 20; ++s) {
    const CVec p = random_in_ball(2, 0.8, rng), X = random_unit(2, rng), Y = random_unit(2, rng);
    const BergmanFuchsReport r = bergman_fuchs_check(k, p, X, Y);
    CHECK(r.kernel <= 1e-8);
    CHECK(r.metric <= 1e-8);
    CHECK(r.holo <= 1e-8);
    CHECK(r.polarized <= 1e-8);
    // the unpolarized form misses exactly 1 - |g(X,Y)|^2 / (g(X) g(Y))
    CHECK_THAT(r.pagano, WithinAbs(1.0 - r.cos2, 1e-8));
  }
  // parallel directions: both forms agree
  const CVec X = random_unit(2, rng);
  const BergmanFuchsReport r = bergman_fuchs_check(k, make_cvec({{0.2, 0.1}, {0, -0.3}}), X, cplx(0, 2) * X);
  CHECK(r.pagano <= 1e-8);
}

TEST_CASE("degenerate minimum-integral problems", "[minint]") {
  const KernelModel m = build_model(DomainSpec::unit_ball(2), 4);
  const CVec p = make_cvec({{0.1, 0}, {0, 0}});
  CHECK_THROWS_AS(I1(m, p, CVec::Zero(2)), DegenerateConstraintsError);
  CHECK_THROWS_AS(I2(m, p, CVec::Zero(2), unit_vector(2, 0)), DegenerateConstraintsError);
  const KernelModel m0 = build_model(DomainSpec::unit_ball(2), 0);
  CHECK_THROWS_AS(I1(m0, p, unit_vector(2, 0)), DegenerateConstraintsError);
  CHECK_THROWS_AS(I0(m, make_cvec({{2, 0}, {0, 0}})), UsageError);
}

TEST_CASE("coefficient and kernel-jet routes agree", "[minint][property]") {
  std::mt19937_64 rng(77);
  const KernelModel m = build_model(DomainSpec::ellipsoid({1, 2}), 10);
  const JetIndex J(2);
  for (int s = 0; s < 20; ++s) {
    const CVec p = random_in_ball(2, 0.7, rng), X = random_unit(2, rng), Y = random_unit(2, rng);
    if (!m.domain().contains(p)) continue;
    const KernelDerivTable t = m.derivs(p);
    std::vector<JetFunctional> fs{eval_functional(J), coordinate_deriv_functional(J, 0),
                                  coordinate_deriv_functional(J, 1), second_deriv_functional(J, X, Y)};
    const CVec b = detail::last_unit(4);
    CHECK_THAT(solve_min_norm_jets(t, fs, b).value, WithinRel(I2(m, p, X, Y).value, 1e-8));
    CHECK_THAT(solve_min_norm_jets(t, {eval_functional(J), first_deriv_functional(J, X)}, detail::last_unit(2)).value,
               WithinRel(I1(m, p, X).value, 1e-10));
  }
}

TEST_CASE("minimum integrals grow with the domain", "[minint][property]") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.3, 0.95);
  const KernelModel big = build_model(DomainSpec::unit_ball(2), 8);
  for (int s = 0; s < 20; ++s) {
    const double r = u(rng);
    // a ball of radius r and the polydisc inscribed in it
    const DomainSpec sub = (s % 2 == 0) ? DomainSpec::ball(CVec::Zero(2), r)
                                        : DomainSpec::polydisc(CVec::Zero(2), RVec::Constant(2, r / std::sqrt(2.0)));
    const KernelModel small = build_model(sub, 8);
    const CVec p = random_in_ball(2, 0.5 * r, rng);
    const MonotonicityReport rep = monotonicity_check(small, big, p, random_unit(2, rng), random_unit(2, rng));
    CHECK(rep.all());
  }
  const KernelModel other = build_model(DomainSpec::unit_ball(2), 6);
  CHECK_THROWS_AS(monotonicity_check(other, big, CVec::Zero(2), unit_vector(2, 0), unit_vector(2, 0)), UsageError);
  CHECK_THROWS_AS(monotonicity_check(big, build_model(DomainSpec::ball(CVec::Zero(2), 0.5), 8), CVec::Zero(2),
                                     unit_vector(2, 0), unit_vector(2, 0)),
                  UsageError);
}

TEST_CASE("transformation rule", "[minint]") {
  std::mt19937_64 rng(4);
  SECTION("ball automorphisms") {
    const ClosedFormKernel k = ClosedFormKernel::ball(CVec::Zero(2), 1.0);
    for (int s = 0; s < 10; ++s) {
      const HoloMap f = ball_automorphism(random_in_ball(2, 0.7, rng));
      const CVec p = random_in_ball(2, 0.6, rng);
      CHECK(transformation_check(f, k, k, p, random_unit(2, rng), random_unit(2, rng)).max() <= 1e-8);
    }
  }
  SECTION("dilation between truncated models") {
    const KernelModel a = build_model(DomainSpec::unit_polydisc(2), 8);
    const KernelModel b = build_model(DomainSpec::polydisc(CVec::Zero(2), RVec::Constant(2, 2.0)), 8);
    const HoloMap f = affine_map(2.0 * CMat::Identity(2, 2), CVec::Zero(2));
    const TransformationReport r =
        transformation_check(f, a, b, make_cvec({{0.3, 0.1}, {-0.2, 0.4}}), random_unit(2, rng), random_unit(2, rng));
    CHECK_THAT(r.jac2, WithinRel(16.0, 1e-15));
    CHECK(r.max() <= 1e-10);
  }
}

TEST_CASE("direction homogeneity", "[minint][property]") {
  std::mt19937_64 rng(15);
  const KernelModel m = build_model(DomainSpec::ellipsoid({2, 1}), 10);
  for (int s = 0; s < 20; ++s) {
    const CVec p = random_in_ball(2, 0.5, rng), X = random_unit(2, rng), Y = random_unit(2, rng);
    const cplx a = random_cvec(1, rng)[0], b = random_cvec(1, rng)[0];
    CHECK_THAT(I1(m, p, a * X).value * std::norm(a), WithinRel(I1(m, p, X).value, 1e-10));
    CHECK_THAT(I2(m, p, a * X, b * Y).value * std::norm(a * b), WithinRel(I2(m, p, X, Y).value, 1e-10));
  }
}

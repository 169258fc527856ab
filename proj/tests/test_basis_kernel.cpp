#include <catch_amalgamated.hpp>

#include <functional>

#include "bergman/closed_form_kernel.hpp"
#include "bergman/experiments/directions.hpp"
#include "bergman/kernel_model.hpp"

using namespace bergman;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, 60);
}

// ||z^alpha||^2 on {|z1|^(2 m1) + |z2|^(2 m2) < 1} in polar coordinates: the r2
// integral is done by hand, the r1 integral adaptively.
double ellipsoid_norm_radial(int m1, int m2, int a1, int a2) {
  auto f = [&](double r1) {
    const double top = std::pow(std::max(0.0, 1.0 - std::pow(r1, 2 * m1)), 1.0 / (2 * m2));
    return std::pow(r1, 2 * a1 + 1) * std::pow(top, 2 * a2 + 2) / (2 * a2 + 2);
  };
  return 4 * kPi * kPi * integrate(f, 0.0, 1.0, 1e-14);
}

}  // namespace

TEST_CASE("graded multi-indices", "[basis]") {
  const auto idx = graded_indices(3, 4);
  CHECK(idx.size() == 35);  // C(3+4, 4)
  for (std::size_t k = 1; k < idx.size(); ++k) CHECK(idx[k - 1].degree() <= idx[k].degree());
  CHECK(idx[1] == MultiIndex({1, 0, 0}));
  CHECK(falling_factor(MultiIndex({3, 1}), MultiIndex({2, 0})) == 6.0);
  CHECK(falling_factor(MultiIndex({1, 1}), MultiIndex({2, 0})) == 0.0);
  CHECK_THROWS_AS(MultiIndex({-1, 0}), UsageError);
}

TEST_CASE("closed-form monomial norms", "[basis]") {
  SECTION("polydisc") {
    const RVec beta = (RVec(2) << 0.5, 2.0).finished();
    const DomainSpec pd = DomainSpec::polydisc(CVec::Zero(2), beta);
    // one-variable disc of radius b: int_0^b r^(2a) 2 pi r dr = pi b^(2a+2) / (a+1)
    auto disc = [](double b, int a) { return kPi * std::pow(b, 2 * a + 2) / (a + 1); };
    CHECK_THAT(monomial_norm_closed(pd, MultiIndex({3, 1})), WithinRel(disc(0.5, 3) * disc(2.0, 1), 1e-14));
  }
  SECTION("ball matches tensor-grid quadrature") {
    const DomainSpec b = DomainSpec::unit_ball(2);
    const QuadratureRule q = build_quadrature(b, QuadScheme::TensorGrid, 28);
    for (const MultiIndex& a : {MultiIndex({0, 0}), MultiIndex({1, 0}), MultiIndex({2, 1})}) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < q.size(); ++i) s += q.weights[i] * std::norm(monomial(q.nodes.col(i), a));
      CHECK_THAT(monomial_norm_closed(b, a), WithinRel(s, 0.03));
    }
    CHECK_THAT(known_volume(b), WithinRel(kPi * kPi / 2, 1e-14));
  }
  SECTION("ellipsoid matches radial quadrature") {
    for (const auto& [m1, m2] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 1}})
      for (const auto& [a1, a2] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{2, 3}, std::pair{0, 5}}) {
        const DomainSpec e = DomainSpec::ellipsoid({m1, m2});
        CHECK_THAT(monomial_norm_closed(e, MultiIndex({a1, a2})),
                   WithinRel(ellipsoid_norm_radial(m1, m2, a1, a2), 1e-8));
      }
  }
  SECTION("general domains have no closed form") {
    CHECK_THROWS_AS(monomial_norm_closed(make_egg({1, 2}), MultiIndex({0, 0})), UsageError);
  }
}

TEST_CASE("unit polydisc kernel at the center", "[basis]") {
  const KernelModel m = build_model(DomainSpec::unit_polydisc(2), 4);
  CHECK_THAT(m.kernel(CVec::Zero(2)), WithinAbs(1.0 / (kPi * kPi), 1e-15));
  CHECK(m.norm_source() == "closed-form");
}

TEST_CASE("kernel is positive and non-decreasing in the degree", "[basis][property]") {
  std::mt19937_64 rng(21);
  const DomainSpec e = DomainSpec::ellipsoid({1, 2});
  std::vector<KernelModel> models;
  for (int d = 0; d <= 16; d += 4) models.push_back(build_model(e, d));
  for (int s = 0; s < 30; ++s) {
    const CVec p = random_in_ball(2, 0.7, rng);
    double prev = 0.0;
    for (const KernelModel& m : models) {
      const double k = m.kernel(p);
      CHECK(k > 0.0);
      CHECK(k >= prev);
      prev = k;
    }
  }
}

TEST_CASE("quadrature and closed-form models agree on the disc", "[basis]") {
  const DomainSpec disc = DomainSpec::unit_polydisc(1);
  const QuadratureRule q = build_quadrature(disc, QuadScheme::TensorGrid, 400);
  for (int degree : {2, 5, 8}) {
    const KernelModel a = build_model(disc, degree);
    const KernelModel b = build_model(disc, degree, q);
    for (double r : {0.0, 0.25, 0.5}) {
      const CVec p = make_cvec({{r * 0.8, -r * 0.6}});
      CHECK_THAT(b.kernel(p), WithinRel(a.kernel(p), 0.01));
    }
  }
}

TEST_CASE("truncated ball kernel converges to the exact kernel", "[basis]") {
  const KernelModel m = build_model(DomainSpec::unit_ball(2), 40);
  const ClosedFormKernel k = ClosedFormKernel::ball(CVec::Zero(2), 1.0);
  const CVec p = make_cvec({{0.2, 0.1}, {-0.1, 0.15}});
  CHECK_THAT(m.kernel(p), WithinRel(k.kernel(p), 1e-12));
  const KernelDerivTable a = m.derivs(p), b = k.derivs(p);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() <= 1e-10 * b.values.cwiseAbs().maxCoeff());
}

TEST_CASE("derivative table is exactly Hermitian", "[basis]") {
  const KernelModel m = build_model(DomainSpec::ellipsoid({2, 1}), 10);
  const KernelDerivTable t = m.derivs(make_cvec({{0.3, 0.2}, {-0.4, 0.1}}));
  for (int a = 0; a < t.jets.size(); ++a)
    for (int b = 0; b < t.jets.size(); ++b) CHECK(t.values(a, b) == std::conj(t.values(b, a)));
}

TEST_CASE("derivative table matches finite differences", "[basis]") {
  // Each entry D^a D^bbar K(z, wbar) at z = w = p is a z-derivative of a lower
  // entry taken off the diagonal, K_{a - e_j, b}(z, pbar) = sum_k V_{a-e_j,k}(z) conj(V_{b,k}(p)).
  const DomainSpec egg = make_egg({1, 2});
  const KernelModel m = build_model(egg, 6, build_quadrature(egg, QuadScheme::MonteCarlo, 40000, 2));
  const CVec p = make_cvec({{0.2, -0.1}, {0.3, 0.2}});
  const KernelDerivTable t = m.derivs(p);
  const JetIndex& J = t.jets;
  const CMat Vp = m.jet_values(p);
  const double scale = t.values.cwiseAbs().maxCoeff();
  const double h = 1e-4;
  for (int a = 0; a < J.size(); ++a)
    for (int b = 0; b < J.size(); ++b) {
      const MultiIndex& ja = J[a];
      const MultiIndex& jb = J[b];
      if (ja.degree() == 0 && jb.degree() == 0) continue;
      const bool holo = ja.degree() > 0;
      const MultiIndex& top = holo ? ja : jb;
      int j = 0;
      while (top[j] == 0) ++j;
      std::vector<int> lowered = top.entries();
      --lowered[static_cast<std::size_t>(j)];
      const int low = J.of([&] {
        std::vector<int> c;
        for (int i = 0; i < J.dimension(); ++i)
          for (int r = 0; r < lowered[static_cast<std::size_t>(i)]; ++r) c.push_back(i);
        return c;
      }());
      const int other = holo ? b : a;
      auto off = [&](const CVec& z) -> cplx {
        const CMat Vz = m.jet_values(z);
        return (Vz.row(low) * Vp.row(other).adjoint())(0, 0);
      };
      const CVec e = unit_vector(J.dimension(), j);
      const cplx fd = (off(p + h * e) - off(p - h * e)) / (2 * h);
      const cplx expected = holo ? t.values(a, b) : std::conj(t.values(a, b));
      CHECK(std::abs(fd - expected) <= 1e-5 * scale);
    }
}

TEST_CASE("orthonormalization", "[basis]") {
  SECTION("basis functions are orthonormal under the quadrature rule") {
    const DomainSpec egg = make_egg({1, 2});
    const QuadratureRule q = build_quadrature(egg, QuadScheme::MonteCarlo, 20000, 1);
    const KernelModel m = build_model(egg, 5, q);
    CMat I = CMat::Zero(m.size(), m.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const CVec v = m.values(q.nodes.col(i));
      I += q.weights[i] * v * v.adjoint();
    }
    CHECK((I - CMat::Identity(I.rows(), I.cols())).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(m.dropped().empty());
  }
  SECTION("dependent columns are dropped") {
    CMat A(3, 3);
    A << 1, 2, 1, 0, 1, 1, 1, 0, 0;
    CMat G = A.adjoint() * A;
    CMat G4 = CMat::Zero(4, 4);
    G4.topLeftCorner(3, 3) = G;
    G4.row(3).head(3) = G.row(0);
    G4.col(3).head(3) = G.col(0);
    G4(3, 3) = G(0, 0);
    const Orthonormalization o = orthonormalize(G4);
    CHECK(o.dropped.size() == 1);
    CHECK(o.coeff.rows() == 3);
  }
  SECTION("zero Gram is an empty space") {
    CHECK_THROWS_AS(orthonormalize(CMat::Zero(3, 3)), EmptySpaceError);
  }
}

TEST_CASE("build_model preconditions", "[basis]") {
  CHECK_THROWS_AS(build_model(DomainSpec::unit_ball(2), -1), UsageError);
  CHECK_THROWS_AS(build_model(make_egg({1, 2}), 3), UsageError);
  BuildOptions opt;
  opt.basis_center = make_cvec({{0.5, 0}, {0, 0}});
  CHECK_THROWS_AS(build_model(DomainSpec::unit_ball(2), 3, std::nullopt, opt), UsageError);
}

TEST_CASE("closed-form kernels", "[basis]") {
  const ClosedFormKernel pd = ClosedFormKernel::polydisc(CVec::Zero(2), (RVec(2) << 0.5, 2.0).finished());
  CHECK_THAT(pd.kernel(CVec::Zero(2)), WithinRel(1.0 / (kPi * kPi), 1e-15));
  const ClosedFormKernel b = ClosedFormKernel::ball(make_cvec({{1, 0}, {0, 1}}), 2.0);
  CHECK_THAT(b.kernel(make_cvec({{1, 0}, {0, 1}})), WithinRel(2.0 / (kPi * kPi * 16.0), 1e-15));
  CHECK_THROWS_AS(b.derivs(make_cvec({{4, 0}, {0, 0}})), UsageError);
}

#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/kernel_model.hpp"
#include "bergman/maps.hpp"

namespace bergman {

// ---------------------------------------------------------------------------
// Jet functionals f -> sum_a lambda_a D^a f(p), |a| <= 2.

enum class ConstraintKind { Eval, FirstDeriv, AllFirstDerivs, SecondDeriv };

struct JetFunctional {
  ConstraintKind kind;
  CVec lambda;  // indexed by JetIndex
};

inline JetFunctional eval_functional(const JetIndex& J) {
  CVec l = CVec::Zero(J.size());
  l[J.zero()] = 1.0;
  return {ConstraintKind::Eval, l};
}

/// f -> sum_i X_i df/dz_i (p)
inline JetFunctional first_deriv_functional(const JetIndex& J, const CVec& X) {
  CVec l = CVec::Zero(J.size());
  for (int i = 0; i < J.dimension(); ++i) l[J.first(i)] = X[i];
  return {ConstraintKind::FirstDeriv, l};
}

/// f -> df/dz_j (p)
inline JetFunctional coordinate_deriv_functional(const JetIndex& J, int j) {
  CVec l = CVec::Zero(J.size());
  l[J.first(j)] = 1.0;
  return {ConstraintKind::AllFirstDerivs, l};
}

/// f -> sum_{j,k} X_j Y_k d^2 f / dz_j dz_k (p), summed over all ordered pairs.
inline JetFunctional second_deriv_functional(const JetIndex& J, const CVec& X, const CVec& Y) {
  CVec l = CVec::Zero(J.size());
  const int n = J.dimension();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) l[J.second(j, k)] += X[j] * Y[k];
  return {ConstraintKind::SecondDeriv, l};
}

/// A side condition written in the orthonormal basis: coefficients_j = ell(phi_j).
struct ConstraintRow {
  ConstraintKind kind;
  CVec point;
  CVec coefficients;
};

struct MinIntResult {
  double value = 0.0;
  CVec coeffs;             // minimizer in the orthonormal basis (empty on the kernel-jet route)
  double residual = 0.0;   // max |A c - b|
  int constraints = 0;
  double condition = 1.0;  // condition number of A A^*
};

inline constexpr double kConstraintCondLimit = 1e12;

inline std::vector<ConstraintRow> constraint_rows(const KernelModel& m, const CVec& p,
                                                  const std::vector<JetFunctional>& fs) {
  const CMat V = m.jet_values(p);
  std::vector<ConstraintRow> rows;
  for (const auto& f : fs) rows.push_back({f.kind, p, (f.lambda.transpose() * V).transpose()});
  return rows;
}

/// min ||c||^2 subject to A c = b. Minimizer c = A^* (A A^*)^{-1} b, computed from a
/// QR factorization of A^* (A^* = Q R, so c = Q R^{-*} b and the value is |R^{-*} b|^2).
inline MinIntResult solve_min_norm(const std::vector<ConstraintRow>& rows, const CVec& rhs) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  if (m == 0 || rhs.size() != m) throw UsageError("solve_min_norm: need one rhs entry per row");
  const Eigen::Index N = rows.front().coefficients.size();
  if (N < m)
    throw DegenerateConstraintsError("solve_min_norm: basis dimension " + std::to_string(N) +
                                         " is smaller than the constraint count " + std::to_string(m),
                                     std::numeric_limits<double>::infinity());
  CMat A(m, N);
  for (Eigen::Index i = 0; i < m; ++i) A.row(i) = rows[static_cast<std::size_t>(i)].coefficients.transpose();

  const CMat Astar = A.adjoint();
  Eigen::HouseholderQR<CMat> qr(Astar);
  const CMat R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<CMat> svd(R);
  const RVec sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  const double cond = smin > 0.0 ? std::pow(sv[0] / smin, 2) : std::numeric_limits<double>::infinity();
  if (!(cond <= kConstraintCondLimit))
    throw DegenerateConstraintsError("solve_min_norm: constraints are (numerically) dependent, cond(A A*) = " +
                                         std::to_string(cond),
                                     cond);
  // R^* y = b
  const CVec y = R.adjoint().triangularView<Eigen::Lower>().solve(rhs);
  CVec full = CVec::Zero(N);
  full.head(m) = y;
  MinIntResult out;
  out.coeffs = qr.householderQ() * full;
  out.value = out.coeffs.squaredNorm();
  out.residual = (A * out.coeffs - rhs).cwiseAbs().maxCoeff();
  out.constraints = static_cast<int>(m);
  out.condition = cond;
  return out;
}

/// Same problem from the kernel jets alone: A A^* = Lambda T Lambda^*.
inline MinIntResult solve_min_norm_jets(const KernelDerivTable& t, const std::vector<JetFunctional>& fs,
                                        const CVec& rhs) {
  const auto m = static_cast<Eigen::Index>(fs.size());
  CMat Lam(m, t.jets.size());
  for (Eigen::Index i = 0; i < m; ++i) Lam.row(i) = fs[static_cast<std::size_t>(i)].lambda.transpose();
  CMat G = Lam * t.values * Lam.adjoint();
  G = 0.5 * (G + G.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMat> es(G);
  const RVec ev = es.eigenvalues();
  const double cond = ev[0] > 0.0 ? ev[m - 1] / ev[0] : std::numeric_limits<double>::infinity();
  if (!(cond <= kConstraintCondLimit))
    throw DegenerateConstraintsError("solve_min_norm_jets: constraints are (numerically) dependent, cond = " +
                                         std::to_string(cond),
                                     cond);
  const CVec w = es.eigenvectors().adjoint() * rhs;
  MinIntResult out;
  out.value = (w.cwiseAbs2().array() / ev.array()).sum();
  out.constraints = static_cast<int>(m);
  out.condition = cond;
  return out;
}

// ---------------------------------------------------------------------------
// I^0, I^1, I^2. Truncated models solve in coefficient space; any other kernel
// source (closed-form kernels) goes through the jet Gram matrix.

template <class S>
concept HasBasis = requires(const S& s, const CVec& p) {
  { s.jet_values(p) } -> std::convertible_to<CMat>;
};

namespace detail {

template <class Source>
MinIntResult solve_jets(const Source& src, const CVec& p, const std::vector<JetFunctional>& fs, const CVec& rhs) {
  if (!src.domain().contains(p)) throw UsageError("minimum integral: point is not interior");
  if constexpr (HasBasis<Source>) {
    return solve_min_norm(constraint_rows(src, p, fs), rhs);
  } else {
    return solve_min_norm_jets(src.derivs(p), fs, rhs);
  }
}

inline CVec last_unit(Eigen::Index m) {
  CVec b = CVec::Zero(m);
  b[m - 1] = 1.0;
  return b;
}

}  // namespace detail

/// inf ||f||^2 subject to f(p) = 1.
template <class Source>
MinIntResult I0(const Source& src, const CVec& p) {
  const JetIndex J(src.dimension());
  return detail::solve_jets(src, p, {eval_functional(J)}, detail::last_unit(1));
}

/// inf ||f||^2 subject to f(p) = 0, sum X_i df/dz_i(p) = 1.
template <class Source>
MinIntResult I1(const Source& src, const CVec& p, const CVec& X) {
  const JetIndex J(src.dimension());
  return detail::solve_jets(src, p, {eval_functional(J), first_deriv_functional(J, X)}, detail::last_unit(2));
}

/// inf ||f||^2 subject to f(p) = 0, df(p) = 0, sum X_j Y_k d^2f/dz_j dz_k(p) = 1.
template <class Source>
MinIntResult I2(const Source& src, const CVec& p, const CVec& X, const CVec& Y) {
  const JetIndex J(src.dimension());
  std::vector<JetFunctional> fs{eval_functional(J)};
  for (int j = 0; j < J.dimension(); ++j) fs.push_back(coordinate_deriv_functional(J, j));
  fs.push_back(second_deriv_functional(J, X, Y));
  return detail::solve_jets(src, p, fs, detail::last_unit(static_cast<Eigen::Index>(fs.size())));
}

// ---------------------------------------------------------------------------

/// Residuals of the kernel / metric / curvature representations by minimum integrals.
///
///   kernel:    |K - 1/I0| / K
///   metric:    |g(X) - I0/I1(X)| / g(X)
///   holo:      |H(X) - (2 - I1(X)^2 / (I0 I2(X,X)))|
///   pagano:    |B(X,Y) - (2 - I1(X) I1(Y) / (I0 I2(X,Y)))|
///   polarized: |B(X,Y) - (1 + |g(X,Y)|^2/(g(X) g(Y)) - I1(X) I1(Y) / (I0 I2(X,Y)))|
///
/// The pagano form is exact only for parallel X, Y; in general it is off by
/// 1 - |g(X,Y)|^2/(g(X) g(Y)). The polarized form holds for every pair.
struct BergmanFuchsReport {
  double K = 0, I0 = 0, I1X = 0, I1Y = 0, I2XX = 0, I2XY = 0;
  double gX = 0, gY = 0, H = 0, B = 0, cos2 = 0;
  double kernel = 0, metric = 0, holo = 0, pagano = 0, polarized = 0;

  double max_stated() const { return std::max({kernel, metric, holo, pagano}); }
  double max_exact() const { return std::max({kernel, metric, holo, polarized}); }
};

template <class Source>
BergmanFuchsReport bergman_fuchs_check(const Source& src, const CVec& p, const CVec& X, const CVec& Y) {
  BergmanFuchsReport r;
  const KernelDerivTable t = src.derivs(p);
  const CurvatureReport c = curvature_report(t);
  r.K = t.K();
  r.I0 = I0(src, p).value;
  r.I1X = I1(src, p, X).value;
  r.I1Y = I1(src, p, Y).value;
  r.I2XX = I2(src, p, X, X).value;
  r.I2XY = I2(src, p, X, Y).value;
  r.gX = c.metric.norm2(X);
  r.gY = c.metric.norm2(Y);
  r.H = c.H(X);
  r.B = c.B(X, Y);
  r.cos2 = std::norm(c.metric(X, Y)) / (r.gX * r.gY);
  const double ratio = r.I1X * r.I1Y / (r.I0 * r.I2XY);
  r.kernel = std::abs(r.K - 1.0 / r.I0) / r.K;
  r.metric = std::abs(r.gX - r.I0 / r.I1X) / r.gX;
  r.holo = std::abs(r.H - (2.0 - r.I1X * r.I1X / (r.I0 * r.I2XX)));
  r.pagano = std::abs(r.B - (2.0 - ratio));
  r.polarized = std::abs(r.B - (1.0 + r.cos2 - ratio));
  return r;
}

// ---------------------------------------------------------------------------

struct MonotonicityReport {
  bool i0 = false, i1 = false, i2 = false;
  double I0_sub = 0, I0_sup = 0, I1_sub = 0, I1_sup = 0, I2_sub = 0, I2_sup = 0;
  bool all() const { return i0 && i1 && i2; }
};

/// Sampled check that `sub` lies inside `sup`.
inline bool domain_contained_in(const DomainSpec& sub, const DomainSpec& sup, int draws = 20000,
                                std::uint64_t seed = 7) {
  const Box b = sub.bounding_box();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RVec x(b.lo.size());
  for (int s = 0; s < draws; ++s) {
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = b.lo[k] + u(rng) * (b.hi[k] - b.lo[k]);
    const CVec z = to_complex(x);
    if (sub.contains(z) && !sup.contains(z)) return false;
  }
  return true;
}

/// I^j_sub(p) <= I^j_sup(p) for p in sub inside sup, with 1e-12 relative slack.
template <class S1, class S2>
MonotonicityReport monotonicity_check(const S1& sub, const S2& sup, const CVec& p, const CVec& X, const CVec& Y) {
  if constexpr (HasBasis<S1> && HasBasis<S2>) {
    if (sub.degree() != sup.degree()) throw UsageError("monotonicity_check: truncation degrees differ");
  }
  if (!sub.domain().contains(p)) throw UsageError("monotonicity_check: p is not interior to the subdomain");
  if (!domain_contained_in(sub.domain(), sup.domain()))
    throw UsageError("monotonicity_check: subdomain is not contained in the superdomain");
  constexpr double slack = 1e-12;
  MonotonicityReport r;
  r.I0_sub = I0(sub, p).value;
  r.I0_sup = I0(sup, p).value;
  r.I1_sub = I1(sub, p, X).value;
  r.I1_sup = I1(sup, p, X).value;
  r.I2_sub = I2(sub, p, X, Y).value;
  r.I2_sup = I2(sup, p, X, Y).value;
  r.i0 = r.I0_sub <= r.I0_sup * (1 + slack);
  r.i1 = r.I1_sub <= r.I1_sup * (1 + slack);
  r.i2 = r.I2_sub <= r.I2_sup * (1 + slack);
  return r;
}

struct TransformationReport {
  double i0 = 0, i1 = 0, i2 = 0;  // relative residuals
  double jac2 = 0;                // |det J f(p)|^2
  double max() const { return std::max({i0, i1, i2}); }
};

/// I^j_1(p; X, Y) |det J f(p)|^2 = I^j_2(f(p); df X, df Y).
template <class S1, class S2>
TransformationReport transformation_check(const HoloMap& f, const S1& src1, const S2& src2, const CVec& p,
                                          const CVec& X, const CVec& Y) {
  if (f.kind == HoloMap::Kind::Other) throw UsageError("transformation_check: unsupported map kind");
  const CMat J = f.jacobian(p);
  const CVec fp = f(p);
  const CVec fX = J * X, fY = J * Y;
  TransformationReport r;
  r.jac2 = std::norm(J.determinant());
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  r.i0 = rel(I0(src1, p).value * r.jac2, I0(src2, fp).value);
  r.i1 = rel(I1(src1, p, X).value * r.jac2, I1(src2, fp, fX).value);
  r.i2 = rel(I2(src1, p, X, Y).value * r.jac2, I2(src2, fp, fX, fY).value);
  return r;
}

}  // namespace bergman

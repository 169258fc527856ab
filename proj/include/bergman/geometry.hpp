#pragma once

#include <cmath>
#include <vector>

#include "bergman/deriv_table.hpp"

namespace bergman {

// ---------------------------------------------------------------------------
// Derivatives of log K from derivatives of K.
//
// For a set S of derivative slots (holomorphic or antiholomorphic coordinates),
// D^S log K = sum over set partitions pi of S of
//             (-1)^(|pi|-1) (|pi|-1)! prod_{B in pi} D^B K / K.

namespace detail {

using Partition = std::vector<std::vector<int>>;

inline void set_partitions(int m, int next, Partition& cur, std::vector<Partition>& out) {
  if (next == m) {
    out.push_back(cur);
    return;
  }
  for (std::size_t b = 0; b < cur.size(); ++b) {
    cur[b].push_back(next);
    set_partitions(m, next + 1, cur, out);
    cur[b].pop_back();
  }
  cur.push_back({next});
  set_partitions(m, next + 1, cur, out);
  cur.pop_back();
}

inline const std::vector<Partition>& partitions_of(int m) {
  static const std::vector<std::vector<Partition>> cache = [] {
    std::vector<std::vector<Partition>> c(5);
    for (int k = 0; k <= 4; ++k) {
      Partition cur;
      set_partitions(k, 0, cur, c[static_cast<std::size_t>(k)]);
    }
    return c;
  }();
  return cache[static_cast<std::size_t>(m)];
}

}  // namespace detail

/// D log K for holomorphic slots `holo` and antiholomorphic slots `anti` (<= 2 each).
inline cplx log_deriv(const KernelDerivTable& t, const std::vector<int>& holo,
                      const std::vector<int>& anti) {
  const int m = static_cast<int>(holo.size() + anti.size());
  const double K = t.K();
  cplx total = 0.0;
  for (const auto& part : detail::partitions_of(m)) {
    cplx prod = 1.0;
    for (const auto& block : part) {
      std::vector<int> h, a;
      for (int s : block) {
        if (s < static_cast<int>(holo.size())) h.push_back(holo[static_cast<std::size_t>(s)]);
        else a.push_back(anti[static_cast<std::size_t>(s) - holo.size()]);
      }
      prod *= t.at(h, a) / K;
    }
    const int b = static_cast<int>(part.size());
    double c = (b % 2 == 1) ? 1.0 : -1.0;
    for (int q = 2; q < b; ++q) c *= q;
    total += c * prod;
  }
  return total;
}

// ---------------------------------------------------------------------------

/// g_{j kbar} = d^2 log K / dz_j dzbar_k, with its inverse and spectrum.
struct MetricMatrix {
  CMat g;
  CMat inverse;
  RVec eigenvalues;

  int dimension() const { return static_cast<int>(g.rows()); }

  /// g(X, Y) = sum g_{j kbar} X_j conj(Y_k).
  cplx operator()(const CVec& X, const CVec& Y) const { return X.transpose() * g * Y.conjugate(); }
  double norm2(const CVec& X) const { return (*this)(X, X).real(); }

  /// g^{nu mubar}: sum_mu g^{nu mubar} g_{lambda mubar} = delta.
  cplx upper(int nu, int mu) const { return inverse(mu, nu); }
};

/// Metric from a jet table: g_{j kbar} = (K K_{j kbar} - K_j K_kbar) / K^2.
/// Throws DegenerateMetricError if g is not positive definite.
inline MetricMatrix metric(const KernelDerivTable& t) {
  const int n = t.dimension();
  const double K = t.K();
  if (!(K > 0.0)) throw ComputationalError("metric: kernel is not positive");
  MetricMatrix m;
  m.g.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const cplx Kj = t(t.jets.first(j), 0);
      const cplx Kk = t(0, t.jets.first(k));
      m.g(j, k) = (K * t(t.jets.first(j), t.jets.first(k)) - Kj * Kk) / (K * K);
    }
  m.g = 0.5 * (m.g + m.g.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMat> es(m.g, Eigen::EigenvaluesOnly);
  m.eigenvalues = es.eigenvalues();
  if (!(m.eigenvalues.minCoeff() > 0.0))
    throw DegenerateMetricError("metric: not positive definite (truncation too coarse?)", m.eigenvalues);
  m.inverse = m.g.inverse();
  return m;
}

/// R_{hbar j k lbar} = -d^2 g_{j hbar} / dz_k dzbar_l
///                    + g^{nu mubar} (d g_{j mubar} / dz_k)(d g_{nu hbar} / dzbar_l).
class CurvatureTensor {
 public:
  explicit CurvatureTensor(int n) : n_(n), r_(static_cast<std::size_t>(n * n * n * n)) {}

  int dimension() const { return n_; }
  cplx& operator()(int h, int j, int k, int l) { return r_[idx(h, j, k, l)]; }
  cplx operator()(int h, int j, int k, int l) const { return r_[idx(h, j, k, l)]; }

  /// R(Xbar_h X_j Y_k Ybar_l) contraction.
  cplx contract(const CVec& X, const CVec& Y) const {
    cplx s = 0.0;
    for (int h = 0; h < n_; ++h)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int l = 0; l < n_; ++l)
            s += (*this)(h, j, k, l) * std::conj(X[h]) * X[j] * Y[k] * std::conj(Y[l]);
    return s;
  }

 private:
  std::size_t idx(int h, int j, int k, int l) const {
    return static_cast<std::size_t>(((h * n_ + j) * n_ + k) * n_ + l);
  }
  int n_;
  std::vector<cplx> r_;
};

inline CurvatureTensor curvature_tensor(const KernelDerivTable& t, const MetricMatrix& g) {
  const int n = t.dimension();
  CurvatureTensor R(n);
  // third derivatives: d_k g_{j mubar} and dbar_l g_{nu hbar}
  std::vector<cplx> d3h(static_cast<std::size_t>(n * n * n)), d3a(static_cast<std::size_t>(n * n * n));
  auto i3 = [n](int a, int b, int c) { return static_cast<std::size_t>((a * n + b) * n + c); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        d3h[i3(a, b, c)] = log_deriv(t, {a, b}, {c});  // d_a d_b dbar_c
        d3a[i3(a, b, c)] = log_deriv(t, {a}, {b, c});  // d_a dbar_b dbar_c
      }
  for (int h = 0; h < n; ++h)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx v = -log_deriv(t, {j, k}, {h, l});
          for (int nu = 0; nu < n; ++nu)
            for (int mu = 0; mu < n; ++mu)
              v += g.upper(nu, mu) * d3h[i3(j, k, mu)] * d3a[i3(nu, h, l)];
          R(h, j, k, l) = v;
        }
  return R;
}

namespace detail {
inline void require_nonzero(const CVec& v, const char* what) {
  if (v.size() == 0 || v.norm() == 0.0) throw UsageError(std::string(what) + ": zero direction vector");
}
}  // namespace detail

/// B(X, Y) = R(Xbar X Y Ybar) / (g(X) g(Y)).
inline double bisectional(const CurvatureTensor& R, const MetricMatrix& g, const CVec& X, const CVec& Y) {
  detail::require_nonzero(X, "bisectional");
  detail::require_nonzero(Y, "bisectional");
  return R.contract(X, Y).real() / (g.norm2(X) * g.norm2(Y));
}

inline double holo_sectional(const CurvatureTensor& R, const MetricMatrix& g, const CVec& X) {
  return bisectional(R, g, X, X);
}

/// Columns E^j with g(E^i, E^j) = delta_ij, from the Cholesky factor g = L L^*.
inline CMat g_orthonormal_frame(const MetricMatrix& g) {
  Eigen::LLT<CMat> llt(g.g);
  if (llt.info() != Eigen::Success)
    throw DegenerateMetricError("g_orthonormal_frame: Cholesky failed", g.eigenvalues);
  const CMat L = llt.matrixL();
  const int n = g.dimension();
  const CMat Linv = L.triangularView<Eigen::Lower>().solve(CMat::Identity(n, n));
  return Linv.transpose();
}

/// Ric(X) = sum_j B(E^j, X) over a g-orthonormal frame (default: Cholesky frame).
inline double ricci(const CurvatureTensor& R, const MetricMatrix& g, const CVec& X,
                    const CMat* frame = nullptr) {
  detail::require_nonzero(X, "ricci");
  const CMat E = frame ? *frame : g_orthonormal_frame(g);
  double s = 0.0;
  for (int j = 0; j < E.cols(); ++j) s += bisectional(R, g, E.col(j), X);
  return s;
}

/// Metric, tensor and the scalar curvatures along requested directions.
struct CurvatureReport {
  CVec point;
  MetricMatrix metric;
  CurvatureTensor tensor{1};
  CMat frame;

  double B(const CVec& X, const CVec& Y) const { return bisectional(tensor, metric, X, Y); }
  double H(const CVec& X) const { return holo_sectional(tensor, metric, X); }
  double Ric(const CVec& X) const { return ricci(tensor, metric, X, &frame); }
};

inline CurvatureReport curvature_report(const KernelDerivTable& t) {
  CurvatureReport r;
  r.point = t.point;
  r.metric = metric(t);
  r.tensor = curvature_tensor(t, r.metric);
  r.frame = g_orthonormal_frame(r.metric);
  return r;
}

template <class Source>
CurvatureReport curvature_at(const Source& src, const CVec& p) {
  return curvature_report(src.derivs(p));
}

/// -d d-bar log det g evaluated on (X, Xbar) and divided by g(X), by central
/// differences on the complex line p + w X (the d d-bar operator there is a quarter
/// of the Laplacian in (Re w, Im w)). Independent cross-check of ricci().
template <class Source>
double ricci_from_logdet(const Source& src, const CVec& p, const CVec& X, double h = 1e-3) {
  detail::require_nonzero(X, "ricci_from_logdet");
  auto F = [&](const CVec& z) {
    const MetricMatrix m = metric(src.derivs(z));
    return std::log(m.g.determinant().real());
  };
  const double f0 = F(p);
  const double lap = (F(p + h * X) + F(p - h * X) + F(p + cplx(0, h) * X) + F(p - cplx(0, h) * X) - 4 * f0) /
                     (h * h);
  const MetricMatrix g0 = metric(src.derivs(p));
  return -0.25 * lap / g0.norm2(X);
}

}  // namespace bergman

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "bergman/aniso_box.hpp"

namespace bergman {

/// A real weight on C^n with the constants it is claimed to satisfy.
struct WeightFunction {
  std::string name;
  std::function<double(const CVec&)> value;
  std::function<CMat(const CVec&)> hessian;  // optional: H_jk = d^2 w / dz_j dzbar_k
  double M = 1.0;                            // |w| <= M
  RVec beta;                                 // derivative scales; empty skips the derivative check
  std::array<double, 3> C_alpha{1.0, 1.0, 1.0};  // bound for |alpha| = 1, 2, 3
};

/// Lower-bound profile for the complex Hessian: sum H_jk xi_j conj(xi_k) >= xi^* P(z) xi / C.
struct HessianProfile {
  std::string name;
  std::function<CMat(const CVec&)> matrix;
  double C = 1.0;
};

/// P = diag(1 / beta_j^2), C = 1 / Ctilde.
inline HessianProfile catlin_profile(const RVec& beta, double Ctilde) {
  if (!(Ctilde > 0.0)) throw UsageError("catlin_profile: Ctilde must be positive");
  const RVec d = beta.array().square().inverse();
  return {"catlin", [d](const CVec&) { return CMat(d.cast<cplx>().asDiagonal()); }, 1.0 / Ctilde};
}

/// |<d rho, xi>|^2 / delta^2 + sum_{j=2}^{n-ell} |xi_j|^2 / delta + sum_{k>n-ell} |xi_k|^2.
inline HessianProfile psh_profile(const DomainSpec& rho_domain, double delta, int ell, double C) {
  const int n = rho_domain.dimension();
  if (!(delta > 0.0)) throw UsageError("psh_profile: delta must be positive");
  if (ell < 0 || ell > n - 1) throw UsageError("psh_profile: ell must lie in [0, n-1]");
  if (!(C > 0.0)) throw UsageError("psh_profile: C must be positive");
  RVec diag(n);
  diag[0] = 0.0;
  for (int j = 1; j < n; ++j) diag[j] = (j < n - ell) ? 1.0 / delta : 1.0;
  auto P = [rho_domain, delta, diag, n](const CVec& z) {
    const RVec g = rho_domain.rho_gradient(z);
    CVec a(n);  // d rho / d zeta_j
    for (int j = 0; j < n; ++j) a[j] = 0.5 * cplx(g[2 * j], -g[2 * j + 1]);
    CMat m = a.conjugate() * a.transpose() / (delta * delta);
    m.diagonal() += diag.cast<cplx>();
    return m;
  };
  return {"psh", P, C};
}

struct HypothesisCheck {
  bool checked = false;
  bool pass = true;
  double margin = std::numeric_limits<double>::infinity();  // worst margin, >= 0 means satisfied
  CVec witness;    // sample point attaining the worst margin
  CVec direction;  // worst xi for Hessian checks
  std::string note;
};

struct WeightCheckReport {
  HypothesisCheck bounded;     // |w| <= M
  HypothesisCheck psh;         // complex Hessian PSD
  HypothesisCheck hessian;     // lower bound by the profile
  HypothesisCheck derivs;      // |D^alpha w| <= C_alpha prod beta^-alpha
  double hessian_ratio_min = std::numeric_limits<double>::infinity();  // min xi^*H xi / xi^*P xi
  int samples = 0;

  bool passed() const {
    for (const HypothesisCheck* h : {&bounded, &psh, &hessian, &derivs})
      if (h->checked && !h->pass) return false;
    return true;
  }
};

struct WeightCheckOptions {
  int samples = 10000;
  std::uint64_t seed = 0;
  double psd_tol = 1e-10;    // absolute, for plurisubharmonicity
  double profile_tol = 1e-10;  // relative to |P| / C
  double deriv_tol = 1e-6;   // relative slack on derivative bounds (finite-difference noise)
};

namespace detail {

/// d^2 w / dz_j dzbar_k by central differences with per-coordinate steps h_j.
inline CMat fd_complex_hessian(const std::function<double(const CVec&)>& w, const CVec& z, const RVec& h) {
  const int n = static_cast<int>(z.size());
  const RVec x = to_real(z);
  auto f = [&](const RVec& y) { return w(to_complex(y)); };
  auto d2 = [&](int a, int b) {
    const double ha = h[a / 2], hb = h[b / 2];
    RVec y = x;
    double s = 0.0;
    for (int sa : {1, -1})
      for (int sb : {1, -1}) {
        y = x;
        y[a] += sa * ha;
        y[b] += sb * hb;
        s += sa * sb * f(y);
      }
    return s / (4.0 * ha * hb);
  };
  CMat H(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const int xj = 2 * j, yj = 2 * j + 1, xk = 2 * k, yk = 2 * k + 1;
      H(j, k) = 0.25 * cplx(d2(xj, xk) + d2(yj, yk), d2(xj, yk) - d2(yj, xk));
    }
  return 0.5 * (H + H.adjoint());
}

/// Real-coordinate derivative D_{i1} ... D_{ik} w by nested central differences.
inline double fd_real_deriv(const std::function<double(const CVec&)>& w, const RVec& x,
                            const std::vector<int>& idx, const RVec& h) {
  const std::size_t k = idx.size();
  double s = 0.0;
  RVec y(x.size());
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    y = x;
    int sign = 1;
    for (std::size_t m = 0; m < k; ++m) {
      const int sm = (mask >> m) & 1u ? -1 : 1;
      y[idx[m]] += sm * h[idx[m] / 2];
      sign *= sm;
    }
    s += sign * w(to_complex(y));
  }
  double denom = std::pow(2.0, static_cast<double>(k));
  for (int i : idx) denom *= h[i / 2];
  return s / denom;
}

inline void multisets(int m, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < m; ++i) {
    cur.push_back(i);
    multisets(m, k, i, cur, out);
    cur.pop_back();
  }
}

inline void record(HypothesisCheck& h, double margin, const CVec& z, const CVec& xi = CVec()) {
  if (margin < h.margin) {
    h.margin = margin;
    h.witness = z;
    h.direction = xi;
  }
}

}  // namespace detail

/// Samples `region` (intersected with `domain` when given) and checks the four
/// hypotheses on each sample. The Hessian bound uses the exact minimum over xi
/// (smallest eigenvalue of H - P/C), so no direction sampling is involved.
inline WeightCheckReport check_weight(const WeightFunction& w, const PolyBox& region, const DomainSpec* domain,
                                      const HessianProfile& profile, const WeightCheckOptions& opt = {}) {
  if (!w.value) throw UsageError("check_weight: weight has no value function");
  const int n = region.dimension();
  if (domain && domain->dimension() != n) throw UsageError("check_weight: dimension mismatch");
  if (w.beta.size() != 0 && w.beta.size() != n) throw UsageError("check_weight: beta has the wrong size");
  const RVec h = region.radii * 1e-3;

  std::vector<std::vector<int>> alphas;
  if (w.beta.size() == n)
    for (int k = 1; k <= 3; ++k) {
      std::vector<int> cur;
      detail::multisets(2 * n, k, 0, cur, alphas);
    }

  WeightCheckReport r;
  r.bounded.checked = r.psh.checked = r.hessian.checked = true;
  r.derivs.checked = !alphas.empty();
  if (!r.derivs.checked) r.derivs.note = "no derivative scales given";

  std::mt19937_64 rng(opt.seed);
  const long max_draws = 1000L * opt.samples + 1000;
  long draws = 0;
  while (r.samples < opt.samples) {
    if (++draws > max_draws) {
      if (r.samples == 0) throw UsageError("check_weight: region does not meet the domain");
      break;
    }
    const CVec z = sample_polybox(region, rng);
    if (domain && !domain->contains(z)) continue;
    ++r.samples;

    const double v = w.value(z);
    detail::record(r.bounded, w.M - std::abs(v), z);

    const CMat H = w.hessian ? w.hessian(z) : detail::fd_complex_hessian(w.value, z, h);
    const CMat Hf = H.transpose();  // xi^* Hf xi = sum H_jk xi_j conj(xi_k)
    Eigen::SelfAdjointEigenSolver<CMat> eh(Hf);
    detail::record(r.psh, eh.eigenvalues()[0], z, eh.eigenvectors().col(0));

    const CMat P = profile.matrix(z);
    const double scale = Eigen::SelfAdjointEigenSolver<CMat>(P, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff() /
                         profile.C;
    Eigen::SelfAdjointEigenSolver<CMat> ed(Hf - P / profile.C);
    detail::record(r.hessian, ed.eigenvalues()[0] / scale, z, ed.eigenvectors().col(0));
    Eigen::LLT<CMat> llt(P);
    if (llt.info() == Eigen::Success) {
      const CMat Linv = llt.matrixL().solve(CMat::Identity(n, n));
      const CMat S = Linv * Hf * Linv.adjoint();
      const double ratio = Eigen::SelfAdjointEigenSolver<CMat>(0.5 * (S + S.adjoint()), Eigen::EigenvaluesOnly)
                               .eigenvalues()[0];
      r.hessian_ratio_min = std::min(r.hessian_ratio_min, ratio);
    }

    if (r.derivs.checked) {
      const RVec x = to_real(z);
      for (const auto& a : alphas) {
        double bound = w.C_alpha[a.size() - 1];
        for (int i : a) bound /= w.beta[i / 2];
        const double d = std::abs(detail::fd_real_deriv(w.value, x, a, h));
        detail::record(r.derivs, bound > 0.0 ? (bound - d) / bound : -d, z);
      }
    }
  }
  r.bounded.pass = r.bounded.margin >= 0.0;
  r.psh.pass = r.psh.margin >= -opt.psd_tol;
  r.hessian.pass = r.hessian.margin >= -opt.profile_tol;
  r.derivs.pass = !r.derivs.checked || r.derivs.margin >= -opt.deriv_tol;
  if (!r.psh.pass) r.psh.note = "negative eigenvalue of the complex Hessian";
  if (!r.hessian.pass) r.hessian.note = "profile lower bound violated at C = " + std::to_string(profile.C);
  return r;
}

inline WeightCheckReport check_weight(const WeightFunction& w, const AnisoBox& region, const DomainSpec* domain,
                                      const HessianProfile& profile, const WeightCheckOptions& opt = {}) {
  return check_weight(w, region.as_polybox(), domain, profile, opt);
}

}  // namespace bergman

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergman/deriv_table.hpp"
#include "bergman/norms.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

/// Monomials ((z - center) / scale)^alpha up to a total degree, graded order.
class Basis {
 public:
  Basis(int n, int degree, CVec center, double scale = 1.0)
      : n_(n), degree_(degree), center_(std::move(center)), scale_(scale) {
    if (degree < 0) throw UsageError("Basis: degree must be >= 0");
    if (center_.size() != n) throw UsageError("Basis: center dimension mismatch");
    if (!(scale > 0.0)) throw UsageError("Basis: scale must be positive");
    indices_ = graded_indices(n, degree);
    parent_.assign(indices_.size(), -1);
    var_.assign(indices_.size(), -1);
    // parent = index with the first nonzero exponent lowered by one
    for (std::size_t k = 1; k < indices_.size(); ++k) {
      const MultiIndex& a = indices_[k];
      int j = 0;
      while (a[j] == 0) ++j;
      std::vector<int> e = a.entries();
      --e[static_cast<std::size_t>(j)];
      const MultiIndex par(e);
      for (std::size_t q = 0; q < k; ++q)
        if (indices_[q] == par) { parent_[k] = static_cast<int>(q); break; }
      var_[k] = j;
    }
  }

  int dimension() const { return n_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const CVec& center() const { return center_; }
  double scale() const { return scale_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& operator[](int k) const { return indices_[static_cast<std::size_t>(k)]; }

  /// Row of monomial values at z.
  void evaluate(const CVec& z, cplx* out) const {
    const CVec w = (z - center_) / scale_;
    out[0] = 1.0;
    for (std::size_t k = 1; k < indices_.size(); ++k) out[k] = out[parent_[k]] * w[var_[k]];
  }

  /// D^a m_k(p) for every jet a (rows) and basis element k (columns).
  CMat jet_matrix(const CVec& p, const JetIndex& jets) const {
    const CVec w = (p - center_) / scale_;
    CMat out(jets.size(), size());
    for (int a = 0; a < jets.size(); ++a) {
      const MultiIndex& ja = jets[a];
      const double s = std::pow(scale_, -ja.degree());
      for (int k = 0; k < size(); ++k) {
        const MultiIndex& al = indices_[static_cast<std::size_t>(k)];
        const double f = falling_factor(al, ja);
        if (f == 0.0) {
          out(a, k) = 0.0;
          continue;
        }
        cplx v = f * s;
        for (int j = 0; j < n_; ++j)
          for (int e = 0; e < al[j] - ja[j]; ++e) v *= w[j];
        out(a, k) = v;
      }
    }
    return out;
  }

 private:
  int n_;
  int degree_;
  CVec center_;
  double scale_;
  std::vector<MultiIndex> indices_;
  std::vector<int> parent_;
  std::vector<int> var_;
};

/// G_jk = sum_nodes w m_j conj(m_k). Exactly Hermitian.
inline CMat gram_general(const Basis& basis, const QuadratureRule& quad) {
  const Eigen::Index N = basis.size();
  CMat Vw(quad.size(), N);
  std::vector<cplx> row(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < quad.size(); ++i) {
    basis.evaluate(quad.nodes.col(i), row.data());
    const double sw = std::sqrt(quad.weights[i]);
    for (Eigen::Index k = 0; k < N; ++k) Vw(i, k) = sw * row[static_cast<std::size_t>(k)];
  }
  CMat G = (Vw.adjoint() * Vw).conjugate();
  CMat H = 0.5 * (G + G.adjoint());
  for (Eigen::Index k = 0; k < N; ++k) H(k, k).imag(0.0);
  return H;
}

struct Orthonormalization {
  CMat coeff;                // r x N; phi_j = sum_k coeff(j, k) m_k
  double cond_estimate = 1;  // largest / smallest retained pivot
  std::vector<int> dropped;  // basis indices left out
  std::vector<int> retained; // pivot order
  RVec pivots;
};

/// Pivoted Cholesky of a Hermitian PSD Gram matrix. Elimination stops at the first
/// pivot below drop_tol * (largest pivot); the remaining basis indices are reported
/// as dropped. Rows of the returned coefficient matrix are orthonormal.
inline Orthonormalization orthonormalize(const CMat& gram, double drop_tol = 1e-12) {
  const Eigen::Index N = gram.rows();
  if (gram.cols() != N) throw UsageError("orthonormalize: Gram matrix must be square");
  CMat A = gram;
  std::vector<int> perm(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) perm[i] = static_cast<int>(i);
  CMat L = CMat::Zero(N, N);
  std::vector<double> piv;
  double dmax = 0.0;
  Eigen::Index r = 0;
  for (; r < N; ++r) {
    Eigen::Index best = r;
    for (Eigen::Index i = r + 1; i < N; ++i)
      if (A(i, i).real() > A(best, best).real()) best = i;
    const double d = A(best, best).real();
    if (r == 0) dmax = d;
    if (!(d > drop_tol * dmax) || d <= 0.0) break;
    if (best != r) {
      A.row(r).swap(A.row(best));
      A.col(r).swap(A.col(best));
      L.row(r).swap(L.row(best));
      std::swap(perm[r], perm[best]);
    }
    const double lrr = std::sqrt(d);
    L(r, r) = lrr;
    for (Eigen::Index i = r + 1; i < N; ++i) L(i, r) = A(i, r) / lrr;
    for (Eigen::Index j = r + 1; j < N; ++j)
      for (Eigen::Index i = j; i < N; ++i) {
        A(i, j) -= L(i, r) * std::conj(L(j, r));
        A(j, i) = std::conj(A(i, j));
      }
    piv.push_back(d);
  }
  if (r == 0) throw EmptySpaceError("orthonormalize: every pivot is below the drop tolerance");

  Orthonormalization out;
  const CMat Lr = L.topLeftCorner(r, r);
  const CMat Linv = Lr.triangularView<Eigen::Lower>().solve(CMat::Identity(r, r));
  out.coeff = CMat::Zero(r, N);
  for (Eigen::Index j = 0; j < r; ++j) out.coeff.col(perm[j]) = Linv.col(j);
  out.retained.assign(perm.begin(), perm.begin() + r);
  out.dropped.assign(perm.begin() + r, perm.end());
  std::sort(out.dropped.begin(), out.dropped.end());
  out.pivots = Eigen::Map<const RVec>(piv.data(), static_cast<Eigen::Index>(piv.size()));
  out.cond_estimate = out.pivots.maxCoeff() / out.pivots.minCoeff();
  return out;
}

/// Truncated Bergman space: an orthonormal family of polynomials in L^2(domain).
/// Immutable once built.
class KernelModel {
 public:
  KernelModel(DomainSpec domain, Basis basis, CMat coeff, double cond, std::vector<int> dropped,
              std::string norm_source, double drop_tol)
      : domain_(std::move(domain)),
        basis_(std::move(basis)),
        coeff_(std::move(coeff)),
        cond_(cond),
        dropped_(std::move(dropped)),
        norm_source_(std::move(norm_source)),
        drop_tol_(drop_tol),
        jets_(basis_.dimension()) {}

  const DomainSpec& domain() const { return domain_; }
  const Basis& basis() const { return basis_; }
  const CMat& coeff() const { return coeff_; }
  double cond_estimate() const { return cond_; }
  const std::vector<int>& dropped() const { return dropped_; }
  const std::string& norm_source() const { return norm_source_; }
  double drop_tol() const { return drop_tol_; }
  int dimension() const { return basis_.dimension(); }
  int degree() const { return basis_.degree(); }
  int size() const { return static_cast<int>(coeff_.rows()); }
  const JetIndex& jets() const { return jets_; }

  /// V(a, j) = D^a phi_j(p) for every jet a of order <= 2.
  CMat jet_values(const CVec& p) const {
    return basis_.jet_matrix(p, jets_) * coeff_.transpose();
  }

  /// Orthonormal basis values phi_j(p).
  CVec values(const CVec& p) const {
    CVec m(basis_.size());
    basis_.evaluate(p, m.data());
    return coeff_ * m;
  }

  double kernel(const CVec& p) const { return values(p).squaredNorm(); }

  KernelDerivTable derivs(const CVec& p) const { return table_from_jets(p, jet_values(p)); }

 private:
  DomainSpec domain_;
  Basis basis_;
  CMat coeff_;
  double cond_;
  std::vector<int> dropped_;
  std::string norm_source_;
  double drop_tol_;
  JetIndex jets_;
};

struct BuildOptions {
  std::optional<CVec> basis_center;  // default: Reinhardt center, else box center
  double basis_scale = 1.0;
  double drop_tol = 1e-12;
};

/// Closed-form norms for Reinhardt domains (diagonal Gram, monomials centered at
/// the rotation center); quadrature Gram + pivoted Cholesky otherwise.
inline KernelModel build_model(const DomainSpec& d, int degree,
                               const std::optional<QuadratureRule>& quad = std::nullopt,
                               const BuildOptions& opt = {}) {
  if (degree < 0) throw UsageError("build_model: degree must be >= 0");
  const int n = d.dimension();
  if (d.is_reinhardt() && !quad) {
    const CVec c = reinhardt_center(d);
    if (opt.basis_center && (*opt.basis_center - c).norm() != 0.0)
      throw UsageError("build_model: closed-form norms need monomials centered at the domain center");
    Basis basis(n, degree, c, 1.0);
    RVec norms(basis.size());
    for (int k = 0; k < basis.size(); ++k) norms[k] = monomial_norm_closed(d, basis[k]);
    CMat C = CMat::Zero(basis.size(), basis.size());
    for (int k = 0; k < basis.size(); ++k) C(k, k) = 1.0 / std::sqrt(norms[k]);
    const double cond = norms.maxCoeff() / norms.minCoeff();
    return KernelModel(d, std::move(basis), std::move(C), cond, {}, "closed-form", opt.drop_tol);
  }
  if (!quad) throw UsageError("build_model: general domains need a quadrature rule");
  CVec c;
  if (opt.basis_center) {
    c = *opt.basis_center;
  } else if (d.is_reinhardt()) {
    c = reinhardt_center(d);
  } else {
    const Box b = d.bounding_box();
    c = to_complex(0.5 * (b.lo + b.hi));
  }
  Basis basis(n, degree, c, opt.basis_scale);
  const CMat G = gram_general(basis, *quad);
  Orthonormalization o = orthonormalize(G, opt.drop_tol);
  return KernelModel(d, std::move(basis), std::move(o.coeff), o.cond_estimate, std::move(o.dropped),
                     "quadrature(" + quad->id() + ")", opt.drop_tol);
}

}  // namespace bergman

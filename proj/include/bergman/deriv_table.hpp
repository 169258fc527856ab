#pragma once

#include <vector>

#include "bergman/multi_index.hpp"

namespace bergman {

/// Holomorphic jets of order <= 2 in n variables, in the fixed order
///   0, e_1, ..., e_n, e_i + e_j (i <= j, row-major).
class JetIndex {
 public:
  explicit JetIndex(int n) : n_(n) {
    jets_.emplace_back(n);
    for (int i = 0; i < n; ++i) jets_.push_back(MultiIndex(n).plus_unit(i));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) jets_.push_back(MultiIndex(n).plus_unit(i).plus_unit(j));
  }

  int dimension() const { return n_; }
  int size() const { return static_cast<int>(jets_.size()); }
  const MultiIndex& operator[](int k) const { return jets_[static_cast<std::size_t>(k)]; }
  const std::vector<MultiIndex>& jets() const { return jets_; }

  int zero() const { return 0; }
  int first(int i) const { return 1 + i; }
  int second(int i, int j) const {
    if (i > j) std::swap(i, j);
    // rows 0..i-1 hold n, n-1, ... entries
    return 1 + n_ + i * n_ - i * (i - 1) / 2 + (j - i);
  }
  /// Jet for a list of up to two coordinate indices (derivative slots).
  int of(const std::vector<int>& coords) const {
    switch (coords.size()) {
      case 0: return zero();
      case 1: return first(coords[0]);
      case 2: return second(coords[0], coords[1]);
      default: throw UsageError("JetIndex: order > 2");
    }
  }

 private:
  int n_;
  std::vector<MultiIndex> jets_;
};

/// D^(a,b) K(p, conj p) for jets |a|, |b| <= 2: holomorphic derivatives a in the
/// first slot, antiholomorphic derivatives b in the second.
struct KernelDerivTable {
  CVec point;
  JetIndex jets{1};
  CMat values;  // values(a, b); Hermitian

  int dimension() const { return jets.dimension(); }
  double K() const { return values(0, 0).real(); }
  cplx operator()(int a, int b) const { return values(a, b); }
  cplx at(const std::vector<int>& holo, const std::vector<int>& anti) const {
    return values(jets.of(holo), jets.of(anti));
  }
};

/// Table sum_j V(a, j) conj(V(b, j)) from jet values of an orthonormal family.
/// Only the upper triangle is summed; the lower one is its exact conjugate.
inline KernelDerivTable table_from_jets(const CVec& p, const CMat& V) {
  const int n = static_cast<int>(p.size());
  KernelDerivTable t{p, JetIndex(n), CMat(V.rows(), V.rows())};
  for (Eigen::Index a = 0; a < V.rows(); ++a) {
    for (Eigen::Index b = a; b < V.rows(); ++b) {
      cplx s = 0.0;
      for (Eigen::Index j = 0; j < V.cols(); ++j) s += V(a, j) * std::conj(V(b, j));
      t.values(a, b) = s;
      t.values(b, a) = std::conj(s);
    }
    t.values(a, a).imag(0.0);
  }
  return t;
}

}  // namespace bergman

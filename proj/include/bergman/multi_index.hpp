#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bergman/types.hpp"

namespace bergman {

/// Exponent vector alpha = (alpha_1, ..., alpha_n) of a monomial z^alpha.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int n) : e_(static_cast<std::size_t>(n), 0) {}
  MultiIndex(std::initializer_list<int> v) : e_(v) { validate(); }
  explicit MultiIndex(std::vector<int> v) : e_(std::move(v)) { validate(); }

  int size() const { return static_cast<int>(e_.size()); }
  int operator[](int j) const { return e_[static_cast<std::size_t>(j)]; }
  int degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }
  const std::vector<int>& entries() const { return e_; }

  MultiIndex plus_unit(int j) const {
    MultiIndex r = *this;
    ++r.e_[static_cast<std::size_t>(j)];
    return r;
  }

  bool dominates(const MultiIndex& o) const {
    for (int j = 0; j < size(); ++j)
      if (e_[j] < o.e_[j]) return false;
    return true;
  }

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r = a;
    for (int j = 0; j < a.size(); ++j) r.e_[j] += b.e_[j];
    return r;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  // Graded (degree first) then lexicographic with the first coordinate most
  // significant: 1, z1, z2, z1^2, z1 z2, z2^2, ...
  friend bool graded_less(const MultiIndex& a, const MultiIndex& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return std::lexicographical_compare(b.e_.begin(), b.e_.end(), a.e_.begin(),
                                        a.e_.end());
  }

 private:
  void validate() const {
    for (int v : e_)
      if (v < 0) throw UsageError("MultiIndex: negative exponent");
  }

  std::vector<int> e_;
};

/// All multi-indices in n variables with total degree <= max_degree, graded order.
inline std::vector<MultiIndex> graded_indices(int n, int max_degree) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  // Enumerate exponents per total degree, first coordinate highest first.
  for (int d = 0; d <= max_degree; ++d) {
    auto rec = [&](auto&& self, int j, int left) -> void {
      if (j == n - 1) {
        cur[j] = left;
        out.emplace_back(cur);
        return;
      }
      for (int v = left; v >= 0; --v) {
        cur[j] = v;
        self(self, j + 1, left - v);
      }
    };
    if (n == 0) break;
    rec(rec, 0, d);
  }
  return out;
}

inline double factorial(int k) { return std::tgamma(k + 1.0); }

/// alpha! / (alpha - a)!, zero if a does not fit under alpha.
inline double falling_factor(const MultiIndex& alpha, const MultiIndex& a) {
  double f = 1.0;
  for (int j = 0; j < alpha.size(); ++j) {
    if (a[j] > alpha[j]) return 0.0;
    for (int k = 0; k < a[j]; ++k) f *= alpha[j] - k;
  }
  return f;
}

inline cplx monomial(const CVec& z, const MultiIndex& alpha) {
  cplx v = 1.0;
  for (int j = 0; j < alpha.size(); ++j)
    for (int k = 0; k < alpha[j]; ++k) v *= z[j];
  return v;
}

}  // namespace bergman

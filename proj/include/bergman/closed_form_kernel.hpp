#pragma once

#include <cmath>
#include <vector>

#include "bergman/deriv_table.hpp"
#include "bergman/domains.hpp"

namespace bergman {

/// Exact Bergman kernels of balls and polydiscs, with analytic jets.
///
/// Both kernels are products over coordinate groups of
///   c_g (1 - u_g)^(-e_g),   u_g = <z - a, w - a>_g / r_g^2,
/// one group of all n coordinates with e = n + 1 for a ball, n singleton groups
/// with e = 2 for a polydisc. Mixed derivatives of f(u) are expanded
/// symbolically into terms coeff * f^(m)(u) * zeta^beta * conj(zeta)^gamma.
class ClosedFormKernel {
 public:
  struct Group {
    std::vector<int> coords;
    CVec center;
    double radius = 1.0;
    double exponent = 2.0;
    double constant = 1.0;
  };

  static ClosedFormKernel ball(const CVec& center, double radius) {
    const int n = static_cast<int>(center.size());
    Group g;
    for (int j = 0; j < n; ++j) g.coords.push_back(j);
    g.center = center;
    g.radius = radius;
    g.exponent = n + 1.0;
    g.constant = std::tgamma(n + 1.0) / (std::pow(kPi, n) * std::pow(radius, 2.0 * n));
    return ClosedFormKernel(DomainSpec::ball(center, radius), {g});
  }

  static ClosedFormKernel polydisc(const CVec& center, const RVec& radii) {
    std::vector<Group> gs;
    for (Eigen::Index j = 0; j < center.size(); ++j) {
      Group g;
      g.coords = {static_cast<int>(j)};
      g.center = center.segment(j, 1);
      g.radius = radii[j];
      g.exponent = 2.0;
      g.constant = 1.0 / (kPi * radii[j] * radii[j]);
      gs.push_back(g);
    }
    return ClosedFormKernel(DomainSpec::polydisc(center, radii), std::move(gs));
  }

  const DomainSpec& domain() const { return domain_; }
  int dimension() const { return domain_.dimension(); }

  double kernel(const CVec& p) const {
    double v = 1.0;
    for (const Group& g : groups_) {
      double u = 0.0;
      for (std::size_t i = 0; i < g.coords.size(); ++i)
        u += std::norm(p[g.coords[i]] - g.center[static_cast<Eigen::Index>(i)]);
      u /= g.radius * g.radius;
      v *= g.constant * std::pow(1.0 - u, -g.exponent);
    }
    return v;
  }

  KernelDerivTable derivs(const CVec& p) const {
    if (!domain_.contains(p)) throw UsageError("ClosedFormKernel: point outside the domain");
    const int n = dimension();
    KernelDerivTable t{p, JetIndex(n), CMat()};
    const int M = t.jets.size();
    t.values.resize(M, M);
    for (int a = 0; a < M; ++a)
      for (int b = a; b < M; ++b) {
        cplx v = 1.0;
        for (const Group& g : groups_) v *= group_deriv(g, p, t.jets[a], t.jets[b]);
        t.values(a, b) = v;
        t.values(b, a) = std::conj(v);
      }
    for (int a = 0; a < M; ++a) t.values(a, a).imag(0.0);
    return t;
  }

 private:
  ClosedFormKernel(DomainSpec d, std::vector<Group> g) : domain_(std::move(d)), groups_(std::move(g)) {}

  struct Term {
    double coeff;
    int m;
    std::vector<int> beta;   // powers of zeta
    std::vector<int> gamma;  // powers of conj(zeta)
  };

  static cplx group_deriv(const Group& g, const CVec& p, const MultiIndex& a, const MultiIndex& b) {
    const std::size_t k = g.coords.size();
    std::vector<Term> terms{{1.0, 0, std::vector<int>(k, 0), std::vector<int>(k, 0)}};
    int order = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (int rep = 0; rep < a[g.coords[i]]; ++rep, ++order) {
        std::vector<Term> next;
        for (const Term& t : terms) {
          Term u = t;
          ++u.m;
          ++u.gamma[i];
          next.push_back(u);
          if (t.beta[i] > 0) {
            Term v = t;
            v.coeff *= t.beta[i];
            --v.beta[i];
            next.push_back(v);
          }
        }
        terms = std::move(next);
      }
      for (int rep = 0; rep < b[g.coords[i]]; ++rep, ++order) {
        std::vector<Term> next;
        for (const Term& t : terms) {
          Term u = t;
          ++u.m;
          ++u.beta[i];
          next.push_back(u);
          if (t.gamma[i] > 0) {
            Term v = t;
            v.coeff *= t.gamma[i];
            --v.gamma[i];
            next.push_back(v);
          }
        }
        terms = std::move(next);
      }
    }
    std::vector<cplx> zeta(k);
    double u0 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      zeta[i] = (p[g.coords[i]] - g.center[static_cast<Eigen::Index>(i)]) / g.radius;
      u0 += std::norm(zeta[i]);
    }
    cplx total = 0.0;
    for (const Term& t : terms) {
      // f^(m)(u) = c e (e+1) ... (e+m-1) (1-u)^(-(e+m))
      double fm = g.constant;
      for (int q = 0; q < t.m; ++q) fm *= g.exponent + q;
      fm *= std::pow(1.0 - u0, -(g.exponent + t.m));
      cplx mono = 1.0;
      for (std::size_t i = 0; i < k; ++i) {
        for (int e = 0; e < t.beta[i]; ++e) mono *= zeta[i];
        for (int e = 0; e < t.gamma[i]; ++e) mono *= std::conj(zeta[i]);
      }
      total += t.coeff * fm * mono;
    }
    return total * std::pow(g.radius, -order);
  }

  DomainSpec domain_;
  std::vector<Group> groups_;
};

}  // namespace bergman

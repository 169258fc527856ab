#pragma once

#include <cmath>

#include "bergman/domains.hpp"
#include "bergman/multi_index.hpp"

namespace bergman {

/// ||(z - c)^alpha||^2 over a Reinhardt domain centered at c.
///
/// Polydisc: prod_j pi beta_j^(2 alpha_j + 2) / (alpha_j + 1).
/// Ball:     pi^n alpha! r^(2|alpha| + 2n) / (|alpha| + n)!.
/// Ellipsoid { sum |z_j|^(2 m_j) < 1 }: polar coordinates and s_j = r_j^(2 m_j)
/// turn the integral into a Dirichlet integral over the simplex,
///           pi^n prod_j Gamma(p_j) / m_j / Gamma(1 + sum_j p_j),  p_j = (alpha_j + 1) / m_j.
inline double monomial_norm_closed(const DomainSpec& d, const MultiIndex& alpha) {
  const int n = d.dimension();
  if (alpha.size() != n) throw UsageError("monomial_norm_closed: multi-index dimension mismatch");
  if (const auto* p = std::get_if<Polydisc>(&d.variant())) {
    double v = 1.0;
    for (int j = 0; j < n; ++j)
      v *= kPi * std::pow(p->radii[j], 2.0 * alpha[j] + 2.0) / (alpha[j] + 1.0);
    return v;
  }
  if (const auto* b = std::get_if<Ball>(&d.variant())) {
    double lg = n * std::log(kPi) - std::lgamma(alpha.degree() + n + 1.0) +
                (2.0 * alpha.degree() + 2.0 * n) * std::log(b->radius);
    for (int j = 0; j < n; ++j) lg += std::lgamma(alpha[j] + 1.0);
    return std::exp(lg);
  }
  if (const auto* e = std::get_if<ComplexEllipsoid>(&d.variant())) {
    double lg = n * std::log(kPi);
    double psum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double pj = (alpha[j] + 1.0) / e->exponents[j];
      lg += std::lgamma(pj) - std::log(static_cast<double>(e->exponents[j]));
      psum += pj;
    }
    return std::exp(lg - std::lgamma(1.0 + psum));
  }
  throw UsageError("monomial_norm_closed: unsupported variant (general sublevel sets need quadrature)");
}

/// Volume of a Reinhardt model domain.
inline double known_volume(const DomainSpec& d) {
  return monomial_norm_closed(d, MultiIndex(d.dimension()));
}

/// Point about which a Reinhardt domain is rotation invariant.
inline CVec reinhardt_center(const DomainSpec& d) {
  if (const auto* p = std::get_if<Polydisc>(&d.variant())) return p->center;
  if (const auto* b = std::get_if<Ball>(&d.variant())) return b->center;
  return CVec::Zero(d.dimension());
}

}  // namespace bergman

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "bergman/aniso_box.hpp"
#include "bergman/experiments/directions.hpp"
#include "bergman/geometry.hpp"

namespace bergman {

struct SqueezeReport {
  double K_scaled = 0;                        // K(p) prod beta_j^2
  double K_normalized = 0;                    // K_scaled pi^n, 1 on the polydisc itself
  double metric_min = 0, metric_max = 0;      // g(p;X) / sum |X_j|^2 / beta_j^2
  CVec metric_min_witness, metric_max_witness;
  double C = 1;
  bool kernel_ok = false, metric_ok = false;
  bool ok() const { return kernel_ok && metric_ok; }
};

/// Two-sided comparison of K and g at p with the polydisc P(p, beta):
/// K(p) pi^n prod beta_j^2 and g(p;X) / sum |X_j|^2/beta_j^2 must lie in [1/C, C].
template <class Source>
SqueezeReport polydisc_squeeze_check(const Source& src, const CVec& p, const PolyBox& box, double C,
                                     int directions = 200, std::uint64_t seed = 0) {
  if (!(C > 0.0)) throw UsageError("polydisc_squeeze_check: C must be positive");
  const int n = box.dimension();
  if (p.size() != n) throw UsageError("polydisc_squeeze_check: dimension mismatch");
  if ((box.center - p).norm() > 1e-12 * (1.0 + p.norm()))
    throw UsageError("polydisc_squeeze_check: box must be centered at p");
  if (!box_contained_in(box, src.domain()))
    throw UsageError("polydisc_squeeze_check: polydisc is not contained in the domain");

  SqueezeReport r;
  r.C = C;
  const KernelDerivTable t = src.derivs(p);
  const MetricMatrix g = metric(t);
  r.K_scaled = t.K() * box.radii.array().square().prod();
  r.K_normalized = r.K_scaled * std::pow(kPi, n);

  std::mt19937_64 rng(seed);
  r.metric_min = std::numeric_limits<double>::infinity();
  r.metric_max = -r.metric_min;
  for (const CVec& X : sample_directions(n, directions, rng)) {
    double w = 0.0;
    for (int j = 0; j < n; ++j) w += std::norm(X[j]) / (box.radii[j] * box.radii[j]);
    const double q = g.norm2(X) / w;
    if (q < r.metric_min) { r.metric_min = q; r.metric_min_witness = X; }
    if (q > r.metric_max) { r.metric_max = q; r.metric_max_witness = X; }
  }
  const double lo = 1.0 / C;
  r.kernel_ok = r.K_normalized >= lo && r.K_normalized <= C;
  r.metric_ok = r.metric_min >= lo && r.metric_max <= C;
  return r;
}

}  // namespace bergman

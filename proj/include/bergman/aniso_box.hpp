#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "bergman/domains.hpp"

namespace bergman {

/// Plain polydisc region { |z_j - center_j| < radii_j }.
struct PolyBox {
  CVec center;
  RVec radii;

  int dimension() const { return static_cast<int>(center.size()); }
  bool contains(const CVec& z) const {
    for (int j = 0; j < dimension(); ++j)
      if (std::abs(z[j] - center[j]) >= radii[j]) return false;
    return true;
  }
  DomainSpec as_domain() const { return DomainSpec::polydisc(center, radii); }
};

enum class AnisoKind { P_delta_a, Q_delta_c };

/// Anisotropic polydiscs adapted to a boundary point: radius ~ delta in the
/// complex normal direction, ~ sqrt(delta) along the n - split - 1 degenerate
/// directions and O(1) along the last `split` directions.
///
///   P_{delta,a}: |z_1| < a delta,          |z_j| < a sqrt(delta), |z_k| < a
///   Q_{delta,c}: |z_1 + delta| < c delta,  |z_j| < c sqrt(delta), |z_k| < c
struct AnisoBox {
  AnisoKind kind = AnisoKind::P_delta_a;
  CVec center;
  double delta = 0.0;
  double scale = 0.0;
  int split = 0;

  int dimension() const { return static_cast<int>(center.size()); }

  RVec radii() const {
    const int n = dimension();
    RVec r(n);
    r[0] = scale * delta;
    for (int j = 1; j < n; ++j) r[j] = (j < n - split) ? scale * std::sqrt(delta) : scale;
    return r;
  }

  CVec box_center() const {
    CVec c = center;
    if (kind == AnisoKind::Q_delta_c) c[0] -= delta;
    return c;
  }

  PolyBox as_polybox() const { return {box_center(), radii()}; }
};

inline AnisoBox aniso_box(AnisoKind kind, const CVec& center, double delta, double scale, int split) {
  const int n = static_cast<int>(center.size());
  if (!(delta > 0.0) || !(scale > 0.0)) throw UsageError("aniso_box: delta and scale must be positive");
  if (split < 0 || split > n - 1) throw UsageError("aniso_box: split must lie in [0, n-1]");
  return AnisoBox{kind, center, delta, scale, split};
}

/// Uniform sample from a polydisc (independent uniform discs).
inline CVec sample_polybox(const PolyBox& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CVec z(b.dimension());
  for (int j = 0; j < b.dimension(); ++j) {
    const double r = b.radii[j] * std::sqrt(u(rng));
    const double th = 2.0 * kPi * u(rng);
    z[j] = b.center[j] + std::polar(r, th);
  }
  return z;
}

/// Sampled containment test: corner-directed extreme points (every coordinate at
/// its rim, phases on an 8-point grid, pulled in by 1e-9 relative) plus
/// `samples` uniform points of the box. True iff all satisfy contains().
inline bool box_contained_in(const PolyBox& box, const DomainSpec& d, int samples = 10000,
                             std::uint64_t seed = 1) {
  const int n = box.dimension();
  if (n != d.dimension()) throw UsageError("box_contained_in: dimension mismatch");
  constexpr int kPhases = 8;
  const double pull = 1.0 - 1e-9;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  CVec z(n);
  while (true) {
    for (int j = 0; j < n; ++j)
      z[j] = box.center[j] + std::polar(pull * box.radii[j], 2.0 * kPi * idx[j] / kPhases);
    if (!d.contains(z)) return false;
    int k = 0;
    while (k < n && ++idx[k] == kPhases) idx[k++] = 0;
    if (k == n) break;
  }
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s)
    if (!d.contains(sample_polybox(box, rng))) return false;
  return true;
}

inline bool box_contained_in(const AnisoBox& box, const DomainSpec& d, int samples = 10000,
                             std::uint64_t seed = 1) {
  return box_contained_in(box.as_polybox(), d, samples, seed);
}

}  // namespace bergman

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "bergman/minint.hpp"

namespace bergman {

struct LocalizationConfig {
  DomainSpec U;                        // neighborhood of the boundary point
  std::vector<CVec> points;            // p-sequence inside U and the domain
  CVec X, Y;
  int degree = 10;
  QuadScheme scheme = QuadScheme::MonteCarlo;
  int resolution = 200000;
  std::uint64_t seed = 0;
  std::optional<CVec> basis_center;    // default: projection of the last point
  double basis_scale = 1.0;
  double lower_slack = 1e-9;
};

struct LocalizationRow {
  CVec point;
  double I0 = 0, I1 = 0, I2 = 0;            // on the domain
  double I0_loc = 0, I1_loc = 0, I2_loc = 0; // on U intersected with the domain
  double r0 = 0, r1 = 0, r2 = 0;             // I^j / I^j_loc
  bool lower_ok = false;
};

struct LocalizationResult {
  std::vector<LocalizationRow> rows;
  double max_ratio = 0;
  bool lower_ok = true;
  bool reused = false;        // U contains the domain: the domain model was reused
  double local_cond = 1;
  std::vector<int> local_dropped;
  std::size_t nodes = 0;
};

/// Ratios I^j_Omega(p) / I^j_{U cap Omega}(p), j = 0, 1, 2, along a p-sequence.
/// `omega` is the domain's truncated model; the localized space is built on
/// U cap Omega by quadrature with monomials centered near the boundary point.
inline LocalizationResult localization_ratio(const KernelModel& omega, const LocalizationConfig& cfg) {
  const DomainSpec& d = omega.domain();
  if (cfg.points.empty()) throw UsageError("localization_ratio: empty p-sequence");
  LocalizationResult out;
  const bool covers = domain_contained_in(d, cfg.U);
  std::optional<KernelModel> local;
  if (covers) {
    out.reused = true;
  } else {
    const DomainSpec inter = intersect_domains(d, cfg.U);
    for (const CVec& p : cfg.points)
      if (!inter.contains(p)) throw UsageError("localization_ratio: p lies outside U cap Omega");
    const QuadratureRule q = build_quadrature(inter, cfg.scheme, cfg.resolution, cfg.seed);
    out.nodes = static_cast<std::size_t>(q.size());
    BuildOptions opt;
    opt.basis_center = cfg.basis_center ? *cfg.basis_center : boundary_project(d, cfg.points.back()).point;
    opt.basis_scale = cfg.basis_scale;
    local.emplace(build_model(inter, cfg.degree, q, opt));
    out.local_cond = local->cond_estimate();
    out.local_dropped = local->dropped();
  }
  const KernelModel& loc = local ? *local : omega;
  for (const CVec& p : cfg.points) {
    if (!d.contains(p)) throw UsageError("localization_ratio: p lies outside the domain");
    LocalizationRow r;
    r.point = p;
    r.I0 = I0(omega, p).value;
    r.I1 = I1(omega, p, cfg.X).value;
    r.I2 = I2(omega, p, cfg.X, cfg.Y).value;
    r.I0_loc = I0(loc, p).value;
    r.I1_loc = I1(loc, p, cfg.X).value;
    r.I2_loc = I2(loc, p, cfg.X, cfg.Y).value;
    r.r0 = r.I0 / r.I0_loc;
    r.r1 = r.I1 / r.I1_loc;
    r.r2 = r.I2 / r.I2_loc;
    r.lower_ok = std::min({r.r0, r.r1, r.r2}) >= 1.0 - cfg.lower_slack;
    out.lower_ok = out.lower_ok && r.lower_ok;
    out.max_ratio = std::max({out.max_ratio, r.r0, r.r1, r.r2});
    out.rows.push_back(std::move(r));
  }
  return out;
}

}  // namespace bergman

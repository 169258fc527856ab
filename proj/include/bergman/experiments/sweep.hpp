#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bergman/closed_form_kernel.hpp"
#include "bergman/experiments/directions.hpp"
#include "bergman/geometry.hpp"
#include "bergman/kernel_model.hpp"

namespace bergman {

struct SweepConfig {
  CVec q;                      // boundary point, or a point to project onto the boundary
  std::vector<double> t;       // strictly decreasing distances along the inward normal
  int direction_pairs = 50;    // random (X, Y) pairs on top of the axis pairs
  std::uint64_t seed = 0;
};

struct SweepRow {
  double t = 0;
  CVec point;
  double H_min = 0, H_max = 0;
  double B_min = 0, B_max = 0;
  double Ric_min = 0, Ric_max = 0;
  int degree = -1;  // -1 for exact kernels
  double cond = 1;
  std::string status = "ok";
  std::vector<double> B;  // every sampled bisectional value

  bool ok() const { return status == "ok"; }
};

struct SweepResult {
  CVec boundary_point;
  double projection_dist = 0;
  std::vector<SweepRow> rows;
};

namespace detail {

inline int source_degree(const KernelModel& m) { return m.degree(); }
inline int source_degree(const ClosedFormKernel&) { return -1; }
inline double source_cond(const KernelModel& m) { return m.cond_estimate(); }
inline double source_cond(const ClosedFormKernel&) { return 1.0; }

inline void check_t_grid(const std::vector<double>& t) {
  if (t.empty()) throw UsageError("boundary_sweep: empty t-grid");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0)) throw UsageError("boundary_sweep: t values must be positive");
    if (i > 0 && !(t[i] < t[i - 1])) throw UsageError("boundary_sweep: t-grid must be strictly decreasing");
  }
}

}  // namespace detail

/// Curvature along p_t = q + t nu(q). H and Ric are taken over the axis and
/// random directions, B over axis pairs and random pairs. Rows with a
/// degenerate metric carry the error text in `status`.
template <class Source>
SweepResult boundary_sweep(const Source& src, const SweepConfig& cfg) {
  detail::check_t_grid(cfg.t);
  const DomainSpec& d = src.domain();
  if (cfg.q.size() != d.dimension()) throw UsageError("boundary_sweep: q has the wrong dimension");
  const Projection proj =
      std::abs(d.rho(cfg.q)) <= 1e-12 ? Projection{cfg.q, 0.0, 0} : boundary_project(d, cfg.q);
  const int n = d.dimension();

  std::mt19937_64 rng(cfg.seed);
  const auto pairs = sample_direction_pairs(n, cfg.direction_pairs, rng);
  std::vector<CVec> dirs;
  for (int j = 0; j < n; ++j) dirs.push_back(unit_vector(n, j));
  for (std::size_t k = n * n; k < pairs.size(); ++k) dirs.push_back(pairs[k].first);

  SweepResult out;
  out.boundary_point = proj.point;
  out.projection_dist = proj.dist;
  for (double t : cfg.t) {
    SweepRow row;
    row.t = t;
    row.degree = detail::source_degree(src);
    row.cond = detail::source_cond(src);
    row.point = inward_point(d, proj.point, t);
    try {
      const CurvatureReport c = curvature_at(src, row.point);
      constexpr double inf = std::numeric_limits<double>::infinity();
      row.H_min = row.B_min = row.Ric_min = inf;
      row.H_max = row.B_max = row.Ric_max = -inf;
      for (const CVec& X : dirs) {
        const double h = c.H(X), r = c.Ric(X);
        row.H_min = std::min(row.H_min, h);
        row.H_max = std::max(row.H_max, h);
        row.Ric_min = std::min(row.Ric_min, r);
        row.Ric_max = std::max(row.Ric_max, r);
      }
      for (const auto& [X, Y] : pairs) {
        const double b = c.B(X, Y);
        row.B.push_back(b);
        row.B_min = std::min(row.B_min, b);
        row.B_max = std::max(row.B_max, b);
      }
    } catch (const DegenerateMetricError& e) {
      row.status = std::string("degenerate: ") + e.what();
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace bergman

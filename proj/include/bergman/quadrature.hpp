#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "bergman/domains.hpp"

namespace bergman {

enum class QuadScheme { TensorGrid, MonteCarlo };

inline std::string to_string(QuadScheme s) {
  return s == QuadScheme::TensorGrid ? "tensor-grid" : "monte-carlo";
}

inline QuadScheme parse_scheme(const std::string& s) {
  if (s == "tensor-grid" || s == "grid" || s == "tensor") return QuadScheme::TensorGrid;
  if (s == "monte-carlo" || s == "mc") return QuadScheme::MonteCarlo;
  throw UsageError("unknown quadrature scheme '" + s + "'");
}

/// Cubature nodes inside a domain. Nodes are the columns of `nodes`.
struct QuadratureRule {
  CMat nodes;
  RVec weights;
  QuadScheme scheme = QuadScheme::TensorGrid;
  int resolution = 0;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return weights.size(); }
  double total_mass() const { return weights.sum(); }

  /// Identifier written into model metadata.
  std::string id() const {
    return to_string(scheme) + ":" + std::to_string(resolution) +
           (scheme == QuadScheme::MonteCarlo ? "@" + std::to_string(seed) : "");
  }
};

/// Tensor grid: cell-midpoint rule with `resolution` cells per real axis of the
/// bounding box, keeping midpoints with rho < 0.
/// Monte Carlo: `resolution` uniform draws from the bounding box (mt19937_64
/// seeded with `seed`), rejection against rho, each weight = box volume / draws.
inline QuadratureRule build_quadrature(const DomainSpec& d, QuadScheme scheme, int resolution,
                                       std::uint64_t seed = 0) {
  if (resolution < 1) throw UsageError("build_quadrature: resolution must be >= 1");
  const int n = d.dimension();
  const Box box = d.bounding_box();
  const Eigen::Index m = 2 * n;
  std::vector<CVec> kept;
  double w = 0.0;

  if (scheme == QuadScheme::TensorGrid) {
    const double cells = std::pow(static_cast<double>(resolution), static_cast<double>(m));
    if (cells > 4e8) throw UsageError("build_quadrature: tensor grid too large; use monte-carlo");
    const RVec h = (box.hi - box.lo) / resolution;
    w = h.prod();
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    RVec x(m);
    while (true) {
      for (Eigen::Index k = 0; k < m; ++k) x[k] = box.lo[k] + (idx[k] + 0.5) * h[k];
      const CVec z = to_complex(x);
      if (d.contains(z)) kept.push_back(z);
      Eigen::Index k = 0;
      while (k < m && ++idx[k] == resolution) idx[k++] = 0;
      if (k == m) break;
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    w = box.volume() / resolution;
    RVec x(m);
    for (int s = 0; s < resolution; ++s) {
      for (Eigen::Index k = 0; k < m; ++k) x[k] = box.lo[k] + u(rng) * (box.hi[k] - box.lo[k]);
      const CVec z = to_complex(x);
      if (d.contains(z)) kept.push_back(z);
    }
  }

  if (kept.empty())
    throw EmptySpaceError("build_quadrature: no interior nodes (resolution too coarse or empty domain)");

  QuadratureRule q;
  q.scheme = scheme;
  q.resolution = resolution;
  q.seed = seed;
  q.nodes.resize(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) q.nodes.col(static_cast<Eigen::Index>(i)) = kept[i];
  q.weights = RVec::Constant(static_cast<Eigen::Index>(kept.size()), w);
  return q;
}

}  // namespace bergman

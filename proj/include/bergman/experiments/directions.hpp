#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "bergman/types.hpp"

namespace bergman {

/// Uniform point on the unit sphere of C^n (normalized complex Gaussian).
inline CVec random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVec v(n);
  do {
    for (int j = 0; j < n; ++j) v[j] = cplx(g(rng), g(rng));
  } while (v.norm() == 0.0);
  return v / v.norm();
}

/// Coordinate axes followed by `random` sphere samples.
inline std::vector<CVec> sample_directions(int n, int random, std::mt19937_64& rng) {
  std::vector<CVec> out;
  for (int j = 0; j < n; ++j) out.push_back(unit_vector(n, j));
  for (int s = 0; s < random; ++s) out.push_back(random_unit(n, rng));
  return out;
}

/// All ordered coordinate-axis pairs followed by `random` independent sphere pairs.
inline std::vector<std::pair<CVec, CVec>> sample_direction_pairs(int n, int random, std::mt19937_64& rng) {
  std::vector<std::pair<CVec, CVec>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.emplace_back(unit_vector(n, i), unit_vector(n, j));
  for (int s = 0; s < random; ++s) {
    CVec X = random_unit(n, rng);
    CVec Y = random_unit(n, rng);
    out.emplace_back(std::move(X), std::move(Y));
  }
  return out;
}

/// Uniform point of the ball of radius r about the origin.
inline CVec random_in_ball(int n, double r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return random_unit(n, rng) * (r * std::pow(u(rng), 1.0 / (2.0 * n)));
}

}  // namespace bergman

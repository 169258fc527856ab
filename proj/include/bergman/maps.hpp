#pragma once

#include <string>

#include "bergman/types.hpp"

namespace bergman {

/// Biholomorphism with its complex Jacobian J_ij = d f_i / d z_j.
struct HoloMap {
  enum class Kind { Affine, BallAutomorphism, Other };

  Kind kind = Kind::Other;
  std::string name;
  CMat A;  // affine: f(z) = A z + b
  CVec b;
  CVec a;  // ball automorphism: f(a) = 0

  CVec operator()(const CVec& z) const {
    switch (kind) {
      case Kind::Affine: return A * z + b;
      case Kind::BallAutomorphism: return apply_automorphism(z);
      default: throw UsageError("HoloMap: unsupported map kind '" + name + "'");
    }
  }

  CMat jacobian(const CVec& z) const {
    switch (kind) {
      case Kind::Affine: return A;
      case Kind::BallAutomorphism: return automorphism_jacobian(z);
      default: throw UsageError("HoloMap: unsupported map kind '" + name + "'");
    }
  }

 private:
  // phi_a(z) = (a - P z - s Q z) / (1 - <z, a>),  P = a a^* / |a|^2, Q = I - P, s = sqrt(1 - |a|^2)
  CMat projector() const { return a * a.adjoint() / a.squaredNorm(); }

  CVec apply_automorphism(const CVec& z) const {
    if (a.norm() == 0.0) return -z;
    const CMat P = projector();
    const CMat Q = CMat::Identity(a.size(), a.size()) - P;
    const double s = std::sqrt(1.0 - a.squaredNorm());
    const cplx D = 1.0 - a.dot(z);  // <z, a> = sum z_i conj(a_i)
    return (a - P * z - s * (Q * z)) / D;
  }

  CMat automorphism_jacobian(const CVec& z) const {
    const Eigen::Index n = a.size();
    if (a.norm() == 0.0) return -CMat::Identity(n, n);
    const CMat P = projector();
    const CMat Q = CMat::Identity(n, n) - P;
    const double s = std::sqrt(1.0 - a.squaredNorm());
    const cplx D = 1.0 - a.dot(z);
    const CVec N = a - P * z - s * (Q * z);
    return (-P - s * Q) / D + N * a.adjoint() / (D * D);
  }
};

inline HoloMap affine_map(CMat A, CVec b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw UsageError("affine_map: shape mismatch");
  HoloMap f;
  f.kind = HoloMap::Kind::Affine;
  f.name = "affine";
  f.A = std::move(A);
  f.b = std::move(b);
  return f;
}

/// Involutive automorphism of the unit ball exchanging a and 0.
inline HoloMap ball_automorphism(CVec a) {
  if (!(a.norm() < 1.0)) throw UsageError("ball_automorphism: |a| must be < 1");
  HoloMap f;
  f.kind = HoloMap::Kind::BallAutomorphism;
  f.name = "ball_automorphism";
  f.a = std::move(a);
  return f;
}

}  // namespace bergman

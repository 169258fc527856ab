#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bergman/types.hpp"

namespace bergman {

/// Axis-aligned box in the 2n real coordinates (x1, y1, ..., xn, yn).
struct Box {
  RVec lo;
  RVec hi;

  double volume() const { return (hi - lo).prod(); }
  bool contains(const RVec& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
};

struct Polydisc {
  CVec center;
  RVec radii;
};

struct Ball {
  CVec center;
  double radius = 1.0;
};

/// { sum_j |z_j|^(2 m_j) < 1 }, centered at the origin.
struct ComplexEllipsoid {
  std::vector<int> exponents;
};

/// { rho < 0 } for a user or built-in defining function. `name` and `params`
/// identify built-ins so the domain can be written back to JSON.
struct GeneralSublevel {
  std::string name;
  std::vector<double> params;
  std::function<double(const CVec&)> rho;
  std::function<RVec(const CVec&)> grad;  // real gradient, 2n entries
  Box bbox;
};

class DomainSpec {
 public:
  using Variant = std::variant<Polydisc, Ball, ComplexEllipsoid, GeneralSublevel>;

  DomainSpec(Variant v, std::optional<Box> bbox_override = std::nullopt)
      : v_(std::move(v)), bbox_override_(std::move(bbox_override)) {
    validate();
  }

  static DomainSpec polydisc(CVec center, RVec radii) {
    return DomainSpec(Polydisc{std::move(center), std::move(radii)});
  }
  static DomainSpec unit_polydisc(int n) {
    return polydisc(CVec::Zero(n), RVec::Ones(n));
  }
  static DomainSpec ball(CVec center, double radius) {
    return DomainSpec(Ball{std::move(center), radius});
  }
  static DomainSpec unit_ball(int n) { return ball(CVec::Zero(n), 1.0); }
  static DomainSpec ellipsoid(std::vector<int> m) {
    return DomainSpec(ComplexEllipsoid{std::move(m)});
  }

  const Variant& variant() const { return v_; }
  const std::optional<Box>& bbox_override() const { return bbox_override_; }
  DomainSpec with_bbox(Box b) const { return DomainSpec(v_, std::move(b)); }

  int dimension() const {
    return std::visit(
        [](const auto& d) -> int {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Polydisc>) return static_cast<int>(d.center.size());
          else if constexpr (std::is_same_v<T, Ball>) return static_cast<int>(d.center.size());
          else if constexpr (std::is_same_v<T, ComplexEllipsoid>) return static_cast<int>(d.exponents.size());
          else return static_cast<int>(d.bbox.lo.size() / 2);
        },
        v_);
  }

  bool is_reinhardt() const { return !std::holds_alternative<GeneralSublevel>(v_); }

  std::string kind() const {
    switch (v_.index()) {
      case 0: return "polydisc";
      case 1: return "ball";
      case 2: return "ellipsoid";
      default: return "general";
    }
  }

  /// Defining function. Polydiscs use max_j(|z_j - c_j|^2 / beta_j^2) - 1.
  double rho(const CVec& z) const {
    check_dim(z);
    return std::visit(
        [&](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Polydisc>) {
            double m = -1e300;
            for (Eigen::Index j = 0; j < z.size(); ++j)
              m = std::max(m, std::norm(z[j] - d.center[j]) / (d.radii[j] * d.radii[j]));
            return m - 1.0;
          } else if constexpr (std::is_same_v<T, Ball>) {
            return (z - d.center).squaredNorm() / (d.radius * d.radius) - 1.0;
          } else if constexpr (std::is_same_v<T, ComplexEllipsoid>) {
            double s = 0.0;
            for (Eigen::Index j = 0; j < z.size(); ++j)
              s += std::pow(std::norm(z[j]), d.exponents[j]);
            return s - 1.0;
          } else {
            return d.rho(z);
          }
        },
        v_);
  }

  /// Gradient of rho in real coordinates (x1, y1, ...).
  RVec rho_gradient(const CVec& z) const {
    check_dim(z);
    const auto n = z.size();
    return std::visit(
        [&](const auto& d) -> RVec {
          using T = std::decay_t<decltype(d)>;
          RVec g = RVec::Zero(2 * n);
          if constexpr (std::is_same_v<T, Polydisc>) {
            Eigen::Index best = 0;
            double m = -1e300;
            for (Eigen::Index j = 0; j < n; ++j) {
              double v = std::norm(z[j] - d.center[j]) / (d.radii[j] * d.radii[j]);
              if (v > m) { m = v; best = j; }
            }
            const cplx w = z[best] - d.center[best];
            const double s = 2.0 / (d.radii[best] * d.radii[best]);
            g[2 * best] = s * w.real();
            g[2 * best + 1] = s * w.imag();
          } else if constexpr (std::is_same_v<T, Ball>) {
            const CVec w = z - d.center;
            const double s = 2.0 / (d.radius * d.radius);
            for (Eigen::Index j = 0; j < n; ++j) {
              g[2 * j] = s * w[j].real();
              g[2 * j + 1] = s * w[j].imag();
            }
          } else if constexpr (std::is_same_v<T, ComplexEllipsoid>) {
            for (Eigen::Index j = 0; j < n; ++j) {
              const int m = d.exponents[j];
              const double s = 2.0 * m * std::pow(std::norm(z[j]), m - 1);
              g[2 * j] = s * z[j].real();
              g[2 * j + 1] = s * z[j].imag();
            }
          } else {
            g = d.grad(z);
          }
          return g;
        },
        v_);
  }

  bool contains(const CVec& z) const { return rho(z) < 0.0; }

  /// Box in real coordinates enclosing the domain (override wins).
  Box bounding_box() const {
    if (bbox_override_) return *bbox_override_;
    const int n = dimension();
    return std::visit(
        [&](const auto& d) -> Box {
          using T = std::decay_t<decltype(d)>;
          Box b{RVec(2 * n), RVec(2 * n)};
          if constexpr (std::is_same_v<T, Polydisc>) {
            for (int j = 0; j < n; ++j) {
              b.lo[2 * j] = d.center[j].real() - d.radii[j];
              b.hi[2 * j] = d.center[j].real() + d.radii[j];
              b.lo[2 * j + 1] = d.center[j].imag() - d.radii[j];
              b.hi[2 * j + 1] = d.center[j].imag() + d.radii[j];
            }
          } else if constexpr (std::is_same_v<T, Ball>) {
            const RVec c = to_real(d.center);
            b.lo = c.array() - d.radius;
            b.hi = c.array() + d.radius;
          } else if constexpr (std::is_same_v<T, ComplexEllipsoid>) {
            b.lo.setConstant(-1.0);
            b.hi.setConstant(1.0);
          } else {
            b = d.bbox;
          }
          return b;
        },
        v_);
  }

 private:
  void check_dim(const CVec& z) const {
    if (z.size() != dimension())
      throw UsageError("point dimension " + std::to_string(z.size()) +
                       " does not match domain dimension " + std::to_string(dimension()));
  }

  void validate() const {
    std::visit(
        [](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Polydisc>) {
            if (d.center.size() == 0 || d.center.size() != d.radii.size())
              throw UsageError("polydisc: center/radii size mismatch");
            if ((d.radii.array() <= 0.0).any()) throw UsageError("polydisc: radii must be positive");
          } else if constexpr (std::is_same_v<T, Ball>) {
            if (d.center.size() == 0) throw UsageError("ball: empty center");
            if (!(d.radius > 0.0)) throw UsageError("ball: radius must be positive");
          } else if constexpr (std::is_same_v<T, ComplexEllipsoid>) {
            if (d.exponents.empty()) throw UsageError("ellipsoid: empty exponent vector");
            for (int m : d.exponents)
              if (m < 1) throw UsageError("ellipsoid: exponents must be positive integers");
          } else {
            if (!d.rho || !d.grad) throw UsageError("general domain: missing rho or gradient");
            if (d.bbox.lo.size() == 0 || d.bbox.lo.size() % 2 != 0 ||
                d.bbox.lo.size() != d.bbox.hi.size())
              throw UsageError("general domain: bounding box must have 2n intervals");
          }
        },
        v_);
    if (bbox_override_ && bbox_override_->lo.size() != 2 * dimension())
      throw UsageError("bounding box override must have 2n intervals");
  }

  Variant v_;
  std::optional<Box> bbox_override_;
};

// ---------------------------------------------------------------------------
// Built-in general domains. Each is a sublevel set of a max of smooth pieces;
// the gradient is the gradient of the active piece.

namespace detail {

inline RVec ball_grad(const CVec& z, const CVec& c, double r) {
  return to_real(z - c) * (2.0 / (r * r));
}

inline Box ball_box(const CVec& c, double r) {
  const RVec x = to_real(c);
  return Box{x.array() - r, x.array() + r};
}

inline Box intersect(const Box& a, const Box& b) {
  return Box{a.lo.cwiseMax(b.lo), a.hi.cwiseMin(b.hi)};
}

}  // namespace detail

/// { Re z1 < 0 } intersected with the unit ball.
inline DomainSpec make_half_ball(int n) {
  GeneralSublevel g;
  g.name = "half_ball";
  g.rho = [](const CVec& z) { return std::max(z[0].real(), z.squaredNorm() - 1.0); };
  g.grad = [](const CVec& z) -> RVec {
    RVec gr = RVec::Zero(2 * z.size());
    if (z[0].real() >= z.squaredNorm() - 1.0) {
      gr[0] = 1.0;
      return gr;
    }
    return to_real(z) * 2.0;
  };
  g.bbox = detail::ball_box(CVec::Zero(n), 1.0);
  g.bbox.hi[0] = 0.0;
  return DomainSpec(std::move(g));
}

/// B(c1, r1) intersected with B(c2, r2).
inline DomainSpec make_ball_intersection(const CVec& c1, double r1, const CVec& c2, double r2) {
  if (c1.size() != c2.size()) throw UsageError("ball_intersection: dimension mismatch");
  GeneralSublevel g;
  g.name = "ball_intersection";
  for (const CVec* c : {&c1, &c2}) {
    const RVec x = to_real(*c);
    g.params.insert(g.params.end(), x.data(), x.data() + x.size());
    g.params.push_back(c == &c1 ? r1 : r2);
  }
  g.rho = [=](const CVec& z) {
    return std::max((z - c1).squaredNorm() / (r1 * r1) - 1.0, (z - c2).squaredNorm() / (r2 * r2) - 1.0);
  };
  g.grad = [=](const CVec& z) -> RVec {
    const double a = (z - c1).squaredNorm() / (r1 * r1) - 1.0;
    const double b = (z - c2).squaredNorm() / (r2 * r2) - 1.0;
    return a >= b ? detail::ball_grad(z, c1, r1) : detail::ball_grad(z, c2, r2);
  };
  g.bbox = detail::intersect(detail::ball_box(c1, r1), detail::ball_box(c2, r2));
  if ((g.bbox.hi.array() <= g.bbox.lo.array()).any())
    throw EmptySpaceError("ball_intersection: balls do not overlap");
  return DomainSpec(std::move(g));
}

/// Egg { sum |z_j|^(2 m_j) < 1 } presented as a general sublevel set, so it
/// goes through the quadrature path rather than closed-form norms.
inline DomainSpec make_egg(const std::vector<int>& m) {
  const DomainSpec e = DomainSpec::ellipsoid(m);
  GeneralSublevel g;
  g.name = "egg";
  for (int v : m) g.params.push_back(v);
  g.rho = [e](const CVec& z) { return e.rho(z); };
  g.grad = [e](const CVec& z) { return e.rho_gradient(z); };
  g.bbox = e.bounding_box();
  return DomainSpec(std::move(g));
}

/// Local model { Re z1 + sum_{j>=2} |z_j|^2 < 0 } cut off by the ball of radius R.
inline DomainSpec make_model_hypersurface(int n, double R) {
  GeneralSublevel g;
  g.name = "model_hypersurface";
  g.params = {R};
  auto piece = [](const CVec& z) { return z[0].real() + z.tail(z.size() - 1).squaredNorm(); };
  g.rho = [=](const CVec& z) { return std::max(piece(z), z.squaredNorm() / (R * R) - 1.0); };
  g.grad = [=](const CVec& z) -> RVec {
    if (piece(z) >= z.squaredNorm() / (R * R) - 1.0) {
      RVec gr = to_real(z) * 2.0;
      gr[0] = 1.0;
      gr[1] = 0.0;
      return gr;
    }
    return detail::ball_grad(z, CVec::Zero(z.size()), R);
  };
  g.bbox = detail::ball_box(CVec::Zero(n), R);
  g.bbox.hi[0] = 0.0;
  return DomainSpec(std::move(g));
}

/// a intersected with b. Not a named built-in, so it cannot be written to JSON.
inline DomainSpec intersect_domains(const DomainSpec& a, const DomainSpec& b) {
  if (a.dimension() != b.dimension()) throw UsageError("intersect_domains: dimension mismatch");
  GeneralSublevel g;
  g.name = "intersection";
  g.rho = [a, b](const CVec& z) { return std::max(a.rho(z), b.rho(z)); };
  g.grad = [a, b](const CVec& z) { return a.rho(z) >= b.rho(z) ? a.rho_gradient(z) : b.rho_gradient(z); };
  g.bbox = detail::intersect(a.bounding_box(), b.bounding_box());
  if ((g.bbox.hi.array() <= g.bbox.lo.array()).any())
    throw EmptySpaceError("intersect_domains: bounding boxes do not overlap");
  return DomainSpec(std::move(g));
}

/// Rebuilds a named built-in from its parameter list (inverse of the JSON dump).
inline DomainSpec make_builtin(const std::string& name, const std::vector<double>& params, int n) {
  if (name == "half_ball") return make_half_ball(n);
  if (name == "ball_intersection") {
    if (params.size() != static_cast<std::size_t>(4 * n + 2))
      throw UsageError("ball_intersection expects 4n+2 parameters");
    RVec x1 = Eigen::Map<const RVec>(params.data(), 2 * n);
    RVec x2 = Eigen::Map<const RVec>(params.data() + 2 * n + 1, 2 * n);
    return make_ball_intersection(to_complex(x1), params[2 * n], to_complex(x2), params[4 * n + 1]);
  }
  if (name == "egg") {
    std::vector<int> m;
    for (double v : params) m.push_back(static_cast<int>(std::lround(v)));
    if (static_cast<int>(m.size()) != n) throw UsageError("egg expects n exponents");
    return make_egg(m);
  }
  if (name == "model_hypersurface") {
    if (params.size() != 1) throw UsageError("model_hypersurface expects one parameter (R)");
    return make_model_hypersurface(n, params[0]);
  }
  throw UsageError("unknown built-in defining function '" + name + "'");
}

// ---------------------------------------------------------------------------
// Boundary geometry

/// Unit inward normal at z (complex form of -grad rho / |grad rho|).
inline CVec inward_normal(const DomainSpec& d, const CVec& z) {
  const RVec g = d.rho_gradient(z);
  const double nrm = g.norm();
  if (nrm == 0.0) throw ComputationalError("inward_normal: vanishing gradient of rho");
  return to_complex(-g / nrm);
}

struct Projection {
  CVec point;
  double dist = 0.0;
  int iterations = 0;
};

namespace detail {

inline RMat fd_hessian(const DomainSpec& d, const RVec& x) {
  const Eigen::Index m = x.size();
  RMat H(m, m);
  const double h = 1e-6 * std::max(1.0, x.norm());
  for (Eigen::Index i = 0; i < m; ++i) {
    RVec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    H.col(i) = (d.rho_gradient(to_complex(xp)) - d.rho_gradient(to_complex(xm))) / (2 * h);
  }
  return 0.5 * (H + H.transpose());
}

// Newton steps along the gradient until rho(x) = 0.
inline bool settle_on_surface(const DomainSpec& d, RVec& x) {
  for (int it = 0; it < 100; ++it) {
    const double r = d.rho(to_complex(x));
    if (std::abs(r) <= 1e-13) return true;
    const RVec g = d.rho_gradient(to_complex(x));
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) return false;
    x -= (r / g2) * g;
  }
  return std::abs(d.rho(to_complex(x))) <= 1e-12;
}

inline double tangential_residual(const DomainSpec& d, const RVec& x, const RVec& p) {
  const RVec g = d.rho_gradient(to_complex(x));
  const RVec n = g.normalized();
  const RVec v = p - x;
  return (v - v.dot(n) * n).norm();
}

}  // namespace detail

/// Nearest boundary point to an interior point p.
///
/// Ball and polydisc are handled in closed form. Other domains solve the
/// Lagrange system x - p + lambda grad rho(x) = 0, rho(x) = 0 by damped Newton,
/// falling back to projected gradient descent. Converged means |rho(q)| <= 1e-12
/// and the tangential part of p - q is <= 1e-10.
inline Projection boundary_project(const DomainSpec& d, const CVec& p) {
  if (!d.contains(p)) throw UsageError("boundary_project: point is not interior");
  const int n = d.dimension();

  if (const auto* b = std::get_if<Ball>(&d.variant())) {
    const CVec w = p - b->center;
    const double r = w.norm();
    if (r == 0.0) throw ProjectionError("boundary_project: center of ball has no unique projection", p);
    const CVec q = b->center + w * (b->radius / r);
    return {q, b->radius - r, 0};
  }
  if (const auto* pd = std::get_if<Polydisc>(&d.variant())) {
    int best = 0;
    double gap = 1e300;
    for (int j = 0; j < n; ++j) {
      const double gj = pd->radii[j] - std::abs(p[j] - pd->center[j]);
      if (gj < gap) { gap = gj; best = j; }
    }
    const cplx w = p[best] - pd->center[best];
    if (std::abs(w) == 0.0)
      throw ProjectionError("boundary_project: no unique nearest face", p);
    CVec q = p;
    q[best] = pd->center[best] + w * (pd->radii[best] / std::abs(w));
    return {q, gap, 0};
  }

  const RVec pr = to_real(p);
  const Eigen::Index m = pr.size();
  RVec x = pr;
  RVec g = d.rho_gradient(p);
  double lambda = d.rho(p) / g.squaredNorm();
  x = pr - lambda * g;

  auto residual = [&](const RVec& xx, double lam) {
    RVec F(m + 1);
    F.head(m) = xx - pr + lam * d.rho_gradient(to_complex(xx));
    F[m] = d.rho(to_complex(xx));
    return F;
  };

  int it = 0;
  bool ok = false;
  for (; it < 200; ++it) {
    const RVec F = residual(x, lambda);
    if (std::abs(F[m]) <= 1e-12 && detail::tangential_residual(d, x, pr) <= 1e-10) {
      ok = true;
      break;
    }
    g = d.rho_gradient(to_complex(x));
    RMat J = RMat::Zero(m + 1, m + 1);
    J.topLeftCorner(m, m) = RMat::Identity(m, m) + lambda * detail::fd_hessian(d, x);
    J.topRightCorner(m, 1) = g;
    J.bottomLeftCorner(1, m) = g.transpose();
    const RVec step = J.fullPivLu().solve(-F);
    if (!step.allFinite()) break;
    double s = 1.0;
    const double f0 = F.norm();
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, s *= 0.5) {
      const RVec xn = x + s * step.head(m);
      const double ln = lambda + s * step[m];
      if (residual(xn, ln).norm() < f0 || ls == 29) {
        x = xn;
        lambda = ln;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  if (!ok) {
    // Projected gradient: slide along the surface toward the foot of p.
    x = to_real(p);
    if (!detail::settle_on_surface(d, x))
      throw ProjectionError("boundary_project: could not reach the boundary", to_complex(x));
    for (it = 0; it < 5000; ++it) {
      if (std::abs(d.rho(to_complex(x))) <= 1e-12 && detail::tangential_residual(d, x, pr) <= 1e-10) {
        ok = true;
        break;
      }
      const RVec nrm = d.rho_gradient(to_complex(x)).normalized();
      RVec v = pr - x;
      v -= v.dot(nrm) * nrm;
      RVec xn = x + v;
      if (!detail::settle_on_surface(d, xn)) break;
      x = xn;
    }
    if (!ok)
      throw ProjectionError("boundary_project: no convergence (point outside tubular neighborhood?)",
                            to_complex(x));
  }

  // The foot must see p on its inner side.
  const RVec gq = d.rho_gradient(to_complex(x));
  if ((pr - x).dot(gq) > 0.0)
    throw ProjectionError("boundary_project: converged to a far-side critical point", to_complex(x));
  return {to_complex(x), (pr - x).norm(), it};
}

/// q + t * nu(q), nu the unit inward normal at boundary point q.
inline CVec inward_point(const DomainSpec& d, const CVec& q, double t) {
  if (!(t > 0.0)) throw UsageError("inward_point: t must be positive");
  const CVec p = q + t * inward_normal(d, q);
  if (!d.contains(p)) throw UsageError("inward_point: t exceeds the reach of the boundary");
  return p;
}

}  // namespace bergman

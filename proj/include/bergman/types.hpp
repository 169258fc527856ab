#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bergman {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

// Base of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller handed us something malformed (bad dimension, unknown kind, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// A computation hit a numerical wall: degeneracy, non-convergence, empty space.
class ComputationalError : public Error {
 public:
  using Error::Error;
};

class DegenerateMetricError : public ComputationalError {
 public:
  DegenerateMetricError(const std::string& what, RVec eigenvalues)
      : ComputationalError(what), eigenvalues_(std::move(eigenvalues)) {}
  const RVec& eigenvalues() const { return eigenvalues_; }

 private:
  RVec eigenvalues_;
};

class DegenerateConstraintsError : public ComputationalError {
 public:
  DegenerateConstraintsError(const std::string& what, double condition)
      : ComputationalError(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class ProjectionError : public ComputationalError {
 public:
  ProjectionError(const std::string& what, CVec last_iterate)
      : ComputationalError(what), last_(std::move(last_iterate)) {}
  const CVec& last_iterate() const { return last_; }

 private:
  CVec last_;
};

class EmptySpaceError : public ComputationalError {
 public:
  using ComputationalError::ComputationalError;
};

// Real coordinates (x1, y1, x2, y2, ...) of a complex n-vector.
inline RVec to_real(const CVec& z) {
  RVec x(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

inline CVec to_complex(const RVec& x) {
  CVec z(x.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = cplx(x[2 * j], x[2 * j + 1]);
  return z;
}

inline CVec make_cvec(std::initializer_list<cplx> v) {
  CVec z(static_cast<Eigen::Index>(v.size()));
  Eigen::Index j = 0;
  for (const auto& c : v) z[j++] = c;
  return z;
}

inline CVec unit_vector(int n, int j) {
  CVec e = CVec::Zero(n);
  e[j] = 1.0;
  return e;
}

}  // namespace bergman

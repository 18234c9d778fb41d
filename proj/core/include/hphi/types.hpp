#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hphi {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// e(theta) = exp(2 pi i theta), extended to complex theta.
inline Complex unit_phase(Complex theta) { return std::exp(2.0 * kPi * kI * theta); }

// Error hierarchy. The CLI maps InputError to exit code 2 and CrossCheckError
// to exit code 3; NumericalError is a conditioning failure that is reported
// with whatever context the caller attached.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class CrossCheckError : public Error {
 public:
  using Error::Error;
};

/// A point X = (x, xi) of phase space C^{2n}.
struct PhasePoint {
  CVector x;
  CVector xi;

  PhasePoint() = default;
  PhasePoint(CVector x_, CVector xi_) : x(std::move(x_)), xi(std::move(xi_)) {
    if (x.size() != xi.size()) throw InputError("PhasePoint: position and momentum dimensions differ");
  }

  static PhasePoint zero(int n) { return {CVector::Zero(n), CVector::Zero(n)}; }
  static PhasePoint from_stacked(const CVector& v) {
    if (v.size() % 2 != 0) throw InputError("PhasePoint: stacked vector has odd length");
    const auto n = v.size() / 2;
    return {v.head(n), v.tail(n)};
  }

  int dim() const { return static_cast<int>(x.size()); }

  CVector stacked() const {
    CVector v(2 * x.size());
    v << x, xi;
    return v;
  }

  PhasePoint operator+(const PhasePoint& o) const { return {x + o.x, xi + o.xi}; }
  PhasePoint operator-(const PhasePoint& o) const { return {x - o.x, xi - o.xi}; }
  PhasePoint operator-() const { return {-x, -xi}; }
  PhasePoint operator*(Complex s) const { return {s * x, s * xi}; }
};

}  // namespace hphi

#pragma once

// Closed-form integral of exp(-pi v.Av + 2 pi b.v + c) over R^m for complex
// symmetric A with positive definite real part.

#include "hphi/types.hpp"

namespace hphi {

struct GaussianIntegral {
  bool integrable = false;
  double min_eigenvalue = 0.0;  // of Re A
  double scale = 1.0;           // max(1, ||Re A||), the tolerance reference
  Complex log_value{0.0, 0.0};  // log of the integral (branch continuous from Re A)
  Complex value{0.0, 0.0};      // exp(log_value); zero when not integrable
};

/// Integrable iff min eig(Re A) > 1e-10 * max(1, ||Re A||).
/// det(A)^{-1/2} is taken along A_t = Re A + i t Im A, t in [0, 1].
GaussianIntegral gaussian_integral(const CMatrix& a, const CVector& b, Complex c);

}  // namespace hphi

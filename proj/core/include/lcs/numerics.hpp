#pragma once

#include "lcs/types.hpp"

#include <functional>

namespace lcs {

using VecFn = std::function<DVec(const DVec&)>;
using JacFn = std::function<DMat(const DVec&)>;

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double fd_step = 1e-7;
  int max_halvings = 12;
  double max_step = 0.0;  // 0: unlimited
};

struct NewtonResult {
  DVec x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

DMat fd_jacobian(const VecFn& F, const DVec& x, double h);
// Damped Newton with minimum-norm steps, so rank-deficient systems (families) still converge.
NewtonResult newton(const VecFn& F, DVec x0, const NewtonOptions& opt = {}, const JacFn& J = {});
double smallest_singular_value(const DMat& A);

}  // namespace lcs

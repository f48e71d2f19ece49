#include "lcs/numerics.hpp"

#include <Eigen/SVD>

namespace lcs {

DMat fd_jacobian(const VecFn& F, const DVec& x, double h) {
  DVec f0 = F(x);
  DMat J(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    DVec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (F(xp) - F(xm)) / (2 * h);
  }
  return J;
}

NewtonResult newton(const VecFn& F, DVec x, const NewtonOptions& opt, const JacFn& J) {
  NewtonResult r;
  DVec f = F(x);
  double res = f.norm();
  int it = 0;
  for (; it < opt.max_iter && res > opt.tol; ++it) {
    DMat A = J ? J(x) : fd_jacobian(F, x, opt.fd_step);
    Eigen::CompleteOrthogonalDecomposition<DMat> cod(A);
    cod.setThreshold(1e-10);
    DVec dx = -cod.solve(f);
    if (!dx.allFinite()) break;
    if (opt.max_step > 0.0 && dx.norm() > opt.max_step) dx *= opt.max_step / dx.norm();
    double alpha = 1.0;
    bool improved = false;
    for (int k = 0; k <= opt.max_halvings; ++k, alpha *= 0.5) {
      DVec xn = x + alpha * dx;
      DVec fn;
      try {
        fn = F(xn);
      } catch (const NumericError&) {
        continue;
      }
      double rn = fn.norm();
      if (std::isfinite(rn) && rn < res) {
        x = xn;
        f = fn;
        res = rn;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  r.x = x;
  r.residual = res;
  r.iterations = it;
  r.converged = res <= opt.tol;
  return r;
}

double smallest_singular_value(const DMat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<DMat> svd(A);
  const auto& s = svd.singularValues();
  if (A.cols() > A.rows()) return 0.0;
  return s[s.size() - 1];
}

}  // namespace lcs

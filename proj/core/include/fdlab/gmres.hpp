#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace fdlab {

using CVec = std::vector<std::complex<double>>;
using LinearMap = std::function<void(const CVec& in, CVec& out)>;

struct GmresResult {
  CVec x;
  int iterations = 0;
  double relative_residual = 0.0;  // true residual ||b - A x|| / ||b||
  bool converged = false;
};

/// Restarted GMRES with right preconditioning: solves A M^{-1} y = b, x = M^{-1} y.
/// `precond` applies M^{-1}. Stops at relative residual `tol` or `max_iter`
/// inner iterations in total.
GmresResult gmres(const LinearMap& apply, const LinearMap& precond, const CVec& b, double tol,
                  int max_iter, int restart = 40);

}  // namespace fdlab

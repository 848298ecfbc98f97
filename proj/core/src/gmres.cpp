#include "fdlab/gmres.hpp"

#include <cmath>

namespace fdlab {

namespace {

using cd = std::complex<double>;

double norm2(const CVec& v) {
  double acc = 0.0;
  for (const auto& c : v) acc += std::norm(c);
  return std::sqrt(acc);
}

cd dot(const CVec& a, const CVec& b) {
  cd acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace

GmresResult gmres(const LinearMap& apply, const LinearMap& precond, const CVec& b, double tol,
                  int max_iter, int restart) {
  const std::size_t n = b.size();
  GmresResult result;
  result.x.assign(n, cd(0.0, 0.0));
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }

  CVec r = b;
  CVec tmp(n);
  CVec z(n);
  const int m = restart;
  std::vector<CVec> V(m + 1, CVec(n));
  std::vector<std::vector<cd>> H(m + 1, std::vector<cd>(m, cd(0.0, 0.0)));
  std::vector<cd> cs(m), sn(m), g(m + 1);

  double rnorm = bnorm;
  while (result.iterations < max_iter) {
    for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / rnorm;
    std::fill(g.begin(), g.end(), cd(0.0, 0.0));
    g[0] = rnorm;
    int k = 0;
    for (; k < m && result.iterations < max_iter; ++k) {
      ++result.iterations;
      precond(V[k], z);
      apply(z, tmp);
      // modified Gram-Schmidt
      for (int j = 0; j <= k; ++j) {
        H[j][k] = dot(V[j], tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] -= H[j][k] * V[j][i];
      }
      const double h = norm2(tmp);
      H[k + 1][k] = h;
      if (h > 0.0) {
        for (std::size_t i = 0; i < n; ++i) V[k + 1][i] = tmp[i] / h;
      }
      for (int j = 0; j < k; ++j) {
        const cd a = H[j][k];
        const cd c = H[j + 1][k];
        H[j][k] = std::conj(cs[j]) * a + std::conj(sn[j]) * c;
        H[j + 1][k] = -sn[j] * a + cs[j] * c;
      }
      const cd a = H[k][k];
      const double denom = std::sqrt(std::norm(a) + h * h);
      if (denom == 0.0) {
        cs[k] = 1.0;
        sn[k] = 0.0;
      } else {
        cs[k] = a / denom;
        sn[k] = h / denom;
      }
      H[k][k] = std::conj(cs[k]) * a + std::conj(sn[k]) * h;
      H[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = std::conj(cs[k]) * g[k];
      if (std::abs(g[k + 1]) <= tol * bnorm || h == 0.0) {
        ++k;
        break;
      }
    }
    // back substitution for the Krylov coefficients
    std::vector<cd> y(k);
    for (int i = k - 1; i >= 0; --i) {
      cd acc = g[i];
      for (int j = i + 1; j < k; ++j) acc -= H[i][j] * y[j];
      y[i] = acc / H[i][i];
    }
    std::fill(tmp.begin(), tmp.end(), cd(0.0, 0.0));
    for (int j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < n; ++i) tmp[i] += y[j] * V[j][i];
    }
    precond(tmp, z);
    for (std::size_t i = 0; i < n; ++i) result.x[i] += z[i];

    apply(result.x, tmp);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
    const double previous = rnorm;
    rnorm = norm2(r);
    result.relative_residual = rnorm / bnorm;
    if (result.relative_residual <= tol) {
      result.converged = true;
      return result;
    }
    if (rnorm >= previous * (1.0 - 1e-6)) break;  // stalled across a full cycle
  }
  return result;
}

}  // namespace fdlab

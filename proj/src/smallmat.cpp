#include "pointspec/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pointspec {

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::max_abs() const {
  double s = 0.0;
  for (double v : a_) s = std::max(s, std::abs(v));
  return s;
}

SymMatrix SymMatrix::leading_principal_submatrix() const {
  if (n_ < 2)
    throw std::invalid_argument("leading_principal_submatrix: size < 2");
  SymMatrix out(n_ - 1);
  for (int i = 0; i < n_ - 1; ++i)
    for (int j = 0; j < n_ - 1; ++j) out(i, j) = (*this)(i, j);
  return out;
}

EigenDecomposition jacobi_eigensystem(const SymMatrix& m) {
  const int n = m.size();
  if (n == 0) throw std::invalid_argument("jacobi_eigensystem: empty matrix");
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    v[i][i] = 1.0;
    for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
  }

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    double diag = 0.0;
    for (int i = 0; i < n; ++i) diag += a[i][i] * a[i][i];
    if (off <= 1e-30 * (diag + off) || off == 0.0) break;
    if (sweep == max_sweeps - 1)
      throw std::runtime_error("jacobi_eigensystem: no convergence");

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a[i][i] < a[j][j]; });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.assign(n, std::vector<double>(n));
  for (int k = 0; k < n; ++k) {
    const int src = order[k];
    out.eigenvalues[k] = a[src][src];
    for (int i = 0; i < n; ++i) out.eigenvectors[k][i] = v[i][src];
    // sign convention: largest-magnitude component positive
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(out.eigenvectors[k][i]) >
          std::abs(out.eigenvectors[k][imax]))
        imax = i;
    if (out.eigenvectors[k][imax] < 0.0)
      for (int i = 0; i < n; ++i) out.eigenvectors[k][i] = -out.eigenvectors[k][i];
  }
  return out;
}

}  // namespace pointspec

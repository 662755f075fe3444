#ifndef POINTSPEC_SMALLMAT_HPP
#define POINTSPEC_SMALLMAT_HPP

// Dense symmetric matrices of the sizes the principal matrix takes
// (N <= 64) and a cyclic Jacobi eigensolver. Deterministic, no BLAS.

#include <cstddef>
#include <vector>

namespace pointspec {

class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }

  void set_sym(int i, int j, double v) {
    (*this)(i, j) = v;
    (*this)(j, i) = v;
  }

  double frobenius_norm() const;
  double max_abs() const;

  // leading (n-1) x (n-1) principal submatrix
  SymMatrix leading_principal_submatrix() const;

 private:
  int n_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;             // ascending
  std::vector<std::vector<double>> eigenvectors;  // [k][i], orthonormal
};

// Cyclic Jacobi; eigenvalues ascending, eigenvectors sign-fixed so the
// largest-magnitude component of each vector is positive.
EigenDecomposition jacobi_eigensystem(const SymMatrix& m);

}  // namespace pointspec

#endif

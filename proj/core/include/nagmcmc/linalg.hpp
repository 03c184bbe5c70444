#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "nagmcmc/errors.hpp"

namespace nagmcmc {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  // Validates the entry count and rejects non-finite values.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<cplx>& entries() const { return data_; }

  ComplexMatrix adjoint() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

// A = HᴴH (Hermitian PSD, cols×cols). Throws DimensionError on an empty H.
ComplexMatrix gram(const ComplexMatrix& h);

// Lower-triangular L with L·Lᴴ = A for Hermitian positive definite A.
// Throws NotPositiveDefinite when a pivot falls at or below pivot_tol.
ComplexMatrix cholesky_lower(const ComplexMatrix& a, double pivot_tol = 1e-12);

// A⁻¹ via Cholesky factorization and two triangular solves.
ComplexMatrix invert_hpd(const ComplexMatrix& a);

double frobenius_norm(const ComplexMatrix& a);

// Dominant eigenvalue of a Hermitian PSD matrix by power iteration
// (test utility; the runtime path uses the Frobenius-norm bound).
double lambda_max(const ComplexMatrix& a, double rel_tol = 1e-8,
                  int max_iters = 10000);

void matvec(const ComplexMatrix& h, std::span<const cplx> x, std::span<cplx> out);
void matvec_adjoint(const ComplexMatrix& h, std::span<const cplx> x,
                    std::span<cplx> out);
ComplexVector matvec(const ComplexMatrix& h, const ComplexVector& x);
ComplexVector matvec_adjoint(const ComplexMatrix& h, const ComplexVector& x);

double sqnorm(std::span<const cplx> v);

// r = y − Hx together with ‖r‖²; lengths must match.
std::pair<ComplexVector, double> residual(const ComplexVector& y,
                                          const ComplexVector& hx);
double residual_into(std::span<const cplx> y, std::span<const cplx> hx,
                     std::span<cplx> r_out);

}  // namespace nagmcmc

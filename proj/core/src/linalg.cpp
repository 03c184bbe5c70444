#include "nagmcmc/linalg.hpp"

#include <cmath>

#include "nagmcmc/rng.hpp"

namespace nagmcmc {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_)
    throw DimensionError("matrix entry count does not match rows*cols");
  for (const cplx& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix gram(const ComplexMatrix& h) {
  if (h.empty()) throw DimensionError("gram: empty matrix");
  const std::size_t nr = h.rows(), nt = h.cols();
  ComplexMatrix a(nt, nt);
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      cplx acc = 0.0;
      for (std::size_t r = 0; r < nr; ++r) acc += std::conj(h(r, i)) * h(r, j);
      a(i, j) = acc;
    }
  }
  return a;
}

ComplexMatrix cholesky_lower(const ComplexMatrix& a, double pivot_tol) {
  if (a.empty() || a.rows() != a.cols())
    throw DimensionError("cholesky_lower: matrix must be square and nonempty");
  const std::size_t n = a.rows();
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > pivot_tol))
      throw NotPositiveDefinite("cholesky_lower: pivot at or below tolerance");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx acc = a(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
      l(i, j) = acc / ljj;
    }
  }
  return l;
}

ComplexMatrix invert_hpd(const ComplexMatrix& a) {
  const ComplexMatrix l = cholesky_lower(a);
  const std::size_t n = a.rows();
  // Solve L Y = I column by column, then Lᴴ X = Y.
  ComplexMatrix y(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc = (i == c) ? cplx{1.0} : cplx{0.0};
      for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * y(k, c);
      y(i, c) = acc / l(i, i);
    }
  }
  ComplexMatrix x(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t ii = n; ii-- > 0;) {
      cplx acc = y(ii, c);
      for (std::size_t k = ii + 1; k < n; ++k)
        acc -= std::conj(l(k, ii)) * x(k, c);
      x(ii, c) = acc / l(ii, ii);
    }
  }
  return x;
}

double frobenius_norm(const ComplexMatrix& a) {
  if (a.empty()) throw DimensionError("frobenius_norm: empty matrix");
  double acc = 0.0;
  for (const cplx& v : a.entries()) acc += std::norm(v);
  return std::sqrt(acc);
}

double lambda_max(const ComplexMatrix& a, double rel_tol, int max_iters) {
  if (a.empty() || a.rows() != a.cols())
    throw DimensionError("lambda_max: matrix must be square and nonempty");
  const std::size_t n = a.rows();
  Rng rng(0x6a09e667f3bcc909ULL);
  ComplexVector v(n), av(n);
  for (auto& e : v) e = rng.normal_complex(1.0);
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    matvec(a, v, av);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += (std::conj(v[i]) * av[i]).real();
      den += std::norm(v[i]);
    }
    const double next = num / den;
    const double norm = std::sqrt(sqnorm(av));
    if (norm == 0.0) return 0.0;  // zero matrix
    for (std::size_t i = 0; i < n; ++i) v[i] = av[i] / norm;
    if (it > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next))
      return next;
    lambda = next;
  }
  throw NumericError("lambda_max: power iteration did not converge");
}

void matvec(const ComplexMatrix& h, std::span<const cplx> x, std::span<cplx> out) {
  const std::size_t nr = h.rows(), nc = h.cols();
  for (std::size_t r = 0; r < nr; ++r) {
    cplx acc = 0.0;
    const cplx* row = h.row(r).data();
    for (std::size_t c = 0; c < nc; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
}

void matvec_adjoint(const ComplexMatrix& h, std::span<const cplx> x,
                    std::span<cplx> out) {
  const std::size_t nr = h.rows(), nc = h.cols();
  for (std::size_t c = 0; c < nc; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < nr; ++r) {
    const cplx* row = h.row(r).data();
    const cplx xr = x[r];
    for (std::size_t c = 0; c < nc; ++c) out[c] += std::conj(row[c]) * xr;
  }
}

ComplexVector matvec(const ComplexMatrix& h, const ComplexVector& x) {
  if (x.size() != h.cols()) throw DimensionError("matvec: length mismatch");
  ComplexVector out(h.rows());
  matvec(h, x, out);
  return out;
}

ComplexVector matvec_adjoint(const ComplexMatrix& h, const ComplexVector& x) {
  if (x.size() != h.rows()) throw DimensionError("matvec_adjoint: length mismatch");
  ComplexVector out(h.cols());
  matvec_adjoint(h, x, out);
  return out;
}

double sqnorm(std::span<const cplx> v) {
  double acc = 0.0;
  for (const cplx& e : v) acc += std::norm(e);
  return acc;
}

double residual_into(std::span<const cplx> y, std::span<const cplx> hx,
                     std::span<cplx> r_out) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const cplx r = y[i] - hx[i];
    r_out[i] = r;
    acc += std::norm(r);
  }
  return acc;
}

std::pair<ComplexVector, double> residual(const ComplexVector& y,
                                          const ComplexVector& hx) {
  if (y.size() != hx.size()) throw DimensionError("residual: length mismatch");
  ComplexVector r(y.size());
  const double s = residual_into(y, hx, r);
  return {std::move(r), s};
}

}  // namespace nagmcmc

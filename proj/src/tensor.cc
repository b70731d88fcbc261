// Copyright 2026 The chicat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chicat/tensor.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "chicat/errors.h"
#include "eigen_view.h"

namespace chicat {

using detail::view;

namespace {

void check_dimension(std::size_t n) {
  if (n > kMaxDimension) {
    throw DimensionError(fmt::format("matrix dimension {} exceeds cap {}", n, kMaxDimension));
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(fmt::format("{}: shape mismatch {}x{} vs {}x{}", what, a.rows(),
                                            a.cols(), b.rows(), b.cols()));
  }
}

bool all_finite(const ComplexMatrix& m) {
  return std::all_of(m.entries().begin(), m.entries().end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
  check_dimension(rows);
  check_dimension(cols);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  check_dimension(rows);
  check_dimension(cols);
  if (entries_.size() != rows * cols) {
    throw std::invalid_argument(
        fmt::format("ComplexMatrix: {} entries for a {}x{} matrix", entries_.size(), rows, cols));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("ComplexMatrix: ragged initializer");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::column(std::vector<Complex> values) {
  const std::size_t n = values.size();
  return ComplexMatrix(n, 1, std::move(values));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out = *this;
  for (auto& z : out.entries_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace of a non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm2() const {
  double s = 0.0;
  for (const auto& z : entries_) s += std::norm(z);
  return s;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument(
        fmt::format("matrix product: {}x{} times {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
  }
  ComplexMatrix out(a.rows(), b.cols());
  view(out).noalias() = view(a) * view(b);
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  if (!m.is_square()) return false;
  const double scale = m.max_abs();
  double worst = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = r; c < m.cols(); ++c)
      worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
  return scale == 0.0 ? worst == 0.0 : worst < rel_tol * scale;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) return false;
  return max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.rows())) < tol;
}

SubsystemShape::SubsystemShape(std::vector<std::size_t> local_dims) : dims_(std::move(local_dims)) {
  for (std::size_t d : dims_) {
    if (d < 2) throw std::invalid_argument(fmt::format("subsystem dimension {} < 2", d));
  }
  check_dimension(total());
}

SubsystemShape SubsystemShape::uniform(std::size_t count, std::size_t local_dim) {
  return SubsystemShape(std::vector<std::size_t>(count, local_dim));
}

std::size_t SubsystemShape::total() const {
  std::size_t t = 1;
  for (std::size_t d : dims_) {
    if (t > kMaxDimension) break;
    t *= d;
  }
  return t;
}

SubsystemShape SubsystemShape::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != dims_.size()) throw std::invalid_argument("permutation length mismatch");
  std::vector<std::size_t> out(dims_.size());
  for (std::size_t k = 0; k < dims_.size(); ++k) out[perm[k]] = dims_[k];
  return SubsystemShape(std::move(out));
}

SubsystemShape SubsystemShape::squared() const {
  std::vector<std::size_t> out(dims_);
  for (auto& d : out) d *= d;
  return SubsystemShape(std::move(out));
}

SubsystemShape SubsystemShape::concat(const SubsystemShape& other) const {
  std::vector<std::size_t> out(dims_);
  out.insert(out.end(), other.dims_.begin(), other.dims_.end());
  return SubsystemShape(std::move(out));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > kMaxDimension || cols > kMaxDimension) {
    throw DimensionError(fmt::format("kron result {}x{} exceeds cap {}", rows, cols, kMaxDimension));
  }
  ComplexMatrix out(rows, cols);
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex x = a(ar, ac);
      if (x == Complex(0.0)) continue;
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = x * b(br, bc);
    }
  return out;
}

namespace {

void validate_permutation(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n) {
    throw std::invalid_argument(fmt::format("permutation of length {} for {} subsystems", perm.size(), n));
  }
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw std::invalid_argument("not a permutation");
    seen[p] = true;
  }
}

}  // namespace

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
  validate_permutation(perm, perm.size());
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = k;
  return inv;
}

std::vector<std::size_t> permutation_index_map(const SubsystemShape& shape,
                                               std::span<const std::size_t> perm) {
  const std::size_t n = shape.count();
  validate_permutation(perm, n);
  std::vector<std::size_t> old_stride(n);
  std::size_t s = 1;
  for (std::size_t k = n; k-- > 0;) {
    old_stride[k] = s;
    s *= shape[k];
  }
  // New position p holds old factor inv[p].
  const auto inv = inverse_permutation(perm);
  std::vector<std::size_t> new_dims(n), stride_at(n);
  for (std::size_t p = 0; p < n; ++p) {
    new_dims[p] = shape[inv[p]];
    stride_at[p] = old_stride[inv[p]];
  }
  const std::size_t total = shape.total();
  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digit(n, 0);
  std::size_t source = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    map[flat] = source;
    for (std::size_t p = n; p-- > 0;) {
      if (++digit[p] < new_dims[p]) {
        source += stride_at[p];
        break;
      }
      source -= (new_dims[p] - 1) * stride_at[p];
      digit[p] = 0;
    }
  }
  return map;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const SubsystemShape& shape,
                                 std::span<const std::size_t> perm) {
  const std::size_t n = shape.total();
  const auto map = permutation_index_map(shape, perm);
  if (m.rows() == n && m.cols() == 1) {
    ComplexMatrix out(n, 1);
    for (std::size_t i = 0; i < n; ++i) out(i, 0) = m(map[i], 0);
    return out;
  }
  if (m.rows() != n || m.cols() != n) {
    throw std::invalid_argument(
        fmt::format("permute_subsystems: {}x{} matrix for shape of dimension {}", m.rows(), m.cols(), n));
  }
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t si = map[i];
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m(si, map[j]);
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            std::span<const std::size_t> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  const std::size_t n = shape.count();
  if (!m.is_square() || m.rows() != shape.total()) {
    throw std::invalid_argument("partial_trace: matrix does not match shape");
  }
  std::vector<bool> kept(n, false);
  for (std::size_t k : keep) {
    if (k >= n) throw std::invalid_argument("partial_trace: subsystem index out of range");
    kept[k] = true;
  }
  std::vector<std::size_t> perm(n);
  std::size_t kept_dim = 1, next = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (kept[k]) {
      perm[k] = next++;
      kept_dim *= shape[k];
    }
  for (std::size_t k = 0; k < n; ++k)
    if (!kept[k]) perm[k] = next++;
  const std::size_t traced_dim = shape.total() / kept_dim;
  const auto map = permutation_index_map(shape, perm);
  ComplexMatrix out(kept_dim, kept_dim);
  for (std::size_t a = 0; a < kept_dim; ++a)
    for (std::size_t b = 0; b < kept_dim; ++b) {
      Complex s = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t) s += m(map[a * traced_dim + t], map[b * traced_dim + t]);
      out(a, b) = s;
    }
  return out;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("hermitian_eigen: non-square input");
  const detail::RowMajorXcd h = 0.5 * (view(m) + view(m).adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eigen: no convergence");
  HermitianEigen out;
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  out.vectors = detail::from_eigen(solver.eigenvectors());
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("trace_norm: non-square input");
  if (m.rows() == 0) return 0.0;
  if (is_hermitian(m, 1e-12)) {
    const auto eig = hermitian_eigen(m);
    double s = 0.0;
    for (double v : eig.values) s += std::abs(v);
    return s;
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(view(m)));
  return svd.singularValues().sum();
}

ComplexMatrix rk4_step_matrix(const ComplexMatrix& h, double dt) {
  if (!h.is_square()) throw std::invalid_argument("rk4_step_matrix: non-square generator");
  const std::size_t n = h.rows();
  const ComplexMatrix x = h * Complex(0.0, -dt);
  const ComplexMatrix id = ComplexMatrix::identity(n);
  // Horner form of the degree-4 Taylor polynomial.
  ComplexMatrix t = id + x * 0.25;
  t = id + (x * (1.0 / 3.0)) * t;
  t = id + (x * 0.5) * t;
  return id + x * t;
}

ComplexMatrix rk4_step(const ComplexMatrix& h, const ComplexMatrix& psi, double dt) {
  const Complex mi(0.0, -1.0);
  const ComplexMatrix k1 = (h * psi) * mi;
  const ComplexMatrix k2 = (h * (psi + k1 * (0.5 * dt))) * mi;
  const ComplexMatrix k3 = (h * (psi + k2 * (0.5 * dt))) * mi;
  const ComplexMatrix k4 = (h * (psi + k3 * dt)) * mi;
  return psi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
}

ComplexMatrix propagate_segment(const ComplexMatrix& h, const ComplexMatrix& psi, double duration,
                                double max_step) {
  if (!(duration > 0.0) || !(max_step > 0.0)) {
    throw std::invalid_argument("propagate_segment: duration and step must be positive");
  }
  if (!h.is_square() || h.cols() != psi.rows()) {
    throw std::invalid_argument("propagate_segment: generator does not match state");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(duration / max_step));
  const double dt = duration / static_cast<double>(steps);
  ComplexMatrix out = psi;
  for (std::size_t s = 0; s < steps; ++s) out = rk4_step(h, out, dt);
  if (!all_finite(out)) {
    throw NumericalError(fmt::format("propagate_segment: non-finite amplitudes (step {:.3e} s)", dt));
  }
  return out;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, std::size_t n) {
  if (!m.is_square()) throw std::invalid_argument("matrix_power: non-square input");
  ComplexMatrix result = ComplexMatrix::identity(m.rows());
  ComplexMatrix base = m;
  bool first = true;
  while (n > 0) {
    if (n & 1U) {
      result = first ? base : base * result;
      first = false;
    }
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return result;
}

ComplexMatrix unitary_propagator(const ComplexMatrix& h, double t) {
  const auto eig = hermitian_eigen(h);
  const auto v = detail::view(eig.vectors);
  Eigen::VectorXcd phases(v.cols());
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    phases[k] = std::exp(Complex(0.0, -eig.values[static_cast<std::size_t>(k)] * t));
  }
  return detail::from_eigen(v * phases.asDiagonal() * v.adjoint());
}

}  // namespace chicat

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

#include "chicat/process_matrix.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace chicat {

namespace {

// unit_index[n] = i * D + j for the matrix-unit basis element n = |i><j|.
std::vector<std::size_t> unit_index(const SubsystemShape& shape) {
  const std::size_t n = shape.count();
  std::vector<std::size_t> doubled(shape.dims());
  doubled.insert(doubled.end(), shape.dims().begin(), shape.dims().end());
  std::vector<std::size_t> perm(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    perm[k] = 2 * k;
    perm[n + k] = 2 * k + 1;
  }
  return permutation_index_map(SubsystemShape(std::move(doubled)), perm);
}

ComplexMatrix to_matrix_unit_chi(const ProcessMatrix& p) {
  if (p.basis().kind() == BasisKind::kMatrixUnit) return p.chi();
  const ComplexMatrix w = p.basis().from_matrix_unit();
  return w.adjoint() * p.chi() * w;
}

ComplexMatrix from_matrix_unit_chi(const ComplexMatrix& chi_unit, const OperatorBasis& basis) {
  if (basis.kind() == BasisKind::kMatrixUnit) return chi_unit;
  const ComplexMatrix w = basis.from_matrix_unit();
  return w * chi_unit * w.adjoint();
}

void require_same_basis(const ProcessMatrix& a, const ProcessMatrix& b, const char* what) {
  if (!(a.basis() == b.basis())) {
    throw std::invalid_argument(fmt::format("{}: operator basis or dimension mismatch", what));
  }
}

bool chi_is_trace_preserving(const OperatorBasis& basis, const ComplexMatrix& chi) {
  const std::size_t d = basis.dim();
  ComplexMatrix chi_unit = chi;
  if (basis.kind() != BasisKind::kMatrixUnit) {
    const ComplexMatrix w = basis.from_matrix_unit();
    chi_unit = w.adjoint() * chi * w;
  }
  const auto idx = unit_index(basis.shape());
  std::vector<std::size_t> lex(idx.size());
  for (std::size_t n = 0; n < idx.size(); ++n) lex[idx[n]] = n;
  const double target = 1.0 / static_cast<double>(d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t l = 0; l < d; ++l) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += chi_unit(lex[i * d + j], lex[i * d + l]);
      if (std::abs(s - Complex(j == l ? target : 0.0)) > kTracePreservingTol) return false;
    }
  return true;
}

}  // namespace

const char* to_string(BasisKind kind) {
  return kind == BasisKind::kMatrixUnit ? "matrix-unit" : "pauli-like";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "matrix-unit") return BasisKind::kMatrixUnit;
  if (name == "pauli-like") return BasisKind::kPauliLike;
  throw std::invalid_argument(fmt::format("unknown basis kind '{}'", name));
}

OperatorBasis::OperatorBasis(SubsystemShape shape, BasisKind kind) : shape_(std::move(shape)), kind_(kind) {
  if (shape_.count() == 0) throw std::invalid_argument("OperatorBasis: empty shape");
}

ComplexMatrix OperatorBasis::local_element(std::size_t d, BasisKind kind, std::size_t n) {
  if (n >= d * d) throw std::out_of_range("local basis index");
  ComplexMatrix m(d, d);
  if (kind == BasisKind::kMatrixUnit) {
    m(n / d, n % d) = 1.0;
    return m;
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  if (d == 2) {
    const Complex i(0.0, 1.0);
    switch (n) {
      case 0: m = {{1, 0}, {0, 1}}; break;
      case 1: m = {{0, 1}, {1, 0}}; break;
      case 2: m = {{0, -i}, {i, 0}}; break;
      default: m = {{1, 0}, {0, -1}}; break;
    }
    return m * norm;
  }
  // X^a Z^b with X|j> = |j+1>, Z|j> = w^j |j>.
  const std::size_t a = n / d, b = n % d;
  for (std::size_t j = 0; j < d; ++j) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(b * j) / static_cast<double>(d);
    m((j + a) % d, j) = std::polar(norm, phase);
  }
  return m;
}

ComplexMatrix OperatorBasis::element(std::size_t n) const {
  if (n >= size()) throw std::out_of_range("basis index");
  std::vector<std::size_t> digits(shape_.count());
  for (std::size_t k = shape_.count(); k-- > 0;) {
    const std::size_t dd = shape_[k] * shape_[k];
    digits[k] = n % dd;
    n /= dd;
  }
  ComplexMatrix out = local_element(shape_[0], kind_, digits[0]);
  for (std::size_t k = 1; k < shape_.count(); ++k) out = kron(out, local_element(shape_[k], kind_, digits[k]));
  return out;
}

ComplexMatrix OperatorBasis::from_matrix_unit() const {
  ComplexMatrix w = ComplexMatrix::identity(1);
  for (std::size_t k = 0; k < shape_.count(); ++k) {
    const std::size_t d = shape_[k];
    ComplexMatrix local(d * d, d * d);
    for (std::size_t m = 0; m < d * d; ++m) {
      const ComplexMatrix b = local_element(d, kind_, m);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) local(m, i * d + j) = std::conj(b(i, j));
    }
    w = kron(w, local);
  }
  return w;
}

ProcessMatrix::ProcessMatrix(OperatorBasis basis, ComplexMatrix chi, Metadata metadata)
    : basis_(std::move(basis)), chi_(std::move(chi)), metadata_(std::move(metadata)) {
  if (!chi_.is_square() || chi_.rows() != basis_.size()) {
    throw std::invalid_argument(fmt::format("ProcessMatrix: chi is {}x{}, basis needs {}x{}", chi_.rows(),
                                            chi_.cols(), basis_.size(), basis_.size()));
  }
  trace_preserving_ = chi_is_trace_preserving(basis_, chi_);
}

ProcessMatrix ProcessMatrix::in_basis(BasisKind kind) const {
  if (kind == basis_.kind()) return *this;
  OperatorBasis target(basis_.shape(), kind);
  return ProcessMatrix(target, from_matrix_unit_chi(to_matrix_unit_chi(*this), target), metadata_);
}

double ProcessMatrix::min_eigenvalue() const { return hermitian_eigen(chi_).values.front(); }

ProcessMatrix chi_from_kraus(std::span<const ComplexMatrix> kraus, const OperatorBasis& basis) {
  const std::size_t d = basis.dim();
  ComplexMatrix completeness(d, d);
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d) {
      throw std::invalid_argument(fmt::format("chi_from_kraus: Kraus operator {}x{} for dimension {}", k.rows(),
                                              k.cols(), d));
    }
    completeness += k.adjoint() * k;
  }
  if (!kraus.empty() && hermitian_eigen(completeness).values.back() > 1.0 + 1e-10) {
    throw std::invalid_argument("chi_from_kraus: sum K^dagger K exceeds the identity (invalid channel)");
  }
  const auto idx = unit_index(basis.shape());
  ComplexMatrix chi(d * d, d * d);
  std::vector<Complex> v(d * d);
  for (const auto& k : kraus) {
    for (std::size_t n = 0; n < d * d; ++n) v[n] = k.entries()[idx[n]];
    for (std::size_t m = 0; m < d * d; ++m) {
      if (v[m] == Complex(0.0)) continue;
      for (std::size_t n = 0; n < d * d; ++n) chi(m, n) += v[m] * std::conj(v[n]);
    }
  }
  chi *= 1.0 / static_cast<double>(d);
  return ProcessMatrix(basis, from_matrix_unit_chi(chi, basis));
}

ProcessMatrix chi_from_unitary(const ComplexMatrix& u, const OperatorBasis& basis) {
  return chi_from_kraus(std::span<const ComplexMatrix>(&u, 1), basis);
}

ProcessMatrix identity_chi(const OperatorBasis& basis) {
  return chi_from_unitary(ComplexMatrix::identity(basis.dim()), basis);
}

ComplexMatrix to_superoperator(const ProcessMatrix& p) {
  const std::size_t d = p.dim();
  const ComplexMatrix chi = to_matrix_unit_chi(p);
  const auto idx = unit_index(p.basis().shape());
  ComplexMatrix s(d * d, d * d);
  const double scale = static_cast<double>(d);
  for (std::size_t m = 0; m < d * d; ++m) {
    const std::size_t i = idx[m] / d, j = idx[m] % d;
    for (std::size_t n = 0; n < d * d; ++n) {
      const std::size_t k = idx[n] / d, l = idx[n] % d;
      s(i * d + k, j * d + l) = scale * chi(m, n);
    }
  }
  return s;
}

ProcessMatrix from_superoperator(const ComplexMatrix& s, const OperatorBasis& basis) {
  const std::size_t d = basis.dim();
  if (!s.is_square() || s.rows() != d * d) throw std::invalid_argument("from_superoperator: dimension mismatch");
  const auto idx = unit_index(basis.shape());
  ComplexMatrix chi(d * d, d * d);
  const double scale = 1.0 / static_cast<double>(d);
  for (std::size_t m = 0; m < d * d; ++m) {
    const std::size_t i = idx[m] / d, j = idx[m] % d;
    for (std::size_t n = 0; n < d * d; ++n) {
      const std::size_t k = idx[n] / d, l = idx[n] % d;
      chi(m, n) = scale * s(i * d + k, j * d + l);
    }
  }
  return ProcessMatrix(basis, from_matrix_unit_chi(chi, basis));
}

ProcessMatrix serial_concat(const ProcessMatrix& first, const ProcessMatrix& second) {
  require_same_basis(first, second, "serial_concat");
  return from_superoperator(to_superoperator(second) * to_superoperator(first), first.basis());
}

StructureConstants::StructureConstants(const OperatorBasis& basis) : basis_(basis), size_(basis.size()) {
  const auto& shape = basis.shape();
  const std::size_t nsub = shape.count();
  // Local tables: local[k][p * dd + m] -> list of (r, c).
  std::vector<std::vector<std::vector<Term>>> local(nsub);
  for (std::size_t k = 0; k < nsub; ++k) {
    const std::size_t d = shape[k], dd = d * d;
    std::vector<ComplexMatrix> el;
    for (std::size_t n = 0; n < dd; ++n) el.push_back(OperatorBasis::local_element(d, basis.kind(), n));
    local[k].resize(dd * dd);
    for (std::size_t p = 0; p < dd; ++p)
      for (std::size_t m = 0; m < dd; ++m) {
        const ComplexMatrix prod = el[p] * el[m];
        for (std::size_t r = 0; r < dd; ++r) {
          Complex c = 0.0;
          for (std::size_t e = 0; e < prod.size(); ++e) c += std::conj(el[r].entries()[e]) * prod.entries()[e];
          if (std::abs(c) > 1e-14) local[k][p * dd + m].push_back({r, c});
        }
      }
  }
  offsets_.assign(size_ * size_ + 1, 0);
  std::vector<std::size_t> pd(nsub), md(nsub);
  for (std::size_t p = 0; p < size_; ++p) {
    for (std::size_t m = 0; m < size_; ++m) {
      std::size_t pp = p, mm = m;
      for (std::size_t k = nsub; k-- > 0;) {
        const std::size_t dd = shape[k] * shape[k];
        pd[k] = pp % dd;
        md[k] = mm % dd;
        pp /= dd;
        mm /= dd;
      }
      std::vector<Term> acc{{0, 1.0}};
      for (std::size_t k = 0; k < nsub; ++k) {
        const std::size_t dd = shape[k] * shape[k];
        std::vector<Term> next;
        for (const auto& a : acc)
          for (const auto& b : local[k][pd[k] * dd + md[k]]) next.push_back({a.r * dd + b.r, a.coefficient * b.coefficient});
        acc = std::move(next);
      }
      terms_.insert(terms_.end(), acc.begin(), acc.end());
      offsets_[p * size_ + m + 1] = terms_.size();
    }
  }
}

std::span<const StructureConstants::Term> StructureConstants::terms(std::size_t p, std::size_t m) const {
  const std::size_t key = p * size_ + m;
  return std::span<const Term>(terms_).subspan(offsets_[key], offsets_[key + 1] - offsets_[key]);
}

StructureConstants structure_constants(const OperatorBasis& basis) { return StructureConstants(basis); }

ProcessMatrix serial_concat_structure(const ProcessMatrix& first, const ProcessMatrix& second,
                                      const StructureConstants& constants) {
  require_same_basis(first, second, "serial_concat_structure");
  if (!(constants.basis() == first.basis())) {
    throw std::invalid_argument("serial_concat_structure: structure constants for another basis");
  }
  const std::size_t n2 = first.basis().size();
  const ComplexMatrix& c1 = first.chi();
  const ComplexMatrix& c2 = second.chi();
  ComplexMatrix out(n2, n2);
  const double scale = static_cast<double>(first.dim());
  for (std::size_t p = 0; p < n2; ++p)
    for (std::size_t m = 0; m < n2; ++m)
      for (const auto& left : constants.terms(p, m))
        for (std::size_t q = 0; q < n2; ++q) {
          const Complex chi2 = c2(p, q);
          if (chi2 == Complex(0.0)) continue;
          for (std::size_t n = 0; n < n2; ++n) {
            const Complex chi1 = c1(m, n);
            if (chi1 == Complex(0.0)) continue;
            for (const auto& right : constants.terms(q, n))
              out(left.r, right.r) += scale * left.coefficient * chi1 * chi2 * std::conj(right.coefficient);
          }
        }
  return ProcessMatrix(first.basis(), std::move(out));
}

ProcessMatrix parallel_concat(const ProcessMatrix& a, const ProcessMatrix& b) {
  if (a.basis().kind() != b.basis().kind()) throw std::invalid_argument("parallel_concat: basis kind mismatch");
  OperatorBasis basis(a.basis().shape().concat(b.basis().shape()), a.basis().kind());
  return ProcessMatrix(std::move(basis), kron(a.chi(), b.chi()));
}

ProcessMatrix permute_process(const ProcessMatrix& p, std::span<const std::size_t> perm) {
  const SubsystemShape& shape = p.basis().shape();
  ComplexMatrix chi = permute_subsystems(p.chi(), shape.squared(), perm);
  return ProcessMatrix(OperatorBasis(shape.permuted(perm), p.basis().kind()), std::move(chi), p.metadata());
}

ProcessMatrix parallel_concat(const ProcessMatrix& a, std::span<const std::size_t> wires_a, const ProcessMatrix& b,
                              std::span<const std::size_t> wires_b) {
  if (wires_a.size() != a.basis().shape().count() || wires_b.size() != b.basis().shape().count()) {
    throw std::invalid_argument("parallel_concat: wire list does not match subsystem count");
  }
  std::vector<std::size_t> combined(wires_a.begin(), wires_a.end());
  combined.insert(combined.end(), wires_b.begin(), wires_b.end());
  std::vector<std::size_t> sorted = combined;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("parallel_concat: overlapping subsystem sets");
  }
  std::vector<std::size_t> perm(combined.size());
  for (std::size_t k = 0; k < combined.size(); ++k) {
    perm[k] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), combined[k]) - sorted.begin());
  }
  return permute_process(parallel_concat(a, b), perm);
}

ProcessMatrix embed(const ProcessMatrix& small, const SubsystemShape& reg, std::span<const std::size_t> positions) {
  const SubsystemShape& sshape = small.basis().shape();
  if (positions.size() != sshape.count()) throw std::invalid_argument("embed: position count mismatch");
  std::vector<bool> used(reg.count(), false);
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const std::size_t pos = positions[k];
    if (pos >= reg.count()) throw std::invalid_argument(fmt::format("embed: position {} outside register", pos));
    if (used[pos]) throw std::invalid_argument(fmt::format("embed: position {} used twice", pos));
    if (reg[pos] != sshape[k]) {
      throw std::invalid_argument(fmt::format("embed: local dimension {} at position {} (register has {})", sshape[k],
                                              pos, reg[pos]));
    }
    used[pos] = true;
  }
  std::vector<std::size_t> rest, rest_dims;
  for (std::size_t w = 0; w < reg.count(); ++w)
    if (!used[w]) {
      rest.push_back(w);
      rest_dims.push_back(reg[w]);
    }
  if (rest.empty()) {
    std::vector<std::size_t> perm(positions.begin(), positions.end());
    return permute_process(small, perm);
  }
  const ProcessMatrix idle = identity_chi(OperatorBasis(SubsystemShape(rest_dims), small.basis().kind()));
  return parallel_concat(small, positions, idle, rest);
}

double trace_distance(const ProcessMatrix& a, const ProcessMatrix& b) {
  require_same_basis(a, b, "trace_distance");
  return 0.5 * trace_norm(a.chi() - b.chi());
}

ComplexMatrix to_choi(const ProcessMatrix& p) {
  const ComplexMatrix chi = to_matrix_unit_chi(p);
  const auto idx = unit_index(p.basis().shape());
  ComplexMatrix j(chi.rows(), chi.cols());
  for (std::size_t m = 0; m < chi.rows(); ++m)
    for (std::size_t n = 0; n < chi.cols(); ++n) j(idx[m], idx[n]) = chi(m, n);
  return j;
}

ProcessMatrix from_choi(const ComplexMatrix& choi, const OperatorBasis& basis) {
  if (!choi.is_square()) throw std::invalid_argument("from_choi: non-square Choi matrix");
  if (choi.rows() != basis.size()) {
    throw std::invalid_argument(fmt::format("from_choi: {}x{} Choi matrix for basis of size {}", choi.rows(),
                                            choi.cols(), basis.size()));
  }
  const auto idx = unit_index(basis.shape());
  ComplexMatrix chi(choi.rows(), choi.cols());
  for (std::size_t m = 0; m < chi.rows(); ++m)
    for (std::size_t n = 0; n < chi.cols(); ++n) chi(m, n) = choi(idx[m], idx[n]);
  return ProcessMatrix(basis, from_matrix_unit_chi(chi, basis));
}

QubitProjection project_to_qubit_subspace(const ProcessMatrix& p) {
  const SubsystemShape& shape = p.basis().shape();
  const std::size_t nsub = shape.count();
  const ComplexMatrix chi = to_matrix_unit_chi(p);
  // Old operator-space strides.
  std::vector<std::size_t> stride(nsub);
  std::size_t s = 1;
  double scale = 1.0;
  for (std::size_t k = nsub; k-- > 0;) {
    stride[k] = s;
    s *= shape[k] * shape[k];
    scale *= static_cast<double>(shape[k]) / 2.0;
  }
  const std::size_t n_new = std::size_t{1} << (2 * nsub);
  std::vector<std::size_t> source(n_new);
  for (std::size_t n = 0; n < n_new; ++n) {
    std::size_t old = 0;
    for (std::size_t k = 0; k < nsub; ++k) {
      const std::size_t local = (n >> (2 * (nsub - 1 - k))) & 3U;
      const std::size_t i = local >> 1U, j = local & 1U;
      old += (i * shape[k] + j) * stride[k];
    }
    source[n] = old;
  }
  ComplexMatrix out(n_new, n_new);
  for (std::size_t m = 0; m < n_new; ++m)
    for (std::size_t n = 0; n < n_new; ++n) out(m, n) = scale * chi(source[m], source[n]);
  OperatorBasis basis(SubsystemShape::uniform(nsub, 2), p.basis().kind());
  ProcessMatrix projected(basis, from_matrix_unit_chi(out, basis), p.metadata());
  const double leakage = 1.0 - projected.trace();
  return {std::move(projected), leakage};
}

}  // namespace chicat

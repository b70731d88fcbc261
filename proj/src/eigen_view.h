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

#ifndef CHICAT_SRC_EIGEN_VIEW_H_
#define CHICAT_SRC_EIGEN_VIEW_H_

#include <Eigen/Dense>

#include "chicat/tensor.h"

namespace chicat::detail {

using RowMajorXcd = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapXcd = Eigen::Map<RowMajorXcd>;
using ConstMapXcd = Eigen::Map<const RowMajorXcd>;

inline ConstMapXcd view(const ComplexMatrix& m) {
  return ConstMapXcd(m.data(), static_cast<Eigen::Index>(m.rows()),
                     static_cast<Eigen::Index>(m.cols()));
}

inline MapXcd view(ComplexMatrix& m) {
  return MapXcd(m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}

template <typename Derived>
ComplexMatrix from_eigen(const Eigen::MatrixBase<Derived>& e) {
  ComplexMatrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  view(out) = e;
  return out;
}

}  // namespace chicat::detail

#endif  // CHICAT_SRC_EIGEN_VIEW_H_

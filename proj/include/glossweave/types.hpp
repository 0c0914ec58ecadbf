// Copyright 2026 The GlossWeave Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace glossweave {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Token = std::string;
using TokenSeq = std::vector<Token>;
using IdSeq = std::vector<int>;

// T x D frame features. Stored as float32 to match the on-disk format.
using FeatureMatrix = RowMatrix<float>;

// T x K, rows on the probability simplex.
template <typename Scalar>
using ProbMatrix = RowMatrix<Scalar>;

template <typename Derived>
bool rows_on_simplex(const Eigen::MatrixBase<Derived>& p, double tol = 1e-6) {
  if ((p.array() < 0).any()) return false;
  for (Eigen::Index t = 0; t < p.rows(); ++t) {
    if (std::abs(static_cast<double>(p.row(t).sum()) - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace glossweave

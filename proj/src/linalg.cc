// Copyright 2026 The Clausesum Authors.
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


#include "clausesum/linalg.h"

#include <Eigen/SVD>

namespace clausesum::linalg {

Svd ThinSvd(const Eigen::MatrixXd& a) {
  Svd out;
  if (a.size() == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  out.singular_values = svd.singularValues();
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  for (Eigen::Index k = 0; k < out.v.cols(); ++k) {
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < out.v.rows(); ++i) {
      if (std::abs(out.v(i, k)) > std::abs(out.v(pivot, k))) pivot = i;
    }
    if (out.v(pivot, k) < 0.0) {
      out.v.col(k) *= -1.0;
      out.u.col(k) *= -1.0;
    }
  }
  return out;
}

}  // namespace clausesum::linalg

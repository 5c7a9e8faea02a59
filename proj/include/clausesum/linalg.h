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


// Thin singular value decomposition with a fixed sign convention, so that the
// factors are reproducible across runs and platforms.

#ifndef CLAUSESUM_LINALG_H_
#define CLAUSESUM_LINALG_H_

#include <Eigen/Dense>

namespace clausesum::linalg {

struct Svd {
  Eigen::VectorXd singular_values;  // descending
  Eigen::MatrixXd u;                // rows(a) x r
  Eigen::MatrixXd v;                // cols(a) x r
};

// a = u * diag(singular_values) * v^T with r = min(rows, cols). Each column
// of v has its largest-magnitude component made positive (the first such
// component on exact ties), and the matching column of u is flipped with it.
Svd ThinSvd(const Eigen::MatrixXd& a);

}  // namespace clausesum::linalg

#endif  // CLAUSESUM_LINALG_H_

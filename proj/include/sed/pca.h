// include/sed/pca.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SED_PCA_H_
#define SED_PCA_H_

#include "sed/types.h"

namespace sed {

struct PcaModel {
  Vector mean;
  Matrix components;          // n_components x input_dim, orthonormal rows
  Vector explained_variance;  // non-increasing, >= 0
  // Set when the data had fewer nonzero eigenvalues than components; the
  // trailing rows are then an arbitrary orthonormal completion.
  bool padded = false;

  Index input_dim() const { return components.cols(); }
  Index n_components() const { return components.rows(); }

  Vector project(const Vector& x) const;
  Matrix project(const Matrix& rows) const;
};

// Top eigenvectors of the sample covariance of mean-centered data.
// Deterministic sign convention: the largest-magnitude entry of each
// component is positive.
PcaModel fit_pca(const Matrix& data, int n_components = 16);

}  // namespace sed

#endif  // SED_PCA_H_

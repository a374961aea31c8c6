// src/pca.cc

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

#include "sed/pca.h"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sed/errors.h"

namespace sed {

Vector PcaModel::project(const Vector& x) const {
  if (x.size() != input_dim()) throw DataError("pca: dimension mismatch");
  return components * (x - mean);
}

Matrix PcaModel::project(const Matrix& rows) const {
  if (rows.cols() != input_dim()) throw DataError("pca: dimension mismatch");
  return (rows.rowwise() - mean.transpose()) * components.transpose();
}

PcaModel fit_pca(const Matrix& data, int n_components) {
  const Index n = data.rows();
  const Index dim = data.cols();
  if (n_components < 1 || n_components > dim)
    throw DataError("fit_pca: invalid component count");
  if (n < n_components)
    throw DataError("fit_pca: fewer rows than components");

  PcaModel model;
  model.mean = data.colwise().mean();
  const Matrix centered = data.rowwise() - model.mean.transpose();
  const Matrix cov = centered.transpose() * centered /
                     static_cast<double>(std::max<Index>(1, n - 1));

  // The eigendecomposition of a rank-deficient covariance already returns
  // an orthonormal completion for the null space, so padding needs no
  // extra work beyond flagging it.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  if (solver.info() != Eigen::Success)
    throw NumericalError("fit_pca: eigendecomposition failed");

  // Eigen returns ascending eigenvalues; take the top ones in reverse.
  model.components.resize(n_components, dim);
  model.explained_variance.resize(n_components);
  for (int i = 0; i < n_components; ++i) {
    const Index src = dim - 1 - i;
    model.explained_variance(i) = std::max(0.0, solver.eigenvalues()(src));
    model.components.row(i) = solver.eigenvectors().col(src).transpose();
  }

  // Sign convention for determinism.
  for (int i = 0; i < n_components; ++i) {
    Index which = 0;
    model.components.row(i).cwiseAbs().maxCoeff(&which);
    if (model.components(i, which) < 0.0) model.components.row(i) *= -1.0;
  }

  const double scale = std::max(1.0, model.explained_variance(0));
  model.padded = model.explained_variance(n_components - 1) <= 1e-12 * scale;
  return model;
}

}  // namespace sed

// tests/test_pca.cc

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

#include <cmath>

#include "doctest.h"
#include "sed/errors.h"
#include "sed/pca.h"
#include "sed/rng.h"

using namespace sed;

TEST_SUITE("pca") {

TEST_CASE("data in a 2-D subspace is reconstructed exactly") {
  Rng rng(101);
  Vector u(5), w(5), offset(5);
  for (Index j = 0; j < 5; ++j) {
    u(j) = rng.normal();
    w(j) = rng.normal();
    offset(j) = rng.normal();
  }
  Matrix data(50, 5);
  for (Index r = 0; r < 50; ++r)
    data.row(r) =
        (offset + rng.normal() * u + rng.normal() * w).transpose();

  const PcaModel model = fit_pca(data, 2);
  const Matrix projected = model.project(data);
  const Matrix reconstructed =
      (projected * model.components).rowwise() + model.mean.transpose();
  CHECK((reconstructed - data).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("isotropic data has near-equal explained variances") {
  Rng rng(102);
  Matrix data(10000, 4);
  for (Index r = 0; r < data.rows(); ++r)
    for (Index c = 0; c < 4; ++c) data(r, c) = rng.normal();
  const PcaModel model = fit_pca(data, 4);
  const double hi = model.explained_variance(0);
  const double lo = model.explained_variance(3);
  CHECK(hi / lo < 1.1);
}

TEST_CASE("axis-aligned data recovers the dominant axis") {
  // All eight sign patterns of (3, 1, 0.1): exactly diagonal covariance.
  Matrix data(8, 3);
  int row = 0;
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1})
      for (int s3 : {-1, 1}) {
        data(row, 0) = 3.0 * s1;
        data(row, 1) = 1.0 * s2;
        data(row, 2) = 0.1 * s3;
        ++row;
      }
  const PcaModel model = fit_pca(data, 3);
  const double cosine = std::fabs(model.components(0, 0));
  CHECK(std::acos(std::min(1.0, cosine)) < 1e-3);
  // variances in descending order
  CHECK(model.explained_variance(0) >= model.explained_variance(1));
  CHECK(model.explained_variance(1) >= model.explained_variance(2));
}

TEST_CASE("components are orthonormal and sign-normalized") {
  Rng rng(103);
  Matrix data(300, 6);
  for (Index r = 0; r < data.rows(); ++r)
    for (Index c = 0; c < 6; ++c)
      data(r, c) = rng.normal() * static_cast<double>(c + 1);
  const PcaModel model = fit_pca(data, 4);

  const Matrix gram = model.components * model.components.transpose();
  CHECK((gram - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);

  for (Index i = 0; i < 4; ++i) {
    Index which = 0;
    model.components.row(i).cwiseAbs().maxCoeff(&which);
    CHECK(model.components(i, which) > 0.0);
  }
}

TEST_CASE("projecting the mean gives zero") {
  Rng rng(104);
  Matrix data(100, 5);
  for (Index r = 0; r < data.rows(); ++r)
    for (Index c = 0; c < 5; ++c) data(r, c) = rng.normal(3.0, 2.0);
  const PcaModel model = fit_pca(data, 3);
  CHECK(model.project(model.mean).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rank-deficient data is padded and flagged") {
  Rng rng(105);
  Matrix data(40, 4);
  Vector u(4);
  for (Index j = 0; j < 4; ++j) u(j) = rng.normal();
  for (Index r = 0; r < 40; ++r) data.row(r) = (rng.normal() * u).transpose();

  const PcaModel model = fit_pca(data, 3);
  CHECK(model.padded);
  CHECK(model.explained_variance(1) <= 1e-10 * model.explained_variance(0));
  const Matrix gram = model.components * model.components.transpose();
  CHECK((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);

  Matrix full_rank(40, 4);
  for (Index r = 0; r < 40; ++r)
    for (Index c = 0; c < 4; ++c) full_rank(r, c) = rng.normal();
  CHECK_FALSE(fit_pca(full_rank, 3).padded);
}

TEST_CASE("invalid shapes are rejected") {
  CHECK_THROWS_AS(fit_pca(Matrix::Zero(3, 4), 16), DataError);  // rows < comps
  CHECK_THROWS_AS(fit_pca(Matrix::Zero(30, 4), 5), DataError);  // comps > dim
  CHECK_THROWS_AS(fit_pca(Matrix::Zero(30, 4), 0), DataError);
}

}  // TEST_SUITE

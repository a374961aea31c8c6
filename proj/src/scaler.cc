// src/scaler.cc

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

#include "sed/scaler.h"

#include <cmath>

#include "sed/errors.h"

namespace sed {

Scaler Scaler::fit(const Matrix& data) {
  if (data.rows() == 0) throw DataError("standardize: empty input");
  Scaler s;
  s.mean = data.colwise().mean();
  const Matrix centered = data.rowwise() - s.mean.transpose();
  Vector var = centered.array().square().colwise().mean();
  s.std = var.array().sqrt().max(kStdFloor);
  return s;
}

Matrix Scaler::apply(const Matrix& rows) const {
  if (rows.cols() != mean.size())
    throw DataError("standardize: dimension mismatch");
  Matrix out = rows.rowwise() - mean.transpose();
  out.array().rowwise() /= std.transpose().array();
  return out;
}

Vector Scaler::apply(const Vector& v) const {
  if (v.size() != mean.size())
    throw DataError("standardize: dimension mismatch");
  return (v - mean).cwiseQuotient(std);
}

}  // namespace sed

// include/sed/scaler.h

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

#ifndef SED_SCALER_H_
#define SED_SCALER_H_

#include "sed/types.h"

namespace sed {

// Per-column standardization to zero mean / unit variance. Gaussian
// visible units assume standardized inputs, so every generative model
// carries the scaler fitted on its training data.
struct Scaler {
  Vector mean;
  Vector std;  // population std, floored at kStdFloor

  static constexpr double kStdFloor = 1e-6;

  // Column-wise mean and population standard deviation.
  static Scaler fit(const Matrix& data);

  Matrix apply(const Matrix& rows) const;
  Vector apply(const Vector& v) const;

  Index dim() const { return mean.size(); }
};

}  // namespace sed

#endif  // SED_SCALER_H_

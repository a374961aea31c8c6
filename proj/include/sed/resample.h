// include/sed/resample.h

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

#ifndef SED_RESAMPLE_H_
#define SED_RESAMPLE_H_

#include "sed/types.h"

namespace sed {

// Rational-ratio resampling with a linear-phase polyphase FIR
// (windowed sinc, per-phase DC normalization). Same-rate input is
// returned unchanged.
Waveform resample(const Waveform& in, int target_rate);

}  // namespace sed

#endif  // SED_RESAMPLE_H_

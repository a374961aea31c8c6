// src/resample.cc

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

#include "sed/resample.h"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sed/errors.h"

namespace sed {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Blackman window on [-1, 1].
double blackman(double x) {
  return 0.42 + 0.5 * std::cos(M_PI * x) + 0.08 * std::cos(2.0 * M_PI * x);
}

}  // namespace

Waveform resample(const Waveform& in, int target_rate) {
  if (in.sample_rate <= 0 || target_rate <= 0)
    throw DataError("resample: invalid sample rate");
  if (in.sample_rate == target_rate) return in;
  if (in.samples.empty()) throw DataError("resample: empty waveform");

  const int g = std::gcd(in.sample_rate, target_rate);
  const int64_t up = target_rate / g;    // interpolation factor L
  const int64_t down = in.sample_rate / g;  // decimation factor M

  // Anti-alias / anti-image lowpass on the upsampled grid, cutoff at the
  // tighter of the two Nyquist limits. 16 zero crossings per side.
  const double cutoff = 1.0 / static_cast<double>(std::max(up, down));
  const int64_t half = 16 * std::max(up, down);
  std::vector<double> kernel(2 * half + 1);
  for (int64_t i = -half; i <= half; ++i) {
    kernel[i + half] =
        cutoff * sinc(cutoff * static_cast<double>(i)) *
        blackman(static_cast<double>(i) / static_cast<double>(half));
  }

  // Per-phase DC normalization removes the amplitude ripple of the raw
  // windowed sinc across polyphase branches.
  std::vector<double> phase_sum(up, 0.0);
  for (int64_t i = -half; i <= half; ++i) {
    const int64_t r = ((i % up) + up) % up;
    phase_sum[r] += kernel[i + half];
  }

  const int64_t n_in = static_cast<int64_t>(in.samples.size());
  const int64_t n_out = (n_in * up + down - 1) / down;

  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(n_out);

  for (int64_t n = 0; n < n_out; ++n) {
    const int64_t center = n * down;  // position on the upsampled grid
    const int64_t j_lo = (center - half + up - 1) / up;
    const int64_t j_hi = (center + half) / up;
    double acc = 0.0;
    for (int64_t j = std::max<int64_t>(0, j_lo);
         j <= std::min(n_in - 1, j_hi); ++j) {
      acc += in.samples[j] * kernel[center - j * up + half];
    }
    const int64_t r = center % up;
    out.samples[n] = phase_sum[r] != 0.0 ? acc / phase_sum[r] : acc;
  }
  return out;
}

}  // namespace sed

// tests/test_util.h

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

#ifndef SED_TESTS_TEST_UTIL_H_
#define SED_TESTS_TEST_UTIL_H_

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sed/types.h"

namespace sed_test {

// Fresh scratch directory per test, removed and recreated on entry.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("sed_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline std::vector<char> read_bytes(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(file),
          std::istreambuf_iterator<char>()};
}

inline bool same_bytes(const std::string& a, const std::string& b) {
  return read_bytes(a) == read_bytes(b);
}

inline std::string read_text(const std::string& path) {
  std::ifstream file(path);
  return {std::istreambuf_iterator<char>(file),
          std::istreambuf_iterator<char>()};
}

inline sed::Waveform silence(double seconds, int rate = 16000) {
  sed::Waveform w;
  w.sample_rate = rate;
  w.samples.assign(static_cast<size_t>(std::lround(seconds * rate)), 0.0);
  return w;
}

inline sed::Waveform sine(double seconds, double hz, double amplitude,
                          int rate = 16000) {
  sed::Waveform w;
  w.sample_rate = rate;
  const size_t n = static_cast<size_t>(std::lround(seconds * rate));
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i)
    w.samples[i] =
        amplitude * std::sin(2.0 * M_PI * hz * static_cast<double>(i) / rate);
  return w;
}

// Tone burst with a sharp attack and a release tail, in silence.
inline sed::Waveform tone_burst(double total_s, double start_s, double end_s,
                                double hz, double amplitude,
                                double ramp_s = 0.005, int rate = 16000) {
  sed::Waveform w = silence(total_s, rate);
  const size_t lo = static_cast<size_t>(std::lround(start_s * rate));
  const size_t hi = static_cast<size_t>(std::lround(end_s * rate));
  const double ramp = ramp_s * rate;
  for (size_t i = lo; i < hi && i < w.samples.size(); ++i) {
    const double t = static_cast<double>(i) / rate;
    double env = 1.0;
    const double in = static_cast<double>(i - lo);
    const double out = static_cast<double>(hi - i);
    if (in < ramp) env = in / ramp;
    if (out < ramp) env = std::min(env, out / ramp);
    w.samples[i] = amplitude * env * std::sin(2.0 * M_PI * hz * t);
  }
  return w;
}

}  // namespace sed_test

#endif  // SED_TESTS_TEST_UTIL_H_

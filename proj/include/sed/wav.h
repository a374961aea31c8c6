// include/sed/wav.h

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

#ifndef SED_WAV_H_
#define SED_WAV_H_

#include <string>

#include "sed/types.h"

namespace sed {

// Reads a RIFF WAV file (PCM 16-bit int or IEEE 32-bit float).
// Multi-channel input is downmixed by averaging; int samples are scaled
// by 1/32768 and the result is clamped to [-1, 1].
Waveform read_wav(const std::string& path);

// Writes mono 16-bit PCM.
void write_wav_pcm16(const std::string& path, const Waveform& w);

}  // namespace sed

#endif  // SED_WAV_H_

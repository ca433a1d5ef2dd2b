// Copyright 2026 The Loudcomp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOUDCOMP_WAV_HPP
#define LOUDCOMP_WAV_HPP

#include <cstddef>
#include <string>

#include "loudcomp/waveform.hpp"

namespace loudcomp {

// Reads a mono RIFF/WAVE file (16-bit PCM or 32-bit IEEE float) into
// samples normalized to [-1, 1]. Multichannel and other codecs are rejected
// with guidance.
Waveform read_wav(const std::string& path);

enum class WritePolicy {
  kFloat,          // 32-bit float, samples written untouched
  kClipAndCount,   // 16-bit PCM, out-of-range samples clamped and counted
  kPeakNormalize,  // 16-bit PCM, rescaled so the peak hits full scale
};

struct WriteResult {
  std::size_t clipped_samples = 0;
  double peak = 0.0;  // largest |sample| before any rescaling
};

WriteResult write_wav(const std::string& path, const Waveform& signal,
                      WritePolicy policy = WritePolicy::kFloat);

}  // namespace loudcomp

#endif  // LOUDCOMP_WAV_HPP

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

#ifndef LOUDCOMP_STOI_HPP
#define LOUDCOMP_STOI_HPP

#include <cstddef>
#include <vector>

#include "loudcomp/waveform.hpp"

namespace loudcomp {

// Windowed-sinc polyphase resampler. Identity when the rates are equal;
// passband ripple < 0.1 dB below 0.45 * min(from, to); output length is
// input length * to / from rounded down.
Waveform resample(const Waveform& signal, double to_hz);

struct StoiScore {
  double value = 0.0;  // mean of the band-segment correlations
  std::size_t bands = 0;
  std::size_t segments = 0;
  // correlations[band * segments + segment]; entries skipped because the
  // clean band-segment had zero variance hold NaN and do not enter the mean.
  std::vector<double> correlations;
};

// Short-time objective intelligibility of `degraded` against `clean`:
// both resampled to 10 kHz, silent frames (>= 40 dB below the clean peak
// frame energy) removed from both, 256-sample half-overlapped frames
// zero-padded to 512-point spectra, 15 one-third-octave bands from 150 Hz,
// 30-frame segments with the degraded envelope normalized and clipped at
// -15 dB SDR, scored as the mean correlation. Requires equal lengths,
// a sample rate >= 10 kHz, and enough non-silent audio for one segment.
StoiScore stoi(const Waveform& clean, const Waveform& degraded);

}  // namespace loudcomp

#endif  // LOUDCOMP_STOI_HPP

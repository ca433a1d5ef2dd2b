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

#ifndef LOUDCOMP_WAVEFORM_HPP
#define LOUDCOMP_WAVEFORM_HPP

#include <vector>

namespace loudcomp {

// Mono audio buffer. Samples are nominally in [-1, 1]; 1.0 is digital full
// scale and maps to a configurable SPL (see ProcessorConfig::full_scale_spl).
struct Waveform {
  std::vector<double> samples;
  double sample_rate = 22050.0;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

}  // namespace loudcomp

#endif  // LOUDCOMP_WAVEFORM_HPP

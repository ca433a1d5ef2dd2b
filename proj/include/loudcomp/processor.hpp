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

#ifndef LOUDCOMP_PROCESSOR_HPP
#define LOUDCOMP_PROCESSOR_HPP

#include <cstddef>

#include "loudcomp/gain_table.hpp"
#include "loudcomp/waveform.hpp"

namespace loudcomp {

enum class AnalysisWindow { kRaisedCosine, kRectangular };

// Hop-1 short-time processing configuration. The center-sample resynthesis
// relies on the analysis window being exactly 1 at center_index.
struct ProcessorConfig {
  std::size_t window_length = 1024;  // power of two
  std::size_t hop = 1;               // fixed at 1
  std::size_t center_index = 512;    // window_length / 2
  AnalysisWindow window = AnalysisWindow::kRaisedCosine;
  double full_scale_spl = 100.0;
  std::size_t resync_interval = 4096;  // optimized path only, >= 1

  void validate() const;
};

// Calibration constant added to 10*log10 of windowed one-sided power sums
// so a full-scale sine reads full_scale_spl dB at its own frequency.
double calibration_offset(const ProcessorConfig& cfg);

// Reference implementation: for every output sample, window the frame
// centered on it (zero-padded at the edges), transform, measure per-bin
// auditory-filter levels, look up and apply per-bin linear gains, and emit
// the centered inverse-transform sample. Output length equals input length;
// samples stay floating point and may exceed [-1, 1].
Waveform process(const Waveform& input, const GainTable& table,
                 const ProcessorConfig& cfg);

// Same output contract as process() (relative RMS difference < 1e-5), via a
// rectangular sliding DFT updated in O(N) per sample; the raised-cosine
// spectrum is derived by circular convolution with taps (-0.25, 0.5, -0.25)
// and an exact transform is recomputed every resync_interval samples to
// bound floating-point drift.
Waveform process_sliding(const Waveform& input, const GainTable& table,
                         const ProcessorConfig& cfg);

}  // namespace loudcomp

#endif  // LOUDCOMP_PROCESSOR_HPP

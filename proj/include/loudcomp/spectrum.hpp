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

#ifndef LOUDCOMP_SPECTRUM_HPP
#define LOUDCOMP_SPECTRUM_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace loudcomp {

// Levels below this are reported as silence.
inline constexpr double kSilenceFloorDb = -200.0;

// Short-time spectrum of one analysis frame plus the calibration that maps
// digital power sums to dB SPL.
struct FrameSpectrum {
  std::vector<std::complex<double>> bins;  // full DFT, conjugate-symmetric
  double sample_rate = 0.0;
  double calibration_offset = 0.0;  // dB
};

// Periodic raised-cosine analysis window w[n] = 0.5 - 0.5*cos(2*pi*n/N).
// w[N/2] is exactly 1, which makes hop-1 center-sample resynthesis exact.
std::vector<double> raised_cosine_window(std::size_t length);

// Offset such that a full-scale sine (amplitude 1) reads full_scale_spl dB
// when its in-band one-sided windowed power is summed:
//   offset = full_scale_spl - 10*log10(N * sum(w^2) / 2).
double calibration_offset(std::span<const double> window, double full_scale_spl);

// Windows the frame, takes its DFT, and attaches the calibration.
// The frame and window must have equal power-of-two lengths.
FrameSpectrum frame_spectrum(std::span<const double> frame,
                             std::span<const double> window,
                             double sample_rate, double full_scale_spl);

// Level of the auditory filter centered at each non-negative bin k
// (k = 0..N/2, center k*sample_rate/N): the one-sided windowed power summed
// over bins within half an ERB of the center, in dB SPL. Bins with centers
// below 50 Hz use the 50 Hz bandwidth; silent bands report kSilenceFloorDb.
std::vector<double> auditory_filter_levels(const FrameSpectrum& spectrum);

// Precomputed one-sided bin ranges [lo[k], hi[k]] of each auditory filter,
// for repeated level computation over frames of a fixed geometry.
struct FilterBank {
  std::vector<std::size_t> lo;
  std::vector<std::size_t> hi;  // inclusive
};
FilterBank make_filter_bank(std::size_t window_length, double sample_rate);

// Welch-averaged one-sided mean-square spectrum (bins 0..window_length/2,
// spacing sample_rate/window_length, raised-cosine window, half-overlap).
// Normalized so the bins sum to the mean squared sample value; a band
// reading P corresponds to full_scale_spl + 10*log10(P/0.5) dB SPL.
// Requires samples.size() >= window_length (power of two).
std::vector<double> welch_power_spectrum(std::span<const double> samples,
                                         std::size_t window_length);

// Sum of mean-square bins within half an ERB of center_hz; power[j] is the
// bin at frequency j*bin_hz.
double erb_band_power(std::span<const double> power, double bin_hz,
                      double center_hz);

}  // namespace loudcomp

#endif  // LOUDCOMP_SPECTRUM_HPP

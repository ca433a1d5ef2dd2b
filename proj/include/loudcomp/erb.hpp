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

#ifndef LOUDCOMP_ERB_HPP
#define LOUDCOMP_ERB_HPP

#include <cmath>

#include "loudcomp/errors.hpp"

namespace loudcomp {

// ERB-number scale (unit: Cam). erb_number(1000) = 15.62.
inline double erb_number(double frequency_hz) {
  if (frequency_hz < 0.0) {
    throw ValidationError("erb_number: frequency must be non-negative");
  }
  return 21.4 * std::log10(0.00437 * frequency_hz + 1.0);
}

// Equivalent rectangular bandwidth in Hz of the auditory filter centered at
// frequency_hz. erb_bandwidth(1000) = 132.6 Hz.
inline double erb_bandwidth(double frequency_hz) {
  if (frequency_hz < 0.0) {
    throw ValidationError("erb_bandwidth: frequency must be non-negative");
  }
  return 24.7 * (4.37 * frequency_hz / 1000.0 + 1.0);
}

// Inverse of erb_number.
inline double erb_to_frequency(double cam) {
  return (std::pow(10.0, cam / 21.4) - 1.0) / 0.00437;
}

}  // namespace loudcomp

#endif  // LOUDCOMP_ERB_HPP

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

#ifndef LOUDCOMP_GAIN_TABLE_HPP
#define LOUDCOMP_GAIN_TABLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "loudcomp/loudness.hpp"

namespace loudcomp {

// Levels outside this range are unreachable by the loudness model; the
// equal-loudness search runs over it.
inline constexpr double kSearchFloorDb = -30.0;
inline constexpr double kSearchCeilingDb = 140.0;

enum class GainDirection : std::uint32_t { kCompensate = 0, kInverse = 1 };

struct EqualLoudnessResult {
  double level = 0.0;
  bool saturated = false;  // target loudness unattainable; level was clamped
};

// Level at which `listener` perceives the same specific loudness that
// `reference` perceives at level_db, found by bisection over
// [kSearchFloorDb, kSearchCeilingDb] to 0.01 dB. Identical ears short-cut
// to the input level exactly.
EqualLoudnessResult equal_loudness_level(double level_db, double frequency_hz,
                                         const EarModel& reference,
                                         const EarModel& listener);

struct GainTableBuildParams {
  GainDirection direction = GainDirection::kCompensate;
  double sample_rate = 22050.0;
  std::size_t window_length = 1024;  // power of two; bins = N/2 + 1
  double level_min = -20.0;
  double level_step = 1.0;
  std::size_t level_count = 141;  // -20..120 dB
  double max_gain = 60.0;
  double min_gain = -80.0;
  std::size_t jobs = 0;  // 0 = hardware concurrency
};

// Per-bin, per-level gain lookup table. Row-major [bin][level]; bin k is
// centered at k*sample_rate/window_length and bins below 50 Hz reuse the
// 50 Hz gain column. Immutable after construction; concurrent lookup safe.
class GainTable {
 public:
  GainTable() = default;

  double bin_frequency(std::size_t bin) const;
  std::size_t bin_count() const { return window_length_ / 2 + 1; }
  std::size_t level_count() const { return level_count_; }
  double level_at(std::size_t index) const {
    return level_min_ + static_cast<double>(index) * level_step_;
  }

  float gain_at(std::size_t bin, std::size_t level_index) const {
    return gains_[bin * level_count_ + level_index];
  }
  bool saturated_at(std::size_t bin, std::size_t level_index) const {
    return saturated_[bin * level_count_ + level_index] != 0;
  }

  // Bilinear interpolation in (frequency, level); arguments are clamped to
  // the grid, so this is a total function and exact at grid points.
  double lookup(double frequency_hz, double level_db) const;

  // Gain of one bin's column at an arbitrary level (clamped, linearly
  // interpolated). The per-sample hot path of both processor variants.
  double lookup_bin(std::size_t bin, double level_db) const;

  GainDirection direction() const { return direction_; }
  double sample_rate() const { return sample_rate_; }
  std::size_t window_length() const { return window_length_; }
  double level_min() const { return level_min_; }
  double level_step() const { return level_step_; }
  double max_gain() const { return max_gain_; }
  double min_gain() const { return min_gain_; }
  std::uint32_t source_ear_digest() const { return source_ear_digest_; }
  std::uint32_t target_ear_digest() const { return target_ear_digest_; }
  const std::vector<float>& gains() const { return gains_; }

  // Lossless binary round-trip: magic "LCGT", version, grid descriptors,
  // saturation flags, row-major float32 gains, trailing CRC32.
  std::string serialize() const;
  static GainTable deserialize(const std::string& bytes);
  void save(const std::string& path) const;
  static GainTable load(const std::string& path);

  // CSV with header `freq_hz,level_db,gain_db` and one row per cell.
  std::string to_csv() const;

  // CRC32 of the serialized form; identifies the table in manifests and
  // cache file names.
  std::uint32_t digest() const;

  bool operator==(const GainTable& other) const;

  friend GainTable build_gain_table(const EarModel& reference,
                                    const EarModel& listener,
                                    const GainTableBuildParams& params);

 private:
  GainDirection direction_ = GainDirection::kCompensate;
  double sample_rate_ = 22050.0;
  std::size_t window_length_ = 1024;
  double level_min_ = -20.0;
  double level_step_ = 1.0;
  std::size_t level_count_ = 141;
  double max_gain_ = 60.0;
  double min_gain_ = -80.0;
  std::uint32_t source_ear_digest_ = 0;
  std::uint32_t target_ear_digest_ = 0;
  std::vector<float> gains_;            // [bin][level]
  std::vector<std::uint8_t> saturated_; // [bin][level], 0 or 1
};

// Builds the table by solving the equal-loudness search at every (bin,
// level) cell: gain = clamp(search result - level). Compensation expects a
// normal reference ear; the inverse direction expects a normal listener.
// Columns are solved in parallel; the result is deterministic for any job
// count.
GainTable build_gain_table(const EarModel& reference, const EarModel& listener,
                           const GainTableBuildParams& params);

}  // namespace loudcomp

#endif  // LOUDCOMP_GAIN_TABLE_HPP

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

#include "loudcomp/gain_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "loudcomp/crc32.hpp"
#include "loudcomp/errors.hpp"
#include "loudcomp/fft.hpp"
#include "loudcomp/parallel.hpp"

namespace loudcomp {
namespace {

constexpr char kMagic[4] = {'L', 'C', 'G', 'T'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr double kSolveToleranceDb = 0.01;
constexpr double kMinBinFrequencyHz = 50.0;

bool effectively_normal(const EarModel& ear) {
  return !ear.audiogram.has_value() || ear.audiogram->is_zero_loss();
}

std::uint32_t ear_digest(const EarModel& ear) {
  return ear.audiogram.has_value() ? ear.audiogram->digest() : 0;
}

template <typename T>
void append_raw(std::string& out, const T& value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

template <typename T>
T read_raw(const std::string& bytes, std::size_t& offset) {
  if (offset + sizeof(T) > bytes.size()) {
    throw ValidationError("gain table: truncated data");
  }
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  offset += sizeof(T);
  return value;
}

}  // namespace

EqualLoudnessResult equal_loudness_level(double level_db, double frequency_hz,
                                         const EarModel& reference,
                                         const EarModel& listener) {
  reference.validate();
  listener.validate();
  if (!(level_db >= kSearchFloorDb) || !(level_db <= kSearchCeilingDb)) {
    throw ValidationError("equal loudness: level outside [-30, 140] dB");
  }
  if (reference.same_loudness_function(listener)) {
    return {level_db, false};
  }
  const FrequencyParams ref_params = frequency_params(reference, frequency_hz);
  const FrequencyParams lst_params = frequency_params(listener, frequency_hz);

  // Comparisons happen in scale-free loudness units; only the ratio of the
  // two scales enters, and the common case of equal scales skips the
  // multiply so the result is bit-identical under joint rescaling.
  double target = specific_loudness_unscaled(reference, ref_params, level_db);
  const double ratio = reference.scale_c / listener.scale_c;
  if (ratio != 1.0) target *= ratio;

  const double floor_value =
      specific_loudness_unscaled(listener, lst_params, kSearchFloorDb);
  const double ceiling_value =
      specific_loudness_unscaled(listener, lst_params, kSearchCeilingDb);
  if (target < floor_value) return {kSearchFloorDb, true};
  if (target > ceiling_value) return {kSearchCeilingDb, true};

  double lo = kSearchFloorDb;
  double hi = kSearchCeilingDb;
  while (hi - lo > kSolveToleranceDb) {
    const double mid = 0.5 * (lo + hi);
    const double value = specific_loudness_unscaled(listener, lst_params, mid);
    if (value < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

GainTable build_gain_table(const EarModel& reference, const EarModel& listener,
                           const GainTableBuildParams& params) {
  reference.validate();
  listener.validate();
  if (!is_power_of_two(params.window_length) || params.window_length < 2) {
    throw ValidationError("gain table: window length must be a power of two");
  }
  if (!(params.sample_rate > 0.0)) {
    throw ValidationError("gain table: sample rate must be positive");
  }
  if (params.level_count < 2 || !(params.level_step > 0.0)) {
    throw ValidationError("gain table: level grid needs >= 2 increasing levels");
  }
  if (!(params.min_gain < params.max_gain)) {
    throw ValidationError("gain table: min_gain must be below max_gain");
  }
  const double top_level = params.level_min +
                           static_cast<double>(params.level_count - 1) *
                               params.level_step;
  if (params.level_min < kSearchFloorDb || top_level > kSearchCeilingDb) {
    throw ValidationError("gain table: level grid outside [-30, 140] dB");
  }
  if (params.direction == GainDirection::kCompensate &&
      !effectively_normal(reference)) {
    throw ValidationError(
        "gain table: compensation requires a normal-hearing reference ear");
  }
  if (params.direction == GainDirection::kInverse &&
      !effectively_normal(listener)) {
    throw ValidationError(
        "gain table: inverse direction requires a normal-hearing listener ear");
  }

  GainTable table;
  table.direction_ = params.direction;
  table.sample_rate_ = params.sample_rate;
  table.window_length_ = params.window_length;
  table.level_min_ = params.level_min;
  table.level_step_ = params.level_step;
  table.level_count_ = params.level_count;
  table.max_gain_ = params.max_gain;
  table.min_gain_ = params.min_gain;
  table.source_ear_digest_ = ear_digest(reference);
  table.target_ear_digest_ = ear_digest(listener);
  const std::size_t bins = table.bin_count();
  table.gains_.assign(bins * params.level_count, 0.0f);
  table.saturated_.assign(bins * params.level_count, 0);

  const double bin_hz =
      params.sample_rate / static_cast<double>(params.window_length);
  parallel_for(bins, params.jobs, [&](std::size_t k) {
    const double frequency =
        std::max(static_cast<double>(k) * bin_hz, kMinBinFrequencyHz);
    for (std::size_t i = 0; i < params.level_count; ++i) {
      const double level = params.level_min +
                           static_cast<double>(i) * params.level_step;
      const EqualLoudnessResult solved =
          equal_loudness_level(level, frequency, reference, listener);
      const double gain = std::clamp(solved.level - level, params.min_gain,
                                     params.max_gain);
      table.gains_[k * params.level_count + i] = static_cast<float>(gain);
      table.saturated_[k * params.level_count + i] = solved.saturated ? 1 : 0;
    }
  });
  return table;
}

double GainTable::bin_frequency(std::size_t bin) const {
  return static_cast<double>(bin) * sample_rate_ /
         static_cast<double>(window_length_);
}

double GainTable::lookup_bin(std::size_t bin, double level_db) const {
  const double top_level =
      level_min_ + static_cast<double>(level_count_ - 1) * level_step_;
  const double level = std::clamp(level_db, level_min_, top_level);
  const double level_pos = (level - level_min_) / level_step_;
  std::size_t i0 = static_cast<std::size_t>(level_pos);
  if (i0 >= level_count_ - 1) i0 = level_count_ - 2;
  const double fi = level_pos - static_cast<double>(i0);
  const double g0 = gain_at(bin, i0);
  const double g1 = gain_at(bin, i0 + 1);
  return g0 + fi * (g1 - g0);
}

double GainTable::lookup(double frequency_hz, double level_db) const {
  const double nyquist = sample_rate_ / 2.0;
  const double f = std::clamp(frequency_hz, 0.0, nyquist);
  const double bin_hz = sample_rate_ / static_cast<double>(window_length_);
  const double bin_pos = f / bin_hz;
  std::size_t k0 = static_cast<std::size_t>(bin_pos);
  if (k0 >= bin_count() - 1) k0 = bin_count() - 1;
  const std::size_t k1 = std::min(k0 + 1, bin_count() - 1);
  const double fk = bin_pos - static_cast<double>(k0);
  const double low = lookup_bin(k0, level_db);
  const double high = lookup_bin(k1, level_db);
  return low + fk * (high - low);
}

std::string GainTable::serialize() const {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  append_raw(out, kFormatVersion);
  append_raw(out, static_cast<std::uint32_t>(direction_));
  append_raw(out, sample_rate_);
  append_raw(out, static_cast<std::uint64_t>(window_length_));
  append_raw(out, level_min_);
  append_raw(out, level_step_);
  append_raw(out, static_cast<std::uint64_t>(level_count_));
  append_raw(out, max_gain_);
  append_raw(out, min_gain_);
  append_raw(out, source_ear_digest_);
  append_raw(out, target_ear_digest_);
  out.append(reinterpret_cast<const char*>(saturated_.data()),
             saturated_.size());
  for (float gain : gains_) append_raw(out, gain);
  const std::uint32_t checksum = crc32(out.data(), out.size());
  append_raw(out, checksum);
  return out;
}

GainTable GainTable::deserialize(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) + sizeof(std::uint32_t) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ValidationError("gain table: not a gain table file (bad magic)");
  }
  const std::size_t payload_size = bytes.size() - sizeof(std::uint32_t);
  std::uint32_t stored_checksum;
  std::memcpy(&stored_checksum, bytes.data() + payload_size,
              sizeof(stored_checksum));
  if (crc32(bytes.data(), payload_size) != stored_checksum) {
    throw ValidationError("gain table: checksum mismatch (corrupted data)");
  }
  std::size_t offset = sizeof(kMagic);
  const auto version = read_raw<std::uint32_t>(bytes, offset);
  if (version != kFormatVersion) {
    throw ValidationError("gain table: unsupported format version " +
                          std::to_string(version));
  }
  GainTable table;
  const auto direction = read_raw<std::uint32_t>(bytes, offset);
  if (direction > 1) {
    throw ValidationError("gain table: invalid direction field");
  }
  table.direction_ = static_cast<GainDirection>(direction);
  table.sample_rate_ = read_raw<double>(bytes, offset);
  table.window_length_ =
      static_cast<std::size_t>(read_raw<std::uint64_t>(bytes, offset));
  table.level_min_ = read_raw<double>(bytes, offset);
  table.level_step_ = read_raw<double>(bytes, offset);
  table.level_count_ =
      static_cast<std::size_t>(read_raw<std::uint64_t>(bytes, offset));
  table.max_gain_ = read_raw<double>(bytes, offset);
  table.min_gain_ = read_raw<double>(bytes, offset);
  table.source_ear_digest_ = read_raw<std::uint32_t>(bytes, offset);
  table.target_ear_digest_ = read_raw<std::uint32_t>(bytes, offset);
  if (!is_power_of_two(table.window_length_) || table.window_length_ < 2 ||
      table.level_count_ < 2) {
    throw ValidationError("gain table: invalid grid descriptors");
  }
  const std::size_t cells = table.bin_count() * table.level_count_;
  if (offset + cells + cells * sizeof(float) != payload_size) {
    throw ValidationError("gain table: truncated data");
  }
  table.saturated_.resize(cells);
  std::memcpy(table.saturated_.data(), bytes.data() + offset, cells);
  offset += cells;
  table.gains_.resize(cells);
  std::memcpy(table.gains_.data(), bytes.data() + offset,
              cells * sizeof(float));
  return table;
}

void GainTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("gain table: cannot open '" + path + "' for writing");
  const std::string bytes = serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("gain table: failed writing '" + path + "'");
}

GainTable GainTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("gain table: cannot open '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

std::string GainTable::to_csv() const {
  std::string out = "freq_hz,level_db,gain_db\n";
  char line[96];
  for (std::size_t k = 0; k < bin_count(); ++k) {
    const double frequency = bin_frequency(k);
    for (std::size_t i = 0; i < level_count_; ++i) {
      std::snprintf(line, sizeof(line), "%.10g,%.10g,%.7g\n", frequency,
                    level_at(i), static_cast<double>(gain_at(k, i)));
      out += line;
    }
  }
  return out;
}

std::uint32_t GainTable::digest() const {
  // Digest the payload only: the serialized image ends with its own CRC,
  // and crc32(message + crc32(message)) is the same residue for any message.
  const std::string bytes = serialize();
  return crc32(bytes.data(), bytes.size() - sizeof(std::uint32_t));
}

bool GainTable::operator==(const GainTable& other) const {
  return direction_ == other.direction_ && sample_rate_ == other.sample_rate_ &&
         window_length_ == other.window_length_ &&
         level_min_ == other.level_min_ && level_step_ == other.level_step_ &&
         level_count_ == other.level_count_ && max_gain_ == other.max_gain_ &&
         min_gain_ == other.min_gain_ &&
         source_ear_digest_ == other.source_ear_digest_ &&
         target_ear_digest_ == other.target_ear_digest_ &&
         gains_ == other.gains_ && saturated_ == other.saturated_;
}

}  // namespace loudcomp

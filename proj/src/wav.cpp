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

#include "loudcomp/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "loudcomp/errors.hpp"

namespace loudcomp {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

template <typename T>
T read_raw(const std::string& bytes, std::size_t offset, const char* what) {
  if (offset + sizeof(T) > bytes.size()) {
    throw ValidationError(std::string("wav: truncated file while reading ") +
                          what);
  }
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

template <typename T>
void append_raw(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

std::int16_t quantize(double sample, std::size_t& clipped) {
  const long long q = std::llround(sample * 32768.0);
  if (q > 32767) {
    ++clipped;
    return 32767;
  }
  if (q < -32768) {
    ++clipped;
    return -32768;
  }
  return static_cast<std::int16_t>(q);
}

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("wav: cannot open '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0) {
    throw ValidationError("wav: '" + path + "' is not a RIFF/WAVE file");
  }

  bool have_format = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;

  std::size_t offset = 12;
  while (offset + 8 <= bytes.size()) {
    const std::string chunk_id = bytes.substr(offset, 4);
    const std::uint32_t chunk_size =
        read_raw<std::uint32_t>(bytes, offset + 4, "chunk size");
    const std::size_t body = offset + 8;
    if (chunk_id == "fmt ") {
      if (chunk_size < 16) {
        throw ValidationError("wav: '" + path + "' has a malformed fmt chunk");
      }
      format = read_raw<std::uint16_t>(bytes, body, "format");
      channels = read_raw<std::uint16_t>(bytes, body + 2, "channels");
      sample_rate = read_raw<std::uint32_t>(bytes, body + 4, "sample rate");
      bits = read_raw<std::uint16_t>(bytes, body + 14, "bit depth");
      have_format = true;
    } else if (chunk_id == "data") {
      if (!have_format) {
        throw ValidationError("wav: '" + path +
                              "' has data before its fmt chunk");
      }
      if (channels != 1) {
        throw ValidationError("wav: '" + path + "' has " +
                              std::to_string(channels) +
                              " channels; convert it to mono first");
      }
      if (body + chunk_size > bytes.size()) {
        throw ValidationError("wav: '" + path + "' data chunk is truncated");
      }
      Waveform out;
      out.sample_rate = static_cast<double>(sample_rate);
      if (format == kFormatPcm && bits == 16) {
        const std::size_t count = chunk_size / 2;
        out.samples.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
          const auto v =
              read_raw<std::int16_t>(bytes, body + 2 * i, "sample");
          out.samples[i] = static_cast<double>(v) / 32768.0;
        }
      } else if (format == kFormatFloat && bits == 32) {
        const std::size_t count = chunk_size / 4;
        out.samples.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
          out.samples[i] =
              static_cast<double>(read_raw<float>(bytes, body + 4 * i, "sample"));
        }
      } else {
        throw ValidationError(
            "wav: '" + path + "' uses an unsupported codec (format " +
            std::to_string(format) + ", " + std::to_string(bits) +
            " bits); use 16-bit PCM or 32-bit float");
      }
      return out;
    }
    offset = body + chunk_size + (chunk_size % 2);  // chunks are word-aligned
  }
  throw ValidationError("wav: '" + path + "' has no data chunk");
}

WriteResult write_wav(const std::string& path, const Waveform& signal,
                      WritePolicy policy) {
  if (!(signal.sample_rate > 0.0)) {
    throw ValidationError("wav: sample rate must be positive");
  }
  WriteResult result;
  for (double s : signal.samples) result.peak = std::max(result.peak, std::abs(s));

  const bool as_float = policy == WritePolicy::kFloat;
  const std::uint16_t bits = as_float ? 32 : 16;
  const std::uint32_t rate = static_cast<std::uint32_t>(
      std::llround(signal.sample_rate));
  const std::uint16_t block = static_cast<std::uint16_t>(bits / 8);
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(signal.samples.size() * block);

  std::string payload;
  payload.reserve(data_size);
  if (as_float) {
    for (double s : signal.samples) {
      append_raw(payload, static_cast<float>(s));
    }
  } else {
    double scale = 1.0;
    if (policy == WritePolicy::kPeakNormalize && result.peak > 0.0) {
      scale = (32767.0 / 32768.0) / result.peak;
    }
    for (double s : signal.samples) {
      append_raw(payload, quantize(s * scale, result.clipped_samples));
    }
  }

  std::string out;
  out.reserve(payload.size() + 64);
  out += "RIFF";
  const std::uint32_t fact_size = as_float ? 12 : 0;
  append_raw(out, static_cast<std::uint32_t>(4 + 24 + fact_size + 8 + data_size));
  out += "WAVEfmt ";
  append_raw(out, static_cast<std::uint32_t>(16));
  append_raw(out, as_float ? kFormatFloat : kFormatPcm);
  append_raw(out, static_cast<std::uint16_t>(1));  // mono
  append_raw(out, rate);
  append_raw(out, static_cast<std::uint32_t>(rate * block));
  append_raw(out, block);
  append_raw(out, bits);
  if (as_float) {
    out += "fact";
    append_raw(out, static_cast<std::uint32_t>(4));
    append_raw(out, static_cast<std::uint32_t>(signal.samples.size()));
  }
  out += "data";
  append_raw(out, data_size);
  out += payload;

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("wav: cannot open '" + path + "' for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("wav: failed writing '" + path + "'");
  return result;
}

}  // namespace loudcomp

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

#ifndef LOUDCOMP_CRC32_HPP
#define LOUDCOMP_CRC32_HPP

#include <cstddef>
#include <cstdint>
#include <string>

namespace loudcomp {

// Standard CRC-32 (IEEE 802.3, reflected 0xEDB88320).
std::uint32_t crc32(const void* data, std::size_t size, std::uint32_t seed = 0);
std::uint32_t crc32_file(const std::string& path);
std::string crc32_hex(std::uint32_t crc);

}  // namespace loudcomp

#endif  // LOUDCOMP_CRC32_HPP

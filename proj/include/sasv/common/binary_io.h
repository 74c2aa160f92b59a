// Copyright (c) 2026 The sasv-fusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SASV_COMMON_BINARY_IO_H_
#define SASV_COMMON_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

// Little-endian primitive I/O shared by the embedding store and the model
// checkpoint formats. Byte order is fixed regardless of host endianness.
namespace sasv::io {

template <typename UInt>
void WriteLittleEndian(std::ostream& os, UInt value) {
  char bytes[sizeof(UInt)];
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  os.write(bytes, sizeof(UInt));
}

template <typename UInt>
UInt ReadLittleEndian(std::istream& is, const char* what) {
  unsigned char bytes[sizeof(UInt)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(UInt))) {
    throw std::runtime_error(std::string("truncated file while reading ") +
                             what);
  }
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    value |= static_cast<UInt>(bytes[i]) << (8 * i);
  }
  return value;
}

inline void WriteF32(std::ostream& os, float value) {
  WriteLittleEndian(os, std::bit_cast<std::uint32_t>(value));
}

inline float ReadF32(std::istream& is, const char* what) {
  return std::bit_cast<float>(ReadLittleEndian<std::uint32_t>(is, what));
}

inline void WriteF64(std::ostream& os, double value) {
  WriteLittleEndian(os, std::bit_cast<std::uint64_t>(value));
}

inline double ReadF64(std::istream& is, const char* what) {
  return std::bit_cast<double>(ReadLittleEndian<std::uint64_t>(is, what));
}

inline void WriteBytes(std::ostream& os, const std::string& bytes) {
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline std::string ReadBytes(std::istream& is, std::size_t n,
                             const char* what) {
  std::string bytes(n, '\0');
  if (n > 0 && !is.read(bytes.data(), static_cast<std::streamsize>(n))) {
    throw std::runtime_error(std::string("truncated file while reading ") +
                             what);
  }
  return bytes;
}

}  // namespace sasv::io

#endif  // SASV_COMMON_BINARY_IO_H_

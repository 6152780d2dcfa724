// Copyright 2026 The MFTP Authors
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

#ifndef MFTP_BITS_H_
#define MFTP_BITS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mftp {

/// Packed bit-field over lattice edges. Bit i lives in word i / 64 at
/// position i % 64; unused high bits of the last word are kept zero.
class BitField {
 public:
  BitField() = default;
  explicit BitField(std::size_t num_bits);

  std::size_t size() const { return num_bits_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void clear();

  std::size_t popcount() const;
  bool none() const;

  /// Parity of the bits selected by `indices`.
  bool parity_over(std::span<const int> indices) const;

  BitField& operator^=(const BitField& other);
  friend BitField operator^(BitField a, const BitField& b) { return a ^= b; }
  friend bool operator==(const BitField& a, const BitField& b) = default;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  /// Hex rendering with bit 0 as the least significant bit of the number;
  /// most significant digit first, zero padded to ceil(size / 4) digits.
  std::string to_hex() const;
  static BitField from_hex(std::string_view hex, std::size_t num_bits);

 private:
  std::size_t num_bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace mftp

#endif  // MFTP_BITS_H_

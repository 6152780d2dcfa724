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

#include "mftp/bits.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace mftp {

BitField::BitField(std::size_t num_bits)
    : num_bits_(num_bits), words_((num_bits + 63) / 64, 0) {}

void BitField::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

void BitField::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t BitField::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitField::none() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

bool BitField::parity_over(std::span<const int> indices) const {
  bool p = false;
  for (int i : indices) p ^= get(static_cast<std::size_t>(i));
  return p;
}

BitField& BitField::operator^=(const BitField& other) {
  if (other.num_bits_ != num_bits_) {
    throw std::invalid_argument("BitField size mismatch: " + std::to_string(num_bits_) +
                                " vs " + std::to_string(other.num_bits_));
  }
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
  return *this;
}

std::string BitField::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (num_bits_ + 3) / 4;
  std::string out(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t i = 4 * d + b;
      if (i < num_bits_ && get(i)) nibble |= 1u << b;
    }
    out[digits - 1 - d] = kDigits[nibble];
  }
  return out;
}

BitField BitField::from_hex(std::string_view hex, std::size_t num_bits) {
  if (hex.size() != (num_bits + 3) / 4) {
    throw std::invalid_argument("hex length does not match bit count");
  }
  BitField out(num_bits);
  const std::size_t digits = hex.size();
  for (std::size_t d = 0; d < digits; ++d) {
    const char c = hex[digits - 1 - d];
    unsigned nibble;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw std::invalid_argument(std::string("bad hex digit '") + c + "'");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      if (!(nibble & (1u << b))) continue;
      const std::size_t i = 4 * d + b;
      if (i >= num_bits) throw std::invalid_argument("hex sets bits beyond size");
      out.set(i, true);
    }
  }
  return out;
}

}  // namespace mftp

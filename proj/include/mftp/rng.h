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

#ifndef MFTP_RNG_H_
#define MFTP_RNG_H_

#include <cstdint>
#include <limits>

namespace mftp {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based generator: the n-th output is a pure function of
/// (key, n), so every trial stream is reproducible independently of how
/// trials are scheduled. Output distributions are computed here rather than
/// through <random> distributions, whose algorithms are implementation
/// defined.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0) : key_(splitmix64(key ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * (counter_++));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n), n > 0 (Lemire multiply-shift with rejection).
  std::uint32_t below(std::uint32_t n) {
    while (true) {
      const std::uint64_t x = (*this)() >> 32;
      const std::uint64_t m = x * n;
      const std::uint32_t low = static_cast<std::uint32_t>(m);
      if (low >= n || low >= (0u - n) % n) return static_cast<std::uint32_t>(m >> 32);
    }
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mftp

#endif  // MFTP_RNG_H_

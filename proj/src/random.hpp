// Copyright 2026 The atrisk Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ATRISK_RANDOM_HPP_
#define ATRISK_RANDOM_HPP_

#include <array>
#include <cstdint>

namespace atrisk {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

inline constexpr const char* kGeneratorName = "philox4x32-10";

/// Independent stream for one (trial, leaf) pair. The 64-bit seed is the
/// key; trial, leaf and a draw counter fill the 128-bit counter, so draws
/// do not depend on how trials are spread over threads.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t leaf)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        trial_(trial),
        leaf_(leaf) {}

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal (Box-Muller).
  double normal();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t trial_;
  std::uint32_t leaf_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
};

}  // namespace atrisk

#endif  // ATRISK_RANDOM_HPP_

/*
 * Copyright 2026 The motif-shap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "motif_shap/random.hpp"

#include "motif_shap/error.hpp"

namespace motif_shap {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

PhiloxCounter PhiloxBlock(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kMul0, ctr[0], hi0, lo0);
    MulHiLo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, Stream stream,
                           std::uint32_t substream)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      stream_(static_cast<std::uint32_t>(stream)),
      substream_(substream) {}

std::uint32_t RandomStream::NextU32() {
  if (used_ == 4) {
    buffer_ = PhiloxBlock({static_cast<std::uint32_t>(block_),
                           static_cast<std::uint32_t>(block_ >> 32),
                           substream_, stream_},
                          key_);
    ++block_;
    used_ = 0;
  }
  return buffer_[used_++];
}

double RandomStream::NextUniform() {
  const std::uint64_t hi = NextU32();
  const std::uint64_t lo = NextU32();
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::uint32_t RandomStream::NextBelow(std::uint64_t bound) {
  Require(bound >= 1 && bound <= (std::uint64_t{1} << 32),
          ErrorKind::kInvalidArgument, "random bound out of range");
  if (bound == (std::uint64_t{1} << 32)) return NextU32();
  const auto b = static_cast<std::uint32_t>(bound);
  // Reject the low (2^32 mod b) values so every residue is equally likely.
  const std::uint32_t threshold = static_cast<std::uint32_t>(-b) % b;
  for (;;) {
    const std::uint32_t x = NextU32();
    if (x >= threshold) return x % b;
  }
}

}  // namespace motif_shap

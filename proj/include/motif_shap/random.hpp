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

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2,
// 3", SC'11). Counter-based, so independent streams are obtained by fixing
// part of the counter instead of seeding separate engines. Any implementation
// of the same block function reproduces every draw made here.

#ifndef MOTIF_SHAP_RANDOM_HPP_
#define MOTIF_SHAP_RANDOM_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace motif_shap {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter PhiloxBlock(PhiloxCounter counter, PhiloxKey key);

// Named substreams. Values are part of the reproducibility contract.
enum class Stream : std::uint32_t {
  kErdosRenyi = 1,
  kInjection = 2,
  kMotifSampling = 3,
  kTrainSplit = 4,
  kSubsample = 5,
  kTesting = 100,
};

// Sequential draws from the block sequence
//   key = (seed_lo, seed_hi), counter = (i_lo, i_hi, substream, stream),
// consuming the four output words of each block in order.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, Stream stream, std::uint32_t substream = 0);

  std::uint32_t NextU32();
  // Uniform on the open interval (0, 1), 53 bits of resolution. Two words:
  // ((hi << 32 | lo) >> 11 + 0.5) * 2^-53.
  double NextUniform();
  // Uniform integer in [0, bound) by rejection; bound must be in [1, 2^32].
  std::uint32_t NextBelow(std::uint64_t bound);

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = NextBelow(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  PhiloxKey key_;
  std::uint32_t stream_;
  std::uint32_t substream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
};

}  // namespace motif_shap

#endif  // MOTIF_SHAP_RANDOM_HPP_

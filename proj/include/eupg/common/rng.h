// Copyright 2026 The EUPG Authors
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

#ifndef EUPG_COMMON_RNG_H_
#define EUPG_COMMON_RNG_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace eupg {

// SplitMix64 finalizer. Used to derive independent stream seeds from a base
// seed and a list of stream identifiers (shard, slice, epoch, column, ...).
uint64_t MixSeed(uint64_t seed, uint64_t stream);
uint64_t MixSeed(uint64_t seed, std::initializer_list<uint64_t> streams);

// Seedable generator whose output sequence is identical on every platform.
// Only the mt19937_64 engine is taken from <random>; every distribution is
// implemented here because the standard distributions are
// implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed), seed_(seed) {}

  static Rng ForStream(uint64_t seed, std::initializer_list<uint64_t> streams) {
    return Rng(MixSeed(seed, streams));
  }

  uint64_t seed() const { return seed_; }

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Unbiased (rejection sampling). n must be > 0.
  uint64_t UniformIndex(uint64_t n);

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  uint64_t seed_;
};

// A uniformly random permutation of 0..n-1.
std::vector<size_t> RandomPermutation(size_t n, Rng& rng);

// `count` distinct indices from 0..n-1, sorted ascending.
std::vector<size_t> SampleWithoutReplacement(size_t n, size_t count, Rng& rng);

}  // namespace eupg

#endif  // EUPG_COMMON_RNG_H_

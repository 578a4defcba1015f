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

#include "eupg/common/rng.h"

#include <algorithm>
#include <numeric>

#include "eupg/common/error.h"

namespace eupg {

uint64_t MixSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t MixSeed(uint64_t seed, std::initializer_list<uint64_t> streams) {
  uint64_t s = seed;
  for (uint64_t stream : streams) s = MixSeed(s, stream);
  return s;
}

uint64_t Rng::UniformIndex(uint64_t n) {
  if (n == 0) throw InvalidArgumentError("UniformIndex: n must be positive");
  // Largest multiple of n representable; draws at or above it are rejected.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return x % n;
}

std::vector<size_t> RandomPermutation(size_t n, Rng& rng) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  rng.Shuffle(std::span<size_t>(perm));
  return perm;
}

std::vector<size_t> SampleWithoutReplacement(size_t n, size_t count,
                                             Rng& rng) {
  if (count > n) {
    throw InvalidArgumentError("cannot sample more items than available");
  }
  std::vector<size_t> perm = RandomPermutation(n, rng);
  perm.resize(count);
  std::sort(perm.begin(), perm.end());
  return perm;
}

}  // namespace eupg

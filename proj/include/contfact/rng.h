// Copyright 2026 The Contfact Authors
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

#ifndef CONTFACT_RNG_H_
#define CONTFACT_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>

namespace contfact {

// Counter-based standard normal source. Draw number `index` of stream
// `stream` under `seed` is a pure function of the three values, so
// concurrent users only need disjoint (stream, index) ranges.
class GaussianSource {
 public:
  GaussianSource(uint64_t seed, uint64_t stream)
      : key_(Mix(seed ^ Mix(stream + 0x632be59bd9b4e019ULL))) {}

  double operator()(uint64_t index) const {
    const uint64_t a = Mix(key_ + 2 * index * kGolden);
    const uint64_t b = Mix(key_ + (2 * index + 1) * kGolden);
    // 53-bit uniforms; u1 in (0, 1] so the log is finite.
    const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  // splitmix64 finalizer.
  static uint64_t Mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t key_;
};

}  // namespace contfact

#endif  // CONTFACT_RNG_H_

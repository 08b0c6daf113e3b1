// Copyright 2026 The dcpriv Authors
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

#ifndef DCPRIV_RNG_H_
#define DCPRIV_RNG_H_

#include <cstdint>
#include <initializer_list>

namespace dcpriv {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based generator. The stream is a pure function of the key words
// (typically the seed plus structural indices such as the trial number), so
// draws never depend on scheduling or on how many draws other streams made.
//
// Distributions are implemented here rather than via <random> because the
// standard distributions are implementation-defined and would break
// bit-identical outputs across toolchains.
class CounterRng {
 public:
  CounterRng(std::initializer_list<uint64_t> key_words);

  uint64_t NextU64() { return Mix64(key_ ^ Mix64(counter_++)); }

  // Uniform on [0, 1) with 53 random bits.
  double NextUniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). Requires bound > 0.
  uint64_t NextBelow(uint64_t bound);

  // Standard normal via Box-Muller (no cached spare, so each call consumes
  // exactly two words).
  double NextGaussian();

  bool NextCoin() { return (NextU64() >> 63) != 0; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace dcpriv

#endif  // DCPRIV_RNG_H_

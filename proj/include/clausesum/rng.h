// Copyright 2026 The Clausesum Authors.
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

#ifndef CLAUSESUM_RNG_H_
#define CLAUSESUM_RNG_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace clausesum {

// Seeded generator whose outputs are identical across standard libraries.
// std::uniform_int_distribution and std::shuffle are implementation-defined,
// so every draw goes through the raw mt19937_64 stream instead.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

  // Uniform double in [0, 1) with 53 bits of precision.
  double UniformDouble();

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(UniformInt(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace clausesum

#endif  // CLAUSESUM_RNG_H_

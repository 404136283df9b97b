// Copyright 2026 The Kinfeas Authors
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

// Splittable counter-based random streams.
//
// A stream is a (key, counter) pair; draw i of a stream is a fixed function
// of its key and i, so streams can be split by label or index without any
// shared state and replayed from a saved (key, counter).

#ifndef KINFEAS_RNG_HPP_
#define KINFEAS_RNG_HPP_

#include <cstdint>
#include <limits>
#include <string_view>

#include "kinfeas/spatial.hpp"

namespace kinfeas {

class Rng {
 public:
  using result_type = std::uint64_t;

  struct State {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;
    bool operator==(const State&) const = default;
  };

  explicit Rng(std::uint64_t seed = 0);

  static Rng from_state(State state);
  State state() const { return state_; }

  // Child streams. Splitting never advances the parent.
  Rng split(std::string_view label) const;
  Rng split(std::uint64_t index) const;

  std::uint64_t next_u64();
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();   // standard normal
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n)
  Quat unit_quat();  // uniform on SO(3)

 private:
  State state_;
};

}  // namespace kinfeas

#endif  // KINFEAS_RNG_HPP_

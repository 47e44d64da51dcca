// Copyright 2026 The liempc Authors
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

#ifndef LIEMPC_RNG_HPP_
#define LIEMPC_RNG_HPP_

#include <cstdint>
#include <vector>

namespace liempc {

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based generator: draw n of stream (seed, stream) is a pure
// function of (seed, stream, n), so results do not depend on platform or
// on how trials are scheduled.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();                       // [0, 1), 53 random bits
  double uniform(double lo, double hi);
  double normal();                        // Box-Muller, no caching
  std::uint64_t below(std::uint64_t n);   // unbiased, n > 0

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Fisher-Yates with CounterRng::below.
std::vector<int> permutation(int n, CounterRng& rng);

}  // namespace liempc

#endif  // LIEMPC_RNG_HPP_

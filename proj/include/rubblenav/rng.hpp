// Copyright 2026 The RubbleNav Authors
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

#ifndef RUBBLENAV__RNG_HPP_
#define RUBBLENAV__RNG_HPP_

#include <cstdint>
#include <random>

namespace rubblenav
{

/// Seeded generator whose output is identical on every standard library:
/// std::mt19937_64 is fully specified, the std distributions are not.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() {return engine_();}

  /// Uniform in [0, 1).
  double uniform() {return static_cast<double>(engine_() >> 11) * 0x1.0p-53;}

  double uniform(double lo, double hi) {return lo + (hi - lo) * uniform();}

  /// Uniform integer in [lo, hi]. The modulo bias is below 2^-40 for the
  /// ranges used here.
  int uniform_int(int lo, int hi)
  {
    const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

  bool bernoulli(double p) {return uniform() < p;}

private:
  std::mt19937_64 engine_;
};

}  // namespace rubblenav

#endif  // RUBBLENAV__RNG_HPP_

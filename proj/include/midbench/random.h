// Copyright 2026 The midbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef MIDBENCH_RANDOM_H_
#define MIDBENCH_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <vector>

#include "midbench/error.h"

namespace midbench {

// Seed for every randomized operation in the library. Identical Seed plus
// identical inputs gives bit-identical outputs on every platform; nothing
// here depends on std::random distributions, whose streams are
// implementation-defined.
struct Seed {
  std::uint64_t value = 0;
};

namespace internal {

// SplitMix64 finalizer, used both as the generator step and as the mixing
// function for seed derivation.
inline std::uint64_t Mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace internal

// Derives an independent child seed from a parent seed and one or more
// stream identifiers (grid index, repetition index, trial index, ...).
// Derivation is a fixed hash chain, so concurrent consumers of sibling
// streams never share state.
inline Seed DeriveSeed(Seed parent, std::uint64_t stream) {
  std::uint64_t s = parent.value;
  s = internal::Mix64(s + 0x9e3779b97f4a7c15ULL);
  s = internal::Mix64(s ^ internal::Mix64(stream + 0x632be59bd9b4e019ULL));
  return Seed{s};
}

inline Seed DeriveSeed(Seed parent, std::uint64_t a, std::uint64_t b) {
  return DeriveSeed(DeriveSeed(parent, a), b);
}

inline Seed DeriveSeed(Seed parent, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) {
  return DeriveSeed(DeriveSeed(parent, a, b), c);
}

// Repo-wide pseudorandom generator: SplitMix64 with a Weyl increment.
// All distribution transforms are implemented here (53-bit uniforms,
// Box-Muller normals, inverse-CDF Laplace) so streams are reproducible
// bit-for-bit across compilers and standard libraries.
class Rng {
 public:
  explicit Rng(Seed seed) : state_(seed.value) {}

  std::uint64_t NextU64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return internal::Mix64(state_);
  }

  // Uniform on [0, 1) with 53 bits of precision.
  double Uniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  // Uniform index in [0, n). Multiply-shift; the modulo bias is below
  // n / 2^64 and irrelevant at the sample sizes used here.
  std::size_t UniformIndex(std::size_t n) {
    if (n == 0) throw NumericError("UniformIndex: empty range");
    return static_cast<std::size_t>(
        (static_cast<__uint128_t>(NextU64()) * n) >> 64);
  }

  // Standard normal via Box-Muller. The spare value is cached, so a
  // stream's normals depend only on the call sequence.
  double Normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = Uniform();
    double u2 = Uniform();
    // Guard the log: Uniform() can return exactly 0.
    while (u1 <= 0.0) u1 = Uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  // Laplace with scale b (mean 0) by inverse CDF.
  double Laplace(double scale) {
    const double u = Uniform() - 0.5;
    const double a = 1.0 - 2.0 * std::abs(u);
    const double mag = -scale * std::log(a > 0.0 ? a : 0x1.0p-53);
    return u < 0.0 ? -mag : mag;
  }

  // Samples an index from an (unnormalized is fine) non-negative weight
  // vector by cumulative inversion. Ties in layout never matter because
  // the draw is a strict prefix comparison.
  std::size_t Categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw NumericError("Categorical: zero total weight");
    double u = Uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.size() - 1;
  }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[UniformIndex(i)]);
    }
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace midbench

#endif  // MIDBENCH_RANDOM_H_

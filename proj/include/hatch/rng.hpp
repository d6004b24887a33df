#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Core>

#include "hatch/errors.hpp"

namespace hatch {

// Deterministic random source. A thin wrapper over std::mt19937_64 that
// draws every distribution from raw engine words, so a (seed, call sequence)
// pair reproduces bit-exactly and the full state round-trips through text.
//
// Streams are derived, not shared: fork(k) hashes (base seed, k) into a new
// independent generator, which is how one experiment seed fans out into
// world/context/reward/policy streams without any cross-talk.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // Stable 64-bit finalizer (splitmix64); used for seed derivation only.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  Rng fork(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 1))); }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller; stateless (no cached spare draw).
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Uniform integer in [0, n); rejection sampling, no modulo bias.
  std::int64_t uniform_int(std::int64_t n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return static_cast<std::int64_t>(v % un);
  }

  // Index j with probability proportional to probs[j] (probs need not be
  // exactly normalized; the draw rescales by the total mass).
  int categorical(const Eigen::VectorXd& probs) {
    const double total = probs.sum();
    if (!(total > 0.0)) throw std::invalid_argument("categorical: non-positive mass");
    double target = uniform01() * total;
    for (int j = 0; j + 1 < probs.size(); ++j) {
      target -= probs[j];
      if (target < 0.0) return j;
    }
    return static_cast<int>(probs.size()) - 1;
  }

  std::string serialize() const {
    std::ostringstream out;
    out << seed_ << ' ' << engine_;
    return out.str();
  }

  static Rng deserialize(const std::string& text) {
    std::istringstream in(text);
    std::uint64_t seed = 0;
    if (!(in >> seed)) throw format_error("rng state: missing seed");
    Rng rng(seed);
    if (!(in >> rng.engine_)) throw format_error("rng state: corrupt engine state");
    return rng;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace hatch

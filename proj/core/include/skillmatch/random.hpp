#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace skillmatch {

/// Seedable random source with a portable output sequence.
///
/// The engine is std::mt19937_64, whose raw output is fixed by the standard.
/// The standard distributions are not, so every draw used by the library goes
/// through the helpers below, which only consume raw 64-bit words:
///
///   uniform01()  top 53 bits of one word, scaled by 2^-53
///   below(n)     rejection sampling on one or more words
///   bernoulli(p) uniform01() < p
///
/// Substreams are derived with `derive`, which folds the parent seed and a
/// list of salts through SplitMix64. Labels are hashed with 64-bit FNV-1a.
/// A substream seed depends only on the parent seed and the salts, never on
/// how many numbers the parent has produced.
class Rng {
 public:
  using Seed = std::uint64_t;

  explicit Rng(Seed seed) : seed_(seed), engine_(seed) {}

  Seed seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  std::size_t below(std::size_t n);
  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniformly random permutation of 0..n-1 (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);

  static Seed derive(Seed parent, std::span<const std::uint64_t> salts);
  static Seed derive(Seed parent, std::string_view label);
  static Seed derive(Seed parent, std::string_view label, std::uint64_t index);

 private:
  Seed seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view text) noexcept;

}  // namespace skillmatch

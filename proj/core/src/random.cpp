#include "skillmatch/random.hpp"

#include <limits>
#include <numeric>
#include <utility>

#include "skillmatch/error.hpp"

namespace skillmatch {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw ContractViolation("Rng::below: empty range");
  const std::uint64_t range = n;
  // Largest multiple of `range` that fits; words at or above it are redrawn.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t word = engine_();
  while (word >= limit) word = engine_();
  return static_cast<std::size_t>(word % range);
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[below(i)]);
  }
  return order;
}

Rng::Seed Rng::derive(Seed parent, std::span<const std::uint64_t> salts) {
  std::uint64_t state = splitmix64(parent);
  for (std::uint64_t salt : salts) state = splitmix64(state ^ splitmix64(salt));
  return state;
}

Rng::Seed Rng::derive(Seed parent, std::string_view label) {
  const std::uint64_t salts[] = {fnv1a64(label)};
  return derive(parent, salts);
}

Rng::Seed Rng::derive(Seed parent, std::string_view label,
                      std::uint64_t index) {
  const std::uint64_t salts[] = {fnv1a64(label), index};
  return derive(parent, salts);
}

}  // namespace skillmatch

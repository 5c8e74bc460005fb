#pragma once

#include <cstdint>

#include "pbtbench/util/hash.hpp"

namespace pbtbench::harness {

/// Hash-based splittable generator. A child stream depends only on the
/// parent's seed and the child index, never on how much of the parent (or of
/// any sibling) has been consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : seed_(seed), state_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return util::splitmix64(state_);
  }

  Rng split(std::uint64_t index) const noexcept { return Rng(util::hash_combine(seed_, index)); }

  /// Uniform in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    // Rejection keeps the distribution exactly uniform.
    const std::uint64_t limit = -bound % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x < limit);
    return x % bound;
  }

  /// Uniform in [lo, hi]; requires lo <= hi.
  int uniform(int lo, int hi) noexcept {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1)));
  }

  bool coin() noexcept { return next() >> 63; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace pbtbench::harness

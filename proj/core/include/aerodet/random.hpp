#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace aerodet {

// Seeded random stream. split(i) derives an independent child stream from
// the parent's seed and i alone, so work handed out by index is
// reproducible regardless of execution order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream split(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }

  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);
  bool bernoulli(double p);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace aerodet

#include "aerodet/random.hpp"

#include <stdexcept>

namespace aerodet {
namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

// splitmix64 finaliser; decorrelates (seed, index) pairs.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seeded_engine(seed)) {}

RandomStream RandomStream::split(std::uint64_t index) const {
  return RandomStream(mix(mix(seed_) ^ mix(index + 0x632be59bd9b4e019ULL)));
}

double RandomStream::uniform() {
  // 53 random mantissa bits.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  if (lo == hi) return lo;
  return lo + (hi - lo) * uniform();
}

std::size_t RandomStream::below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("RandomStream::below: n must be positive");
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

bool RandomStream::bernoulli(double p) { return uniform() < p; }

}  // namespace aerodet

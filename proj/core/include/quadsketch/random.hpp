#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace quadsketch {

/// Mixes a root seed with a stream tag into an independent seed. All
/// randomness in the library is derived from user seeds through this.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag_a, std::uint64_t tag_b);

/// Thin wrapper over mt19937_64 with portable uniform draws (the standard
/// distributions are implementation-defined, which would break byte-identical
/// outputs across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return p >= 1.0 || uniform() < p; }
  /// +1 or -1 with equal probability.
  double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
};

/// Samples indices proportionally to non-negative weights.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> weights);
  std::size_t operator()(Rng& rng) const;
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

}  // namespace quadsketch

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace mcph {

/// Counter-based pseudo-random generator.
///
/// Output k of a stream with key K is mix64(K + k*gamma), i.e. a pure
/// function of (key, counter). Substreams are derived by re-keying, so any
/// number of streams can be consumed in parallel and the draws depend only
/// on (master seed, stream id, position), never on scheduling order.
class Rng {
 public:
  explicit Rng(std::uint64_t key) noexcept : key_(key) {}

  /// Stafford mix13 finalizer; bijective on 64-bit words.
  static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t derive_key(std::uint64_t key,
                                            std::uint64_t stream_id) noexcept {
    return mix64(key ^ mix64(stream_id + 0x632BE59BD9B4E019ull));
  }

  static Rng seeded(std::uint64_t seed) noexcept {
    return Rng(mix64(seed + kGamma));
  }

  /// Independent stream addressed by id; does not advance this stream.
  Rng substream(std::uint64_t stream_id) const noexcept {
    return Rng(derive_key(key_, stream_id));
  }

  std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * kGamma); }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Isotropic unit vector from a normalized Gaussian triple.
  /// Consumes exactly four uniforms (two Box-Muller pairs, one normal spare
  /// discarded) so the per-draw budget is constant.
  std::array<double, 3> unit_vector() noexcept {
    for (;;) {
      const double u1 = 1.0 - next_double();  // (0, 1]
      const double a1 = 2.0 * std::numbers::pi * next_double();
      const double u2 = 1.0 - next_double();
      const double a2 = 2.0 * std::numbers::pi * next_double();
      const double m1 = std::sqrt(-2.0 * std::log(u1));
      const double m2 = std::sqrt(-2.0 * std::log(u2));
      const double x = m1 * std::cos(a1);
      const double y = m1 * std::sin(a1);
      const double z = m2 * std::cos(a2);
      const double n2 = x * x + y * y + z * z;
      if (n2 > 1e-300) {
        const double inv = 1.0 / std::sqrt(n2);
        return {x * inv, y * inv, z * inv};
      }
    }
  }

  /// Poisson count by chunked inverse products; exact for any finite mean.
  std::uint64_t poisson(double mean) {
    if (!std::isfinite(mean) || mean < 0.0) {
      throw std::domain_error("poisson mean must be finite and nonnegative");
    }
    std::uint64_t total = 0;
    while (mean > kChunk) {
      total += poisson_chunk(kChunk);
      mean -= kChunk;
    }
    return total + poisson_chunk(mean);
  }

  std::uint64_t calls() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr double kChunk = 60.0;  // keeps the product comparison well above underflow

  std::uint64_t poisson_chunk(double lambda) noexcept {
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      p *= next_double();
      ++k;
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mcph

#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace qgk {

/// Counter-based 64-bit generator (SplitMix64 finalizer over a keyed counter).
///
/// Output i of stream s under seed k is mix64(key(k, s) + (i+1)·0x9E3779B97F4A7C15),
/// where key(k, s) = mix64(k) ^ mix64(s + 0xD1B54A32D192ED03). Independent
/// sub-streams are obtained with split(); no platform-dependent standard
/// distributions are involved, so identical seeds reproduce bit-exactly on
/// every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller; pairs are cached.
  double normal();
  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  [[nodiscard]] CounterRng split(std::uint64_t stream) const;

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

[[nodiscard]] std::uint64_t mix64(std::uint64_t x);

}  // namespace qgk

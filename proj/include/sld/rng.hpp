#pragma once

#include <cstdint>
#include <limits>

namespace sld {

namespace detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based random stream.
///
/// The i-th output is a pure function of (key, i), so a stream can be copied,
/// replayed, or split into independent child streams without shared state.
/// Child streams are addressed by an index, which is how experiment trials
/// get reproducible randomness regardless of scheduling.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Stream(std::uint64_t seed) noexcept
      : key_(detail::mix64(seed ^ 0x5DEECE66DULL)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return detail::mix64(detail::mix64(key_ + counter_ * detail::kGolden) ^ key_);
  }

  /// Independent child stream; does not advance this stream.
  constexpr Stream split(std::uint64_t index) const noexcept {
    Stream child(0);
    child.key_ = detail::mix64(detail::mix64(key_ ^ 0xA0761D6478BD642FULL) +
                               (index + 1) * detail::kGolden);
    return child;
  }

  /// Uniform on the half-open interval (0, 1].
  double uniform_pos() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection.
    for (;;) {
      const unsigned __int128 m =
          static_cast<unsigned __int128>((*this)()) * bound;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= bound || low >= (-bound) % bound) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  bool coin() noexcept { return ((*this)() >> 63) != 0; }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace sld

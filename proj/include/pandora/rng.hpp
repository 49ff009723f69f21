#pragma once

#include <cstdint>

#include "pandora/gauss.hpp"

namespace pandora {

// Counter-based random source: every draw is a pure function of
// (key, replication, item, round, stream). Two configurations sharing a key
// see the same standardized draws at the same coordinates.
class KeyedRng {
 public:
  enum class Stream : std::uint64_t {
    Quality = 1,
    Subjective = 2,
    Diamond = 3,
    Auxiliary = 4,
  };

  static constexpr std::uint64_t kNoRound = ~std::uint64_t{0};

  explicit KeyedRng(std::uint64_t key) : key_(mix(key)) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t replication, std::uint64_t item, std::uint64_t round,
                     Stream stream) const {
    std::uint64_t h = mix(key_ ^ static_cast<std::uint64_t>(stream));
    h = mix(h ^ replication);
    h = mix(h ^ item);
    return mix(h ^ round);
  }

  // Uniform on the open interval (0, 1).
  double uniform(std::uint64_t replication, std::uint64_t item, std::uint64_t round,
                 Stream stream) const {
    return to_unit(bits(replication, item, round, stream));
  }

  double normal(std::uint64_t replication, std::uint64_t item, std::uint64_t round,
                Stream stream) const {
    return std_quantile_approx(uniform(replication, item, round, stream));
  }

  static double to_unit(std::uint64_t b) {
    return (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

// Sequential generator on top of the keyed hash, for oracles that just need
// an i.i.d. stream.
class SequentialRng {
 public:
  explicit SequentialRng(std::uint64_t seed) : state_(KeyedRng::mix(seed)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return KeyedRng::mix(state_);
  }
  double uniform() { return KeyedRng::to_unit(next()); }
  double normal() { return std_quantile_approx(uniform()); }

 private:
  std::uint64_t state_;
};

}  // namespace pandora

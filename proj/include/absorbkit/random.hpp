#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace absorbkit {

//! Deterministic random source. Wraps mt19937_64 with self-contained draw
//! routines so results do not depend on the standard library's
//! implementation-defined distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  //! Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  //! Standard normal via Box-Muller; generates pairs, caches the second.
  double normal();

  //! Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);

  //! Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_index(i)]);
    }
  }

private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace absorbkit

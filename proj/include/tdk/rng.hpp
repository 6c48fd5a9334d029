#pragma once

#include <tdk/cochain.hpp>

#include <cstdint>

namespace tdk {

/// Deterministic 64-bit linear congruential generator; the constants are
/// part of the serialization contract (docs/schema.md) so sweeps reproduce
/// across implementations.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state;
  }

  /// Uniform in [lo, hi], inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  Int small_int() { return Int(range(-9, 9)); }

  Rat small_rat() {
    Int num = small_int();
    Int den = Int(range(1, 4));
    return Rat(num, den);
  }

  template <typename S>
  Cochain<S> cochain(const SimplicialComplex& x, int degree, std::size_t rank = 1) {
    Cochain<S> c = Cochain<S>::zero(x, degree, rank);
    for (auto& v : c.values)
      for (S& s : v) {
        if constexpr (std::is_same_v<S, Int>)
          s = small_int();
        else
          s = small_rat();
      }
    return c;
  }
};

}  // namespace tdk

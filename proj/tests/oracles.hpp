#ifndef LPFIELD_TESTS_ORACLES_HPP
#define LPFIELD_TESTS_ORACLES_HPP

#include <cmath>
#include <numbers>

#include "lpfield/grid.hpp"
#include "lpfield/rng.hpp"

namespace lpfield::testing {

/// Brute-force O(N^{2d}) DFT with the project normalization, independent of
/// the FFT path.
inline GridFunction brute_forward(const GridFunction& f) {
  const GridSpec& g = f.spec();
  GridFunction out(g, Side::frequency);
  for (std::size_t i = 0; i < g.total(); ++i) {
    const IVec2 xi = freq_point(g, i);
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < g.total(); ++j) {
      const Vec2 x = grid_point(g, j);
      const double phase =
          -2.0 * std::numbers::pi * (x[0] * xi[0] + x[1] * xi[1]);
      acc += f[j] * std::polar(1.0, phase);
    }
    out[i] = acc / static_cast<double>(g.total());
  }
  return out;
}

inline GridFunction random_physical(const GridSpec& g, std::uint64_t seed) {
  Rng rng(mix_seed({seed, 0x74657374ull}));
  GridFunction f(g, Side::physical);
  for (auto& z : f.values()) z = rng.cnormal();
  return f;
}

inline GridFunction random_bandlimited_for_test(const GridSpec& g,
                                                double radius,
                                                std::uint64_t seed) {
  Rng rng(mix_seed({seed, 0x626c74ull}));
  GridFunction fhat(g, Side::frequency);
  for (std::size_t i = 0; i < g.total(); ++i) {
    if (freq_abs(g, freq_point(g, i)) <= radius) fhat[i] = rng.cnormal();
  }
  return inverse_transform(fhat);
}

inline GridFunction tone(const GridSpec& g, const IVec2& v) {
  GridFunction f(g, Side::physical);
  for (std::size_t i = 0; i < g.total(); ++i) {
    const Vec2 x = grid_point(g, i);
    f[i] = std::polar(1.0, 2.0 * std::numbers::pi * (x[0] * v[0] + x[1] * v[1]));
  }
  return f;
}

}  // namespace lpfield::testing

#endif

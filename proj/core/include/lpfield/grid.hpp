#ifndef LPFIELD_GRID_HPP
#define LPFIELD_GRID_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "lpfield/errors.hpp"

namespace lpfield {

using cplx = std::complex<double>;
using Vec2 = std::array<double, 2>;  // first d entries meaningful
using IVec2 = std::array<int, 2>;

/// Periodic dyadic grid on the torus [0,1)^d.
///
/// N = 2^(K+1) samples per axis, spacing 1/N; the frequency lattice is
/// {-N/2, ..., N/2-1}^d so every dyadic annulus 2^{k-1} <= |xi| <= 2^{k+1}
/// with k <= K-1 is contained in it.
struct GridSpec {
  int d = 1;  // 1 or 2
  int K = 4;  // dyadic depth

  GridSpec() = default;
  GridSpec(int d_, int K_) : d(d_), K(K_) {
    require(d == 1 || d == 2, "GridSpec: d must be 1 or 2");
    require(K >= 4, "GridSpec: K must be >= 4");
  }

  int n() const { return 1 << (K + 1); }  // samples per axis
  std::size_t total() const {
    std::size_t t = static_cast<std::size_t>(n());
    return d == 2 ? t * t : t;
  }
  bool operator==(const GridSpec& o) const { return d == o.d && K == o.K; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

// Linear index <-> per-axis indices (row-major; axis 0 major).
inline IVec2 unravel(const GridSpec& g, std::size_t idx) {
  const int n = g.n();
  if (g.d == 1) return {static_cast<int>(idx), 0};
  return {static_cast<int>(idx / static_cast<std::size_t>(n)),
          static_cast<int>(idx % static_cast<std::size_t>(n))};
}

inline std::size_t ravel(const GridSpec& g, const IVec2& iv) {
  if (g.d == 1) return static_cast<std::size_t>(iv[0]);
  return static_cast<std::size_t>(iv[0]) * static_cast<std::size_t>(g.n()) +
         static_cast<std::size_t>(iv[1]);
}

/// Physical point x in [0,1)^d for a storage index.
inline Vec2 grid_point(const GridSpec& g, std::size_t idx) {
  const IVec2 iv = unravel(g, idx);
  const double inv = 1.0 / g.n();
  return {iv[0] * inv, iv[1] * inv};
}

/// Signed frequency component for a per-axis storage index (DFT order).
inline int signed_freq(const GridSpec& g, int i) {
  return i < g.n() / 2 ? i : i - g.n();
}

/// Signed frequency vector for a storage index.
inline IVec2 freq_point(const GridSpec& g, std::size_t idx) {
  IVec2 iv = unravel(g, idx);
  iv[0] = signed_freq(g, iv[0]);
  if (g.d == 2) iv[1] = signed_freq(g, iv[1]);
  return iv;
}

inline std::size_t freq_index(const GridSpec& g, const IVec2& xi) {
  const int n = g.n();
  auto wrap = [n](int v) { return ((v % n) + n) % n; };
  IVec2 iv{wrap(xi[0]), g.d == 2 ? wrap(xi[1]) : 0};
  return ravel(g, iv);
}

inline double freq_abs(const GridSpec& g, const IVec2& xi) {
  double s = static_cast<double>(xi[0]) * xi[0];
  if (g.d == 2) s += static_cast<double>(xi[1]) * xi[1];
  return std::sqrt(s);
}

enum class Side { physical, frequency };

/// Complex-valued function sampled on the grid, on either the physical or the
/// frequency side. Frequency-side values are stored in DFT order; use
/// freq_point/freq_index for the signed lattice view.
class GridFunction {
public:
  GridFunction() = default;
  GridFunction(GridSpec spec, Side side)
      : spec_(spec), side_(side), v_(spec.total(), cplx{0.0, 0.0}) {}
  GridFunction(GridSpec spec, Side side, std::vector<cplx> values)
      : spec_(spec), side_(side), v_(std::move(values)) {
    require(v_.size() == spec_.total(), "GridFunction: value count mismatch");
  }

  const GridSpec& spec() const { return spec_; }
  Side side() const { return side_; }
  std::size_t size() const { return v_.size(); }

  cplx& operator[](std::size_t i) { return v_[i]; }
  const cplx& operator[](std::size_t i) const { return v_[i]; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  cplx& at_freq(const IVec2& xi) { return v_[freq_index(spec_, xi)]; }
  const cplx& at_freq(const IVec2& xi) const {
    return v_[freq_index(spec_, xi)];
  }

private:
  GridSpec spec_;
  Side side_ = Side::physical;
  std::vector<cplx> v_;
};

enum class Direction { forward, inverse };

/// Discrete Fourier transform with the convention
///   forward:  fhat(xi) = (1/N^d) sum_x f(x) e^{-2 pi i <x,xi>}
///   inverse:  f(x)     =         sum_xi fhat(xi) e^{+2 pi i <x,xi>}
/// so that constants have unit spectrum at xi = 0. This normalization is the
/// single source of truth for all Parseval constants in the project.
GridFunction transform(const GridFunction& f, Direction dir);

inline GridFunction forward_transform(const GridFunction& f) {
  return transform(f, Direction::forward);
}
inline GridFunction inverse_transform(const GridFunction& f) {
  return transform(f, Direction::inverse);
}

/// (1/N^d sum |f|^p)^{1/p} for p < inf, max |f| for p = inf.
double lp_norm(const GridFunction& f, double p);

/// (1/N^d) sum f(x) conj(g(x)); requires equal spec and side.
cplx inner_product(const GridFunction& f, const GridFunction& g);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(const cplx& c, const GridFunction& f);

/// max_x |f(x) - g(x)| / max_x |g(x)| (0/0 counts as 0).
double rel_max_error(const GridFunction& f, const GridFunction& g);

}  // namespace lpfield

#endif

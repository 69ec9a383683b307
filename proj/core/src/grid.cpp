#include "lpfield/grid.hpp"

#include <algorithm>
#include <cmath>

#include "lpfield/fft.hpp"
#include "lpfield/parallel.hpp"

namespace lpfield {

namespace {
int g_threads = 1;
}

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads; }

GridFunction transform(const GridFunction& f, Direction dir) {
  if (dir == Direction::forward) {
    require(f.side() == Side::physical,
            "transform: forward expects a physical-side function");
  } else {
    require(f.side() == Side::frequency,
            "transform: inverse expects a frequency-side function");
  }
  const GridSpec& g = f.spec();
  GridFunction out(g, dir == Direction::forward ? Side::frequency
                                                : Side::physical);
  detail::dft_unnormalized(g, f.values().data(), out.values().data(),
                           dir == Direction::forward ? -1 : +1);
  if (dir == Direction::forward) {
    const double scale = 1.0 / static_cast<double>(g.total());
    for (auto& z : out.values()) z *= scale;
  }
  return out;
}

double lp_norm(const GridFunction& f, double p) {
  require(f.side() == Side::physical, "lp_norm: physical side required");
  require(p > 0.0, "lp_norm: p must be positive");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : f.values()) m = std::max(m, std::abs(z));
    return m;
  }
  long double acc = 0.0L;
  for (const auto& z : f.values()) acc += std::pow(std::abs(z), (long double)p);
  acc /= static_cast<long double>(f.spec().total());
  return static_cast<double>(std::pow(acc, 1.0L / (long double)p));
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
  require(f.spec() == g.spec(), "inner_product: spec mismatch");
  require(f.side() == g.side(), "inner_product: side mismatch");
  std::complex<long double> acc{0.0L, 0.0L};
  for (std::size_t i = 0; i < f.size(); ++i) {
    acc += std::complex<long double>(f[i]) *
           std::conj(std::complex<long double>(g[i]));
  }
  acc /= static_cast<long double>(f.spec().total());
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require(a.spec() == b.spec() && a.side() == b.side(),
          "GridFunction +: spec/side mismatch");
  GridFunction r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require(a.spec() == b.spec() && a.side() == b.side(),
          "GridFunction -: spec/side mismatch");
  GridFunction r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

GridFunction operator*(const cplx& c, const GridFunction& f) {
  GridFunction r = f;
  for (auto& z : r.values()) z *= c;
  return r;
}

double rel_max_error(const GridFunction& f, const GridFunction& g) {
  require(f.spec() == g.spec(), "rel_max_error: spec mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    num = std::max(num, std::abs(f[i] - g[i]));
    den = std::max(den, std::abs(g[i]));
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return num / den;
}

}  // namespace lpfield

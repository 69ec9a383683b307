#include "lpfield/lp_decomp.hpp"

#include <algorithm>
#include <cmath>

#include "lpfield/parallel.hpp"

namespace lpfield {

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double lp_bump(double r) {
  // Plateau must return exactly 1.0 so dyadic telescoping cancels in floats.
  r = std::abs(r);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return smoothstep(2.0 - r);
}

double lp_window_radial(int k, double r) {
  if (k == 0) return lp_bump(r);
  const double s = std::ldexp(1.0, -k);  // 2^{-k}
  return lp_bump(r * s) - lp_bump(r * s * 2.0);
}

LPPartition LPPartition::build(const GridSpec& spec) {
  require(spec.K >= 4, "build_partition: K must allow at least 4 bands");
  LPPartition p(spec);
  const std::size_t total = spec.total();
  p.win_.assign(static_cast<std::size_t>(spec.K), std::vector<double>(total));
  for (std::size_t i = 0; i < total; ++i) {
    const double r = freq_abs(spec, freq_point(spec, i));
    // psi values are shared between adjacent bands so the sum over k
    // telescopes exactly to psi(2^{-(K-1)} r) in floating point.
    double prev = lp_bump(r);
    p.win_[0][i] = prev;
    for (int k = 1; k < spec.K; ++k) {
      const double cur = lp_bump(r * std::ldexp(1.0, -k));
      p.win_[static_cast<std::size_t>(k)][i] = cur - prev;
      prev = cur;
    }
  }
  return p;
}

const std::vector<double>& LPPartition::window(int k) const {
  require(k >= 0 && k < bands(), "LPPartition: band index out of range");
  return win_[static_cast<std::size_t>(k)];
}

double LPPartition::window(int k, std::size_t freq_idx) const {
  return window(k)[freq_idx];
}

GridFunction LPPartition::band_project(const GridFunction& f, int k) const {
  require(f.side() == Side::physical, "band_project: physical side required");
  require(f.spec() == spec_, "band_project: spec mismatch");
  return band_project_spectrum(forward_transform(f), k);
}

GridFunction LPPartition::band_project_spectrum(const GridFunction& fhat,
                                                int k) const {
  require(fhat.side() == Side::frequency,
          "band_project_spectrum: frequency side required");
  require(fhat.spec() == spec_, "band_project_spectrum: spec mismatch");
  const auto& w = window(k);
  GridFunction g(spec_, Side::frequency);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = w[i] * fhat[i];
  return inverse_transform(g);
}

double LPPartition::window_derivative_bound(int k, int order) const {
  require(order == 1 || order == 2, "window_derivative_bound: order in {1,2}");
  const auto& w = window(k);
  const int n = spec_.n();
  auto wrap = [n](int v) { return ((v % n) + n) % n; };
  auto val = [&](int i0, int i1) {
    IVec2 iv{wrap(i0), spec_.d == 2 ? wrap(i1) : 0};
    return w[ravel(spec_, iv)];
  };
  double m = 0.0;
  const double scale = std::ldexp(1.0, k * order);  // 2^{k|alpha|}
  for (std::size_t i = 0; i < spec_.total(); ++i) {
    const IVec2 iv = unravel(spec_, i);
    const int a = iv[0], b = iv[1];
    if (order == 1) {
      m = std::max(m, std::abs(val(a + 1, b) - val(a - 1, b)) / 2.0);
      if (spec_.d == 2)
        m = std::max(m, std::abs(val(a, b + 1) - val(a, b - 1)) / 2.0);
    } else {
      m = std::max(m, std::abs(val(a + 1, b) - 2.0 * val(a, b) + val(a - 1, b)));
      if (spec_.d == 2) {
        m = std::max(m,
                     std::abs(val(a, b + 1) - 2.0 * val(a, b) + val(a, b - 1)));
        m = std::max(m, std::abs(val(a + 1, b + 1) - val(a + 1, b - 1) -
                                 val(a - 1, b + 1) + val(a - 1, b - 1)) /
                            4.0);
      }
    }
  }
  return scale * m;
}

GridFunction peetre_maximal(const GridFunction& u, double sigma, double r,
                            double max_radius) {
  require(u.side() == Side::physical, "peetre_maximal: physical side required");
  require(sigma > 0.0, "peetre_maximal: sigma must be positive");
  require(r > 0.0, "peetre_maximal: r must be positive");
  require(max_radius > 0.0, "peetre_maximal: max_radius must be positive");
  const GridSpec& g = u.spec();
  const int n = g.n();
  const std::size_t total = g.total();

  std::vector<double> absu(total);
  for (std::size_t i = 0; i < total; ++i) absu[i] = std::abs(u[i]);

  // Weight per offset; |y| is the periodic Euclidean distance in torus
  // units. Offsets beyond max_radius get weight 0 and drop out of the sup.
  std::vector<double> weight(total);
  for (std::size_t o = 0; o < total; ++o) {
    IVec2 iv = unravel(g, o);
    auto centered = [n](int v) { return v <= n / 2 ? v : v - n; };
    double y0 = static_cast<double>(centered(iv[0])) / n;
    double y1 = g.d == 2 ? static_cast<double>(centered(iv[1])) / n : 0.0;
    const double dist = std::sqrt(y0 * y0 + y1 * y1);
    weight[o] = dist <= max_radius ? std::pow(1.0 + r * dist, -sigma) : 0.0;
  }

  GridFunction out(g, Side::physical);
  parallel_for(total, [&](std::size_t xi) {
    const IVec2 xv = unravel(g, xi);
    double m = 0.0;
    if (g.d == 1) {
      for (int o = 0; o < n; ++o) {
        const int idx = (xv[0] + o) % n;
        m = std::max(m, absu[static_cast<std::size_t>(idx)] *
                            weight[static_cast<std::size_t>(o)]);
      }
    } else {
      for (int o0 = 0; o0 < n; ++o0) {
        const std::size_t row =
            static_cast<std::size_t>((xv[0] + o0) % n) * n;
        const std::size_t wrow = static_cast<std::size_t>(o0) * n;
        for (int o1 = 0; o1 < n; ++o1) {
          const std::size_t idx = row + static_cast<std::size_t>((xv[1] + o1) % n);
          m = std::max(m, absu[idx] * weight[wrow + o1]);
        }
      }
    }
    out[xi] = m;
  });
  return out;
}

GridFunction hl_maximal(const GridFunction& u, double t) {
  require(u.side() == Side::physical, "hl_maximal: physical side required");
  require(t > 0.0, "hl_maximal: t must be positive");
  const GridSpec& g = u.spec();
  const int n = g.n();

  // Prefix sums of |u|^t over a tripled window handle the periodic wrap:
  // cube [x-h, x+h] shifted by +n stays inside [0, 3n).
  if (g.d == 1) {
    std::vector<double> pre(static_cast<std::size_t>(3 * n) + 1, 0.0);
    for (int i = 0; i < 3 * n; ++i) {
      pre[i + 1] = pre[i] + std::pow(std::abs(u[i % n]), t);
    }
    GridFunction out(g, Side::physical);
    for (int x = 0; x < n; ++x) {
      double best = 0.0;
      for (int h = 0; h <= n / 2; ++h) {
        const int side = std::min(2 * h + 1, n);
        const int lo = x - h + n;  // shifted into the doubled window
        const double sum = pre[lo + side] - pre[lo];
        best = std::max(best, sum / side);
      }
      out[static_cast<std::size_t>(x)] = std::pow(best, 1.0 / t);
    }
    return out;
  }

  const int m = 3 * n;
  std::vector<double> pre(static_cast<std::size_t>(m + 1) * (m + 1), 0.0);
  auto P = [&](int i, int j) -> double& {
    return pre[static_cast<std::size_t>(i) * (m + 1) + j];
  };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const std::size_t src = static_cast<std::size_t>(i % n) * n + (j % n);
      P(i + 1, j + 1) = std::pow(std::abs(u[src]), t) + P(i, j + 1) +
                        P(i + 1, j) - P(i, j);
    }
  }
  GridFunction out(g, Side::physical);
  parallel_for(g.total(), [&](std::size_t xi) {
    const IVec2 xv = unravel(g, xi);
    double best = 0.0;
    for (int h = 0; h <= n / 2; ++h) {
      const int side = std::min(2 * h + 1, n);
      const int lo0 = xv[0] - h + n, lo1 = xv[1] - h + n;
      const double sum = P(lo0 + side, lo1 + side) - P(lo0, lo1 + side) -
                         P(lo0 + side, lo1) + P(lo0, lo1);
      best = std::max(best, sum / (static_cast<double>(side) * side));
    }
    out[xi] = std::pow(best, 1.0 / t);
  });
  return out;
}

}  // namespace lpfield

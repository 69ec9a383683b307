#include "lpfield/psido.hpp"

#include <cmath>
#include <numbers>

#include "lpfield/fft.hpp"
#include "lpfield/parallel.hpp"
#include "lpfield/rng.hpp"

namespace lpfield {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e^{2 pi i <x, xi>} via a shared length-N twiddle table:
// <x, xi> = (n0 xi0 + n1 xi1)/N, so the phase index is (n.xi) mod N.
struct Twiddle {
  int n;
  std::vector<cplx> t;

  explicit Twiddle(int n_) : n(n_), t(static_cast<std::size_t>(n_)) {
    for (int m = 0; m < n; ++m) {
      t[static_cast<std::size_t>(m)] = std::polar(1.0, kTwoPi * m / n);
    }
  }
  cplx at(long phase_num) const {  // e^{2 pi i phase_num / n}
    long r = phase_num % n;
    if (r < 0) r += n;
    return t[static_cast<std::size_t>(r)];
  }
};

long dot_phase(const GridSpec& g, const IVec2& nv, const IVec2& xiv) {
  long p = static_cast<long>(nv[0]) * xiv[0];
  if (g.d == 2) p += static_cast<long>(nv[1]) * xiv[1];
  return p;
}

}  // namespace

GridFunction apply_multiplier_path(const Symbol& a, const GridFunction& f) {
  const GridSpec& g = f.spec();
  GridFunction fhat = forward_transform(f);
  for (std::size_t i = 0; i < fhat.size(); ++i) {
    const IVec2 xiv = freq_point(g, i);
    fhat[i] *= a({0.0, 0.0}, {(double)xiv[0], (double)xiv[1]});
  }
  return inverse_transform(fhat);
}

GridFunction apply_dense_path(const Symbol& a, const GridFunction& f) {
  const GridSpec& g = f.spec();
  const std::size_t total = g.total();
  const GridFunction fhat = forward_transform(f);
  const Twiddle tw(g.n());

  // Precompute fhat and the signed frequency vectors once.
  std::vector<IVec2> freqs(total);
  for (std::size_t i = 0; i < total; ++i) freqs[i] = freq_point(g, i);

  GridFunction out(g, Side::physical);
  parallel_for(total, [&](std::size_t x_idx) {
    const IVec2 nv = unravel(g, x_idx);
    const Vec2 x = grid_point(g, x_idx);
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < total; ++i) {
      const IVec2& xiv = freqs[i];
      const cplx av = a(x, {(double)xiv[0], (double)xiv[1]});
      acc += av * fhat[i] * tw.at(dot_phase(g, nv, xiv));
    }
    out[x_idx] = acc;
  });
  return out;
}

GridFunction apply(const Symbol& a, const GridFunction& f) {
  require(f.side() == Side::physical, "apply: physical side required");
  if (a.x_independent()) return apply_multiplier_path(a, f);
  return apply_dense_path(a, f);
}

GridFunction apply_adjoint(const Symbol& a, const GridFunction& g) {
  require(g.side() == Side::physical, "apply_adjoint: physical side required");
  const GridSpec& spec = g.spec();
  const std::size_t total = spec.total();
  const Twiddle tw(spec.n());
  // hhat(xi) = (1/N^d) sum_x conj(a(x, xi)) g(x) e^{-2 pi i <x, xi>}
  GridFunction hhat(spec, Side::frequency);
  parallel_for(total, [&](std::size_t i) {
    const IVec2 xiv = freq_point(spec, i);
    const Vec2 xi{(double)xiv[0], (double)xiv[1]};
    cplx acc{0.0, 0.0};
    for (std::size_t x_idx = 0; x_idx < total; ++x_idx) {
      const IVec2 nv = unravel(spec, x_idx);
      acc += std::conj(a(grid_point(spec, x_idx), xi)) * g[x_idx] *
             tw.at(-dot_phase(spec, nv, xiv));
    }
    hhat[i] = acc / static_cast<double>(total);
  });
  return inverse_transform(hhat);
}

GridFunction apply_compound(const CompoundSymbol& A, const GridFunction& f) {
  require(f.side() == Side::physical, "apply_compound: physical side required");
  const GridSpec& g = f.spec();
  const std::size_t total = g.total();

  if (A.y_independent()) {
    // Collapses to T_a with a(x, xi) = A(x, ., xi).
    Symbol a("y-collapse(" + A.name() + ")",
             SymbolClass{A.cls().m, A.cls().rho, A.cls().delta1},
             A.x_independent(),
             [A](const Vec2& x, const Vec2& xi) { return A(x, x, xi); });
    return apply(a, f);
  }

  if (A.x_independent()) {
    // ghat(xi) = (1/N^d) sum_y A(., y, xi) f(y) e^{-2 pi i <y, xi>}, then an
    // inverse transform. O(N^{2d}).
    const Twiddle tw(g.n());
    GridFunction ghat(g, Side::frequency);
    parallel_for(total, [&](std::size_t i) {
      const IVec2 xiv = freq_point(g, i);
      const Vec2 xi{(double)xiv[0], (double)xiv[1]};
      cplx acc{0.0, 0.0};
      for (std::size_t y_idx = 0; y_idx < total; ++y_idx) {
        const IVec2 nv = unravel(g, y_idx);
        acc += A({0.0, 0.0}, grid_point(g, y_idx), xi) * f[y_idx] *
               tw.at(-dot_phase(g, nv, xiv));
      }
      ghat[i] = acc / static_cast<double>(total);
    });
    return inverse_transform(ghat);
  }

  return apply_compound_dense(A, f);
}

GridFunction apply_compound_dense(const CompoundSymbol& A,
                                  const GridFunction& f) {
  require(f.side() == Side::physical,
          "apply_compound_dense: physical side required");
  const GridSpec& g = f.spec();
  const std::size_t total = g.total();
  const Twiddle tw(g.n());
  GridFunction out(g, Side::physical);
  parallel_for(total, [&](std::size_t x_idx) {
    const IVec2 xv = unravel(g, x_idx);
    const Vec2 x = grid_point(g, x_idx);
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < total; ++i) {
      const IVec2 xiv = freq_point(g, i);
      const Vec2 xi{(double)xiv[0], (double)xiv[1]};
      cplx inner{0.0, 0.0};
      for (std::size_t y_idx = 0; y_idx < total; ++y_idx) {
        const IVec2 yv = unravel(g, y_idx);
        IVec2 dv{xv[0] - yv[0], xv[1] - yv[1]};
        inner += A(x, grid_point(g, y_idx), xi) * f[y_idx] *
                 tw.at(dot_phase(g, dv, xiv));
      }
      acc += inner;
    }
    out[x_idx] = acc / static_cast<double>(total);
  });
  return out;
}

GridFunction compose_with_multiplier(double s1, const Symbol& a, double s2,
                                     const GridFunction& f) {
  const GridFunction step1 = apply(make_ns(s2), f);
  const GridFunction step2 = apply(a, step1);
  return apply(make_ns(s1), step2);
}

BandKernel band_kernel(const ParadiffSplit& split, int k) {
  require(k >= 0 && k < split.bands(), "band_kernel: band index out of range");
  const GridSpec& g = split.spec();
  const std::size_t total = g.total();
  const std::vector<cplx> ak = split.diagonal_symbol(k);

  BandKernel kernel;
  kernel.k = k;
  kernel.spec = g;
  kernel.m.resize(total * total);
  // K(x, y) = sum_xi a_k(x, xi) e^{2 pi i <x - y, xi>}: one unnormalized
  // inverse DFT of the row over xi, indexed by the displacement z = x - y.
  std::vector<cplx> row(total), disp(total);
  const int n = g.n();
  for (std::size_t x_idx = 0; x_idx < total; ++x_idx) {
    for (std::size_t i = 0; i < total; ++i) row[i] = ak[x_idx * total + i];
    detail::dft_unnormalized(g, row.data(), disp.data(), +1);
    const IVec2 xv = unravel(g, x_idx);
    for (std::size_t y_idx = 0; y_idx < total; ++y_idx) {
      const IVec2 yv = unravel(g, y_idx);
      IVec2 zv{(xv[0] - yv[0] + n) % n,
               g.d == 2 ? (xv[1] - yv[1] + n) % n : 0};
      kernel.m[x_idx * total + y_idx] = disp[ravel(g, zv)];
    }
  }
  return kernel;
}

GridFunction apply_kernel(const BandKernel& kernel, const GridFunction& f) {
  require(f.spec() == kernel.spec, "apply_kernel: spec mismatch");
  require(f.side() == Side::physical, "apply_kernel: physical side required");
  const std::size_t total = kernel.spec.total();
  GridFunction out(kernel.spec, Side::physical);
  parallel_for(total, [&](std::size_t x) {
    cplx acc{0.0, 0.0};
    for (std::size_t y = 0; y < total; ++y) {
      acc += kernel.m[x * total + y] * f[y];
    }
    out[x] = acc / static_cast<double>(total);
  });
  return out;
}

double kernel_max_abs(const BandKernel& kernel) {
  double m = 0.0;
  for (const auto& z : kernel.m) m = std::max(m, std::abs(z));
  return m;
}

std::vector<std::pair<double, double>> kernel_radial_profile(
    const BandKernel& kernel, int bins) {
  const GridSpec& g = kernel.spec;
  const std::size_t total = g.total();
  const int n = g.n();
  const double rmax = 0.5 * std::sqrt(static_cast<double>(g.d));
  std::vector<double> best(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> dist(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t x = 0; x < total; ++x) {
    const IVec2 xv = unravel(g, x);
    for (std::size_t y = 0; y < total; ++y) {
      const IVec2 yv = unravel(g, y);
      auto centered = [n](int v) {
        int r = ((v % n) + n) % n;
        return r <= n / 2 ? r : r - n;
      };
      const double z0 = static_cast<double>(centered(xv[0] - yv[0])) / n;
      const double z1 =
          g.d == 2 ? static_cast<double>(centered(xv[1] - yv[1])) / n : 0.0;
      const double r = std::sqrt(z0 * z0 + z1 * z1);
      int b = static_cast<int>(r / rmax * bins);
      b = std::min(b, bins - 1);
      const double v = std::abs(kernel.m[x * total + y]);
      if (v > best[static_cast<std::size_t>(b)]) {
        best[static_cast<std::size_t>(b)] = v;
        dist[static_cast<std::size_t>(b)] = r;
      }
    }
  }
  std::vector<std::pair<double, double>> out;
  for (int b = 0; b < bins; ++b) {
    if (best[static_cast<std::size_t>(b)] > 0.0) {
      out.emplace_back((b + 0.5) * rmax / bins, best[static_cast<std::size_t>(b)]);
    }
  }
  return out;
}

double l2_operator_norm_estimate(const Symbol& a, const GridSpec& spec,
                                 std::uint64_t seed, int max_iters,
                                 double rel_tol) {
  Rng rng(mix_seed({seed, 0x6f706e6full}));
  GridFunction v(spec, Side::physical);
  for (auto& z : v.values()) z = rng.cnormal();
  double norm = lp_norm(v, 2.0);
  require(norm > 0.0, "l2_operator_norm_estimate: zero start vector");
  for (auto& z : v.values()) z /= norm;

  double est = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    GridFunction w = apply_adjoint(a, apply(a, v));
    const double wn = lp_norm(w, 2.0);
    if (wn == 0.0) return 0.0;
    const double next = std::sqrt(wn);  // sqrt of largest eigenvalue of T*T
    for (auto& z : w.values()) z /= wn;
    v = std::move(w);
    if (it > 0 && std::abs(next - est) <= rel_tol * std::max(next, 1e-300)) {
      est = next;
      break;
    }
    est = next;
  }
  return est;
}

}  // namespace lpfield

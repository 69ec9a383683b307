#include "lpfield/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpfield/fft.hpp"
#include "lpfield/rng.hpp"

namespace lpfield {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double vec_abs(const Vec2& v, int d) {
  return d == 2 ? std::hypot(v[0], v[1]) : std::abs(v[0]);
}

}  // namespace

Symbol make_cmrho(double m, double rho) {
  require(rho > 0.0 && rho < 1.0, "make_cmrho: rho must lie in (0,1)");
  auto eval = [m, rho](const Vec2&, const Vec2& xi) -> cplx {
    const double r = std::hypot(xi[0], xi[1]);
    // Ramp cut below the first lattice shell; lattice values unchanged.
    const double cut = smoothstep((r - 0.25) / 0.25);
    const double phase = -kTwoPi * cut * std::pow(r, 1.0 - rho);
    const double amp = std::pow(1.0 + r * r, m / 2.0);
    return std::polar(amp, phase);
  };
  return Symbol("cmrho(m=" + std::to_string(m) + ",rho=" + std::to_string(rho) +
                    ")",
                SymbolClass{m, rho, 0.0}, true, eval);
}

Symbol make_ns(double s) {
  auto eval = [s](const Vec2&, const Vec2& xi) -> cplx {
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1];
    return {std::pow(1.0 + r2, s / 2.0), 0.0};
  };
  return Symbol("ns(s=" + std::to_string(s) + ")", SymbolClass{s, 1.0, 0.0},
                true, eval);
}

Symbol make_tone(const IVec2& v, int d) {
  const double v0 = v[0], v1 = d == 2 ? v[1] : 0;
  auto eval = [v0, v1](const Vec2& x, const Vec2&) -> cplx {
    return std::polar(1.0, kTwoPi * (x[0] * v0 + x[1] * v1));
  };
  return Symbol("tone(v0=" + std::to_string(v[0]) +
                    (d == 2 ? ",v1=" + std::to_string(v[1]) : "") + ")",
                SymbolClass{0.0, 1.0, 0.0}, false, eval);
}

Symbol make_xmod_cmrho(double m, double rho, double decay, double beta, int J,
                       std::uint64_t seed, int d) {
  require(J >= 1, "make_xmod_cmrho: J must be >= 1");
  require(decay > 1.0, "make_xmod_cmrho: decay must exceed 1");
  struct Mode {
    double e0, e1, amp, phase;
  };
  auto modes = std::make_shared<std::vector<Mode>>();
  Rng rng(mix_seed({seed, 0x786d6f64ull}));
  double total = 0.0;
  if (d == 1) {
    for (int h = 1; h <= J; ++h) {
      const double amp = std::pow(1.0 + h, -decay);
      modes->push_back({(double)h, 0.0, amp, rng.uniform(0.0, kTwoPi)});
      total += amp;
    }
  } else {
    for (int h0 = 0; h0 <= J; ++h0) {
      for (int h1 = (h0 == 0 ? 1 : -J); h1 <= J; ++h1) {
        const double amp = std::pow(1.0 + std::hypot((double)h0, (double)h1),
                                    -decay);
        modes->push_back({(double)h0, (double)h1, amp,
                          rng.uniform(0.0, kTwoPi)});
        total += amp;
      }
    }
  }
  for (auto& md : *modes) md.amp /= total;

  Symbol base = make_cmrho(m, rho);
  auto eval = [base, modes, beta](const Vec2& x, const Vec2& xi) -> cplx {
    double mod = 0.0;
    for (const auto& md : *modes) {
      mod += md.amp * std::cos(kTwoPi * (x[0] * md.e0 + x[1] * md.e1) +
                               md.phase);
    }
    return base(x, xi) * (1.0 + beta * mod);
  };
  return Symbol("xmod(m=" + std::to_string(m) + ",rho=" + std::to_string(rho) +
                    ",J=" + std::to_string(J) + ")",
                SymbolClass{m, rho, rho}, false, eval);
}

Symbol symbol_product(const Symbol& a, const Symbol& b) {
  SymbolClass cls{a.cls().m + b.cls().m, std::min(a.cls().rho, b.cls().rho),
                  std::max(a.cls().delta, b.cls().delta)};
  auto eval = [a, b](const Vec2& x, const Vec2& xi) { return a(x, xi) * b(x, xi); };
  return Symbol("product(" + a.name() + "," + b.name() + ")", cls,
                a.x_independent() && b.x_independent(), eval);
}

double SeminormTable::max_value() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.value);
  return m;
}

const SeminormEntry& SeminormTable::at(const IVec2& alpha,
                                       const IVec2& beta) const {
  for (const auto& e : entries) {
    if (e.alpha == alpha && e.beta == beta) return e;
  }
  throw ContractError("SeminormTable: no such entry");
}

namespace {

// 1d central-difference stencil of given order: offsets (in steps) + weights
// (step factor applied by caller).
std::vector<std::pair<int, double>> stencil1d(int order) {
  switch (order) {
    case 0:
      return {{0, 1.0}};
    case 1:
      return {{-1, -0.5}, {1, 0.5}};
    case 2:
      return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
    default:
      throw ContractError("seminorm_estimate: derivative order > 2");
  }
}

std::vector<IVec2> multi_indices(int d, int max_total) {
  std::vector<IVec2> out;
  for (int a0 = 0; a0 <= max_total; ++a0) {
    if (d == 1) {
      out.push_back({a0, 0});
    } else {
      for (int a1 = 0; a0 + a1 <= max_total; ++a1) out.push_back({a0, a1});
    }
  }
  return out;
}

double diff_abs(const Symbol& a, int d, const Vec2& x, const Vec2& xi,
                const IVec2& alpha, const IVec2& beta, double hx, double hxi) {
  // Tensor-product central differences; accumulate sum over all stencil
  // corners of weighted evaluations.
  const auto sa0 = stencil1d(alpha[0]);
  const auto sa1 = stencil1d(d == 2 ? alpha[1] : 0);
  const auto sb0 = stencil1d(beta[0]);
  const auto sb1 = stencil1d(d == 2 ? beta[1] : 0);
  cplx acc{0.0, 0.0};
  for (const auto& [oa0, wa0] : sa0)
    for (const auto& [oa1, wa1] : sa1)
      for (const auto& [ob0, wb0] : sb0)
        for (const auto& [ob1, wb1] : sb1) {
          Vec2 xx{x[0] + ob0 * hx, x[1] + ob1 * hx};
          Vec2 xxi{xi[0] + oa0 * hxi, xi[1] + oa1 * hxi};
          acc += wa0 * wa1 * wb0 * wb1 * a(xx, xxi);
        }
  const int atot = alpha[0] + (d == 2 ? alpha[1] : 0);
  const int btot = beta[0] + (d == 2 ? beta[1] : 0);
  return std::abs(acc) / std::pow(hxi, atot) / std::pow(hx, btot);
}

std::vector<Vec2> xi_samples(const GridSpec& g) {
  std::vector<Vec2> out;
  const int cap = g.n() / 2 - 3;
  std::vector<int> radii{0, 1, 2, 3, 4};
  for (int r = 6; r <= cap; r = r * 3 / 2 + 1) radii.push_back(r);
  if (radii.back() < cap) radii.push_back(cap);
  for (int r : radii) {
    out.push_back({(double)r, 0.0});
    out.push_back({-(double)r, 0.0});
    if (g.d == 2 && r > 0) {
      out.push_back({0.0, (double)r});
      const double diag = r / std::numbers::sqrt2;
      out.push_back({diag, diag});
    }
  }
  return out;
}

std::vector<Vec2> x_samples(const GridSpec& g) {
  std::vector<Vec2> out;
  const int n = g.n();
  const int stride = std::max(1, n / 8);
  for (int i0 = 0; i0 < n; i0 += stride) {
    if (g.d == 1) {
      out.push_back({(double)i0 / n, 0.0});
    } else {
      for (int i1 = 0; i1 < n; i1 += stride)
        out.push_back({(double)i0 / n, (double)i1 / n});
    }
  }
  return out;
}

}  // namespace

SeminormTable seminorm_estimate(const Symbol& a, const GridSpec& spec,
                                int alpha_max, int beta_max,
                                std::optional<SymbolClass> as_class,
                                bool refine) {
  const SymbolClass cls = as_class.value_or(a.cls());
  const double hx = 1.0 / spec.n();
  const auto xs = x_samples(spec);
  const auto xis = xi_samples(spec);
  SeminormTable table;
  for (const IVec2& alpha : multi_indices(spec.d, alpha_max)) {
    for (const IVec2& beta : multi_indices(spec.d, beta_max)) {
      SeminormEntry e;
      e.alpha = alpha;
      e.beta = beta;
      const int atot = alpha[0] + (spec.d == 2 ? alpha[1] : 0);
      const int btot = beta[0] + (spec.d == 2 ? beta[1] : 0);
      for (const Vec2& x : xs) {
        for (const Vec2& xi : xis) {
          const double norm =
              std::pow(1.0 + vec_abs(xi, spec.d),
                       -cls.m + cls.rho * atot - cls.delta * btot);
          e.value = std::max(
              e.value, norm * diff_abs(a, spec.d, x, xi, alpha, beta, hx, 1.0));
          if (refine) {
            e.value_refined = std::max(
                e.value_refined,
                norm * diff_abs(a, spec.d, x, xi, alpha, beta, hx / 2, 0.5));
          }
        }
      }
      if (!refine) e.value_refined = e.value;
      table.entries.push_back(e);
    }
  }
  return table;
}

double truncation_cutoff(const Vec2& x_centered, double tau) {
  const double scale = std::exp2(tau);
  const double r = std::hypot(x_centered[0], x_centered[1]) / scale;
  if (r <= 0.25) return 1.0;
  if (r >= 0.49) return 0.0;
  return smoothstep((0.49 - r) / 0.24);
}

Symbol truncate(const Symbol& a, double tau) {
  require(tau >= 0.0, "truncate: tau must be nonnegative");
  auto eval = [a, tau](const Vec2& x, const Vec2& xi) -> cplx {
    Vec2 xc{x[0] - std::round(x[0]), x[1] - std::round(x[1])};
    return a(x, xi) * truncation_cutoff(xc, tau);
  };
  return Symbol("trunc(tau=" + std::to_string(tau) + "," + a.name() + ")",
                a.cls(), false, eval);
}

ParadiffSplit paradiff_split(const Symbol& a, const LPPartition& P) {
  const GridSpec& g = P.spec();
  ParadiffSplit sp(g, P, a.cls());
  const std::size_t total = g.total();
  // Dense x-spectrum storage: N^d x N^d complex. Keeps d = 2 at K <= 5 and
  // d = 1 at K <= 11.
  require(total * total * sizeof(cplx) <= (std::size_t(3) << 28),
          "paradiff_split: grid too large for the dense x-spectrum table");
  sp.xspec_.assign(total * total, cplx{0.0, 0.0});
  std::vector<cplx> col(total), out(total);
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t xi_idx = 0; xi_idx < total; ++xi_idx) {
    const IVec2 xiv = freq_point(g, xi_idx);
    const Vec2 xi{(double)xiv[0], (double)xiv[1]};
    for (std::size_t x_idx = 0; x_idx < total; ++x_idx) {
      col[x_idx] = a(grid_point(g, x_idx), xi);
    }
    detail::dft_unnormalized(g, col.data(), out.data(), -1);
    for (std::size_t e = 0; e < total; ++e) {
      sp.xspec_[xi_idx * total + e] = out[e] * scale;
    }
  }
  return sp;
}

std::vector<cplx> ParadiffSplit::assemble(
    const std::function<bool(int j, int k)>& pick) const {
  const std::size_t total = spec_.total();
  const int K = bands();
  std::vector<cplx> values(total * total);
  std::vector<cplx> col(total), phys(total);
  for (std::size_t xi_idx = 0; xi_idx < total; ++xi_idx) {
    // omega_k weights at this xi, combined over picked (j,k) pairs per eta.
    std::vector<double> wk(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) wk[k] = part_.window(k, xi_idx);
    for (std::size_t e = 0; e < total; ++e) {
      double w = 0.0;
      for (int j = 0; j < K; ++j) {
        const double wj = part_.window(j, e);
        if (wj == 0.0) continue;
        for (int k = 0; k < K; ++k) {
          if (wk[k] != 0.0 && pick(j, k)) w += wj * wk[k];
        }
      }
      col[e] = w * xspec_[xi_idx * total + e];
    }
    detail::dft_unnormalized(spec_, col.data(), phys.data(), +1);
    for (std::size_t x = 0; x < total; ++x) {
      values[x * total + xi_idx] = phys[x];
    }
  }
  return values;
}

std::vector<cplx> ParadiffSplit::partial_symbol(int which) const {
  require(which >= 1 && which <= 3, "partial_symbol: which in {1,2,3}");
  if (which == 1) return assemble([](int j, int k) { return j - k >= 3; });
  if (which == 2) return assemble([](int j, int k) { return std::abs(j - k) <= 2; });
  return assemble([](int j, int k) { return k - j >= 3; });
}

std::vector<cplx> ParadiffSplit::component(int j, int k) const {
  require(j >= 0 && j < bands() && k >= 0 && k < bands(),
          "component: band index out of range");
  return assemble([j, k](int jj, int kk) { return jj == j && kk == k; });
}

std::vector<cplx> ParadiffSplit::diagonal_symbol(int k) const {
  require(k >= 0 && k < bands(), "diagonal_symbol: band index out of range");
  return assemble([k](int j, int kk) { return kk == k && std::abs(j - k) <= 2; });
}

std::vector<cplx> ParadiffSplit::low_symbol(int k) const {
  require(k >= 0 && k < bands(), "low_symbol: band index out of range");
  return assemble([k](int j, int kk) { return kk == k && j <= k - 3; });
}

Symbol ParadiffSplit::low_symbol_as_symbol(int k) const {
  auto values = std::make_shared<std::vector<cplx>>(low_symbol(k));
  // Per the split's role, b_k belongs to the (rho, rho) class of its source.
  SymbolClass cls{cls_.m, cls_.rho, cls_.rho};
  return table_symbol("b_" + std::to_string(k), cls, spec_, values);
}

CompoundSymbol compound_adjoint(const Symbol& a) {
  CompoundSymbol::Class cls{a.cls().m, a.cls().rho, 0.0, a.cls().delta};
  const bool y_indep = a.x_independent();
  auto eval = [a](const Vec2&, const Vec2& y, const Vec2& xi) {
    return std::conj(a(y, xi));
  };
  return CompoundSymbol("adjoint(" + a.name() + ")", cls, true, y_indep, eval);
}

Symbol table_symbol(std::string name, SymbolClass cls, const GridSpec& spec,
                    std::shared_ptr<const std::vector<cplx>> values) {
  require(values && values->size() == spec.total() * spec.total(),
          "table_symbol: value table size mismatch");
  const GridSpec g = spec;
  auto eval = [g, values](const Vec2& x, const Vec2& xi) -> cplx {
    const int n = g.n();
    auto to_x_index = [&](double v) {
      const double scaled = v * n;
      const double r = std::round(scaled);
      require(std::abs(scaled - r) < 1e-9,
              "table_symbol: off-lattice x evaluation");
      return ((static_cast<long>(r) % n) + n) % n;
    };
    auto to_xi_index = [&](double v) {
      const double r = std::round(v);
      require(std::abs(v - r) < 1e-9,
              "table_symbol: off-lattice xi evaluation");
      return static_cast<int>(r);
    };
    IVec2 xiv{to_xi_index(xi[0]), g.d == 2 ? to_xi_index(xi[1]) : 0};
    IVec2 xv{static_cast<int>(to_x_index(x[0])),
             g.d == 2 ? static_cast<int>(to_x_index(x[1])) : 0};
    return (*values)[ravel(g, xv) * g.total() + freq_index(g, xiv)];
  };
  return Symbol(std::move(name), cls, false, eval);
}

Symbol materialize_symbol(const Symbol& a, const GridSpec& spec,
                          std::size_t budget_bytes) {
  const std::size_t total = spec.total();
  if (a.x_independent() || total * total * sizeof(cplx) > budget_bytes) {
    return a;
  }
  auto values = std::make_shared<std::vector<cplx>>(total * total);
  for (std::size_t x = 0; x < total; ++x) {
    const Vec2 xv = grid_point(spec, x);
    for (std::size_t i = 0; i < total; ++i) {
      const IVec2 xiv = freq_point(spec, i);
      (*values)[x * total + i] = a(xv, {(double)xiv[0], (double)xiv[1]});
    }
  }
  return table_symbol("table(" + a.name() + ")", a.cls(), spec,
                      std::move(values));
}

ReduceResult reduce_compound(const CompoundSymbol& A, const GridSpec& spec,
                             std::vector<double> eps_schedule) {
  require(eps_schedule.size() >= 3,
          "reduce_compound: schedule needs at least 3 entries");
  for (std::size_t i = 1; i < eps_schedule.size(); ++i) {
    require(eps_schedule[i] > 0.0 && eps_schedule[i] < eps_schedule[i - 1],
            "reduce_compound: schedule must be decreasing and positive");
  }
  const std::size_t total = spec.total();
  const int n = spec.n();

  // Centered displacement and its squared torus norm per offset index.
  std::vector<double> disp2(total);
  for (std::size_t o = 0; o < total; ++o) {
    IVec2 iv = unravel(spec, o);
    auto centered = [n](int v) { return v <= n / 2 ? v : v - n; };
    const double y0 = static_cast<double>(centered(iv[0])) / n;
    const double y1 =
        spec.d == 2 ? static_cast<double>(centered(iv[1])) / n : 0.0;
    disp2[o] = y0 * y0 + y1 * y1;
  }

  // x-independent amplitudes (the adjoint case) admit a (y, xi) lattice
  // table, replacing per-point evaluator calls with lookups.
  std::vector<cplx> atab;
  if (A.x_independent()) {
    atab.resize(total * total);
    for (std::size_t y = 0; y < total; ++y) {
      const Vec2 yv = grid_point(spec, y);
      for (std::size_t i = 0; i < total; ++i) {
        const IVec2 fv = freq_point(spec, i);
        atab[y * total + i] = A({0.0, 0.0}, yv, {(double)fv[0], (double)fv[1]});
      }
    }
  }

  std::vector<std::vector<cplx>> stages;
  for (double eps : eps_schedule) {
    const double c = std::numbers::pi * eps * eps;
    std::vector<double> wy(total);
    for (std::size_t o = 0; o < total; ++o) wy[o] = std::exp(-c * disp2[o]);
    // W_eta lookup by integer squared norm of the lattice difference.
    const long max_s2 = 2L * (2L * n) * (2L * n);
    std::vector<double> weta(static_cast<std::size_t>(max_s2) + 1);
    for (long s = 0; s <= max_s2; ++s) weta[s] = std::exp(-c * s);

    std::vector<cplx> table(total * total);
    std::vector<cplx> g_col(total), g_hat(total);
    std::vector<cplx> Gmat(total * total);
    const double scale = 1.0 / static_cast<double>(total);
    for (std::size_t x_idx = 0; x_idx < total; ++x_idx) {
      const IVec2 xiv = unravel(spec, x_idx);
      const Vec2 x = grid_point(spec, x_idx);
      for (std::size_t xi_idx = 0; xi_idx < total; ++xi_idx) {
        const IVec2 fv = freq_point(spec, xi_idx);
        const Vec2 xi{(double)fv[0], (double)fv[1]};
        for (std::size_t o = 0; o < total; ++o) {
          const IVec2 ov = unravel(spec, o);
          IVec2 yv{(xiv[0] - ov[0] + n) % n,
                   spec.d == 2 ? (xiv[1] - ov[1] + n) % n : 0};
          const std::size_t y_idx = ravel(spec, yv);
          const cplx av = atab.empty()
                              ? A(x, grid_point(spec, y_idx), xi)
                              : atab[y_idx * total + xi_idx];
          g_col[o] = av * wy[o];
        }
        detail::dft_unnormalized(spec, g_col.data(), g_hat.data(), -1);
        for (std::size_t r = 0; r < total; ++r) {
          Gmat[xi_idx * total + r] = g_hat[r] * scale;
        }
      }
      for (std::size_t nu_idx = 0; nu_idx < total; ++nu_idx) {
        const IVec2 nuv = freq_point(spec, nu_idx);
        cplx acc{0.0, 0.0};
        for (std::size_t xi_idx = 0; xi_idx < total; ++xi_idx) {
          const IVec2 fv = freq_point(spec, xi_idx);
          const long d0 = nuv[0] - fv[0];
          const long d1 = spec.d == 2 ? nuv[1] - fv[1] : 0;
          const long s2 = d0 * d0 + d1 * d1;
          const double w = weta[static_cast<std::size_t>(s2)];
          if (w == 0.0) continue;
          IVec2 dv{static_cast<int>(d0), static_cast<int>(d1)};
          acc += w * Gmat[xi_idx * total + freq_index(spec, dv)];
        }
        table[x_idx * total + nu_idx] = acc;
      }
    }
    stages.push_back(std::move(table));
  }

  ReduceResult res;
  res.eps = eps_schedule;
  for (std::size_t i = 0; i + 1 < stages.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < stages[i].size(); ++j) {
      d = std::max(d, std::abs(stages[i + 1][j] - stages[i][j]));
    }
    res.diffs.push_back(d);
  }
  for (std::size_t i = 1; i < res.diffs.size(); ++i) {
    if (!(res.diffs[i] < res.diffs[i - 1])) {
      std::string trace = "eps:";
      for (double e : res.eps) trace += " " + std::to_string(e);
      trace += "; diffs:";
      for (double d : res.diffs) trace += " " + std::to_string(d);
      throw DiagnosticError("reduce_compound: schedule not converging", trace);
    }
  }

  // Neville extrapolation to eps^2 -> 0, pointwise over the table.
  const std::size_t m = stages.size();
  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i) t[i] = eps_schedule[i] * eps_schedule[i];
  std::vector<std::vector<cplx>> tab = stages;
  std::vector<cplx> prev_best = tab[m - 2];  // order m-2 estimate, updated below
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = 0; i + j < m; ++i) {
      for (std::size_t idx = 0; idx < tab[i].size(); ++idx) {
        tab[i][idx] = (tab[i + 1][idx] * t[i] - tab[i][idx] * t[i + j]) /
                      (t[i] - t[i + j]);
      }
    }
    if (j == m - 2) prev_best = tab[1];
  }
  double err = 0.0;
  for (std::size_t idx = 0; idx < tab[0].size(); ++idx) {
    err = std::max(err, std::abs(tab[0][idx] - prev_best[idx]));
  }
  res.err_estimate = err;

  auto values = std::make_shared<std::vector<cplx>>(std::move(tab[0]));
  SymbolClass cls{A.cls().m, A.cls().rho,
                  std::max(A.cls().delta1, A.cls().delta2)};
  res.symbol = table_symbol("reduced(" + A.name() + ")", cls, spec, values);
  return res;
}

}  // namespace lpfield

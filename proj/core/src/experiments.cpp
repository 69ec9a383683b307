#include "lpfield/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpfield/rng.hpp"

namespace lpfield {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kSqrtHalf = std::sqrt(0.5);
const double kSqrtTwo = std::sqrt(2.0);
}  // namespace

double space_norm(const GridFunction& f, const LPPartition& P,
                  const SpaceParams& params) {
  if (params.scale == Scale::F && std::isinf(params.p)) {
    return f_infty_norm(f, P, params.q, params.s);
  }
  return f_space_norm(f, P, params);
}

double eta_hat_profile(double r) {
  r = std::abs(r);
  const double rise = smoothstep((r - 0.15) / (kSqrtHalf - 0.15));
  const double fall = smoothstep((1.45 - r) / (1.45 - kSqrtTwo));
  return rise * fall;
}

double eta_tilde_hat_profile(double r) {
  r = std::abs(r);
  if (r <= 1.45) return 1.0;
  return smoothstep((2.0 - r) / 0.55);
}

Symbol make_sk(int k, double m, double rho, const GridSpec& spec) {
  require(k >= 1, "make_sk: k must be >= 1");
  require(rho > 0.0 && rho < 1.0, "make_sk: rho must lie in (0,1)");
  // supp eta_hat(2^{-k}.) reaches 1.9 * 2^k; it must fit inside the lattice.
  require(1.9 * std::exp2(k) <= std::exp2(spec.K),
          "make_sk: band exceeds grid resolution");
  const double amp = std::exp2(m * k);
  const double scale = std::exp2(-k);
  auto eval = [amp, scale, rho](const Vec2&, const Vec2& xi) -> cplx {
    const double r = std::hypot(xi[0], xi[1]);
    const double w = eta_hat_profile(r * scale);
    if (w == 0.0) return {0.0, 0.0};
    return std::polar(amp * w, kTwoPi * std::pow(r, 1.0 - rho));
  };
  return Symbol("sk(k=" + std::to_string(k) + ")", SymbolClass{m, rho, 0.0},
                true, eval);
}

std::vector<DyadicCube> sample_active_cubes(const RandomCubeFamily& fam) {
  require(fam.level >= 1 && fam.level <= fam.spec.K - 2,
          "sample_random_f: unresolved level");
  const double pr = std::exp2(-fam.level * fam.spec.d * (1.0 - fam.rho));
  Rng rng(mix_seed({fam.seed, 0x63756265ull,
                    static_cast<std::uint64_t>(fam.level)}));
  std::vector<DyadicCube> active;
  const int side = 1 << fam.level;
  for (int c0 = 0; c0 < side; ++c0) {
    if (fam.spec.d == 1) {
      if (rng.bernoulli(pr)) active.push_back({fam.level, {c0, 0}});
    } else {
      for (int c1 = 0; c1 < side; ++c1) {
        if (rng.bernoulli(pr)) active.push_back({fam.level, {c0, c1}});
      }
    }
  }
  return active;
}

GridFunction sample_random_f(const RandomCubeFamily& fam) {
  const GridSpec& g = fam.spec;
  const auto active = sample_active_cubes(fam);
  const double amp =
      std::exp2(fam.level * g.d * (1.0 - fam.rho) / fam.p);

  // Delta mass at each active center, then one spectral window.
  GridFunction deltas(g, Side::physical);
  const int per = g.n() >> (fam.level + 1);  // center offset in cells
  for (const auto& q : active) {
    IVec2 iv{(2 * q.corner[0] + 1) * per,
             g.d == 2 ? (2 * q.corner[1] + 1) * per : 0};
    deltas[ravel(g, iv)] += 1.0;
  }
  GridFunction spec_fn = forward_transform(deltas);
  const double wscale = std::exp2(-fam.level);
  const double norm =
      amp * std::exp2(-fam.level * g.d) * static_cast<double>(g.total());
  for (std::size_t i = 0; i < spec_fn.size(); ++i) {
    const double r = freq_abs(g, freq_point(g, i));
    spec_fn[i] *= norm * eta_tilde_hat_profile(r * wscale);
  }
  return inverse_transform(spec_fn);
}

GrowthFit fit_loglog(const std::vector<std::pair<double, double>>& points) {
  require(points.size() >= 2, "fit_loglog: need at least 2 points");
  GrowthFit fit;
  fit.points = points;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [l, v] : points) {
    require(l > 0.0 && v > 0.0, "fit_loglog: nonpositive point");
    const double x = std::log(l), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  require(det != 0.0, "fit_loglog: degenerate abscissae");
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (const auto& [l, v] : points) {
    const double r = std::log(v) - (fit.intercept + fit.slope * std::log(l));
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

SharpnessResult sharpness_growth(const SharpnessConfig& cfg) {
  const GridSpec& g = cfg.spec;
  require(cfg.levels.size() >= 4,
          "sharpness_growth: level list too short for a fit");
  require(cfg.seeds >= 1, "sharpness_growth: seeds must be >= 1");
  require(cfg.p > 0.0 && !std::isinf(cfg.p),
          "sharpness_growth: requires 0 < p < inf");
  const double m_expected = -g.d * (1.0 - cfg.rho) * (1.0 / cfg.p - 0.5);
  require(std::abs(cfg.m - m_expected) < 1e-9,
          "sharpness_growth: m must equal -d(1-rho)(1/p - 1/2)");

  SharpnessResult res;
  res.config = cfg;
  const bool qinf = std::isinf(cfg.q), tinf = std::isinf(cfg.t);

  // Layer k is drawn once per seed and shared by every level L >= k
  // (common random numbers across levels: the level curves are cumulative,
  // which removes cross-level ensemble noise from the fitted exponents).
  int max_level = 0;
  for (int L : cfg.levels) {
    require(L >= 1 && L <= g.K - 2, "sharpness_growth: unresolved level");
    max_level = std::max(max_level, L);
  }
  std::vector<long double> in_acc(cfg.levels.size(), 0.0L),
      out_acc(cfg.levels.size(), 0.0L);
  std::vector<std::vector<SharpnessResult::Row>> rows_by_level(
      cfg.levels.size());
  for (int w = 0; w < cfg.seeds; ++w) {
    std::vector<double> in_stack(g.total(), 0.0), out_stack(g.total(), 0.0);
    for (int k = 1; k <= max_level; ++k) {
      RandomCubeFamily fam{g, k, cfg.rho, cfg.p,
                           mix_seed({cfg.seed0, (std::uint64_t)w})};
      const GridFunction f = sample_random_f(fam);
      const GridFunction sf = apply(make_sk(k, cfg.m, cfg.rho, g), f);
      for (std::size_t i = 0; i < g.total(); ++i) {
        const double af = std::abs(f[i]);
        const double asf = std::abs(sf[i]);
        in_stack[i] = qinf ? std::max(in_stack[i], af)
                           : in_stack[i] + std::pow(af, cfg.q);
        out_stack[i] = tinf ? std::max(out_stack[i], asf)
                            : out_stack[i] + std::pow(asf, cfg.t);
      }
      for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
        if (cfg.levels[li] != k) continue;
        long double in_p = 0.0L, out_p = 0.0L;
        for (std::size_t i = 0; i < g.total(); ++i) {
          const double vi =
              qinf ? in_stack[i] : std::pow(in_stack[i], 1.0 / cfg.q);
          const double vo =
              tinf ? out_stack[i] : std::pow(out_stack[i], 1.0 / cfg.t);
          in_p += std::pow((long double)vi, (long double)cfg.p);
          out_p += std::pow((long double)vo, (long double)cfg.p);
        }
        in_p /= static_cast<long double>(g.total());
        out_p /= static_cast<long double>(g.total());
        rows_by_level[li].push_back({cfg.levels[li], w, (double)in_p,
                                     (double)out_p});
        in_acc[li] += in_p;
        out_acc[li] += out_p;
      }
    }
  }
  for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
    for (auto& r : rows_by_level[li]) res.rows.push_back(r);
    const double in_mean = static_cast<double>(in_acc[li]) / cfg.seeds;
    const double out_mean = static_cast<double>(out_acc[li]) / cfg.seeds;
    res.input_by_level.push_back(std::pow(in_mean, 1.0 / cfg.p));
    res.output_by_level.push_back(std::pow(out_mean, 1.0 / cfg.p));
  }

  std::vector<std::pair<double, double>> pin, pout, prat;
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    if (cfg.drop_smallest && i == 0) continue;
    const double L = cfg.levels[i];
    pin.emplace_back(L, res.input_by_level[i]);
    pout.emplace_back(L, res.output_by_level[i]);
    prat.emplace_back(L, res.output_by_level[i] / res.input_by_level[i]);
  }
  res.input_fit = fit_loglog(pin);
  res.output_fit = fit_loglog(pout);
  res.ratio_fit = fit_loglog(prat);
  return res;
}

namespace {

GridFunction besov_h(int k, double p, double t, const GridSpec& g) {
  GridFunction spec_fn(g, Side::frequency);
  const double amp = (std::isinf(t) ? 1.0 : std::pow((double)k, -1.0 / t)) *
                     std::exp2(k * g.d / p) * std::exp2(-k * g.d);
  const double wscale = std::exp2(-k);
  for (std::size_t i = 0; i < spec_fn.size(); ++i) {
    const double r = freq_abs(g, freq_point(g, i));
    spec_fn[i] = amp * eta_tilde_hat_profile(r * wscale);
  }
  return inverse_transform(spec_fn);
}

}  // namespace

std::vector<BesovRow> besov_family_check(double p, double t, double rho,
                                         const std::vector<int>& k_list,
                                         const GridSpec& spec) {
  const double m = -spec.d * (1.0 - rho) * std::abs(0.5 - 1.0 / p);
  std::vector<BesovRow> rows;
  for (int k : k_list) {
    require(k >= 2 && k <= spec.K - 2, "besov_family_check: unresolved level");
    const GridFunction h = besov_h(k, p, t, spec);
    const GridFunction sh = apply(make_sk(k, m, rho, spec), h);
    const double kt = std::isinf(t) ? 1.0 : std::pow((double)k, 1.0 / t);
    BesovRow r;
    r.k = k;
    r.norm_h = lp_norm(h, p);
    r.norm_h_scaled = r.norm_h * kt;
    r.norm_sh = lp_norm(sh, p);
    r.norm_sh_scaled = r.norm_sh * kt;
    rows.push_back(r);
  }
  return rows;
}

namespace {

double annulus_profile(double r) {  // supp {1/2 <= r <= 2}, peak 1 at r = 1
  return lp_bump(r) - lp_bump(2.0 * r);
}

}  // namespace

std::vector<LinfRow> linf_family_check(double m, double rho, SigmaRule rule,
                                       double t, const std::vector<int>& k_list,
                                       const GridSpec& spec) {
  require(t > 0.0 && !std::isinf(t),
          "linf_family_check: t must be finite and positive");
  std::vector<LinfRow> rows;
  double partial = 0.0;
  for (int k : k_list) {
    const double shell = std::exp2(k);
    const double width = std::exp2(rho * k - 2);  // window radius / 2
    require(shell + 4.0 * width < std::exp2(spec.K),
            "linf_family_check: unresolved window");
    const double sigma = rule == SigmaRule::supercritical
                             ? std::exp2(-k * (m + spec.d * (1.0 - rho) / 2.0) / 2.0)
                             : std::pow((double)k, -1.0 / t);
    // g_k spectrum and the unit-phase window for U_k.
    GridFunction ghat(spec, Side::frequency);
    GridFunction uhat(spec, Side::frequency);
    const double norm = sigma * std::exp2(-rho * k * spec.d);
    for (std::size_t i = 0; i < ghat.size(); ++i) {
      const IVec2 xiv = freq_point(spec, i);
      const double d0 = xiv[0] - shell;
      const double d1 = spec.d == 2 ? (double)xiv[1] : 0.0;
      const double arg = std::exp2(2.0 - rho * k) * std::hypot(d0, d1);
      const double w = annulus_profile(arg);
      if (w == 0.0) continue;
      const double r = freq_abs(spec, xiv);
      const cplx phase = std::polar(1.0, kTwoPi * std::pow(r, 1.0 - rho));
      ghat[i] = norm * w;
      uhat[i] = w * phase;
    }
    const GridFunction g = inverse_transform(ghat);
    const GridFunction u = inverse_transform(uhat);
    const GridFunction sg = apply(make_sk(k, m, rho, spec), g);
    LinfRow row;
    row.k = k;
    row.sigma = sigma;
    row.norm_g = lp_norm(g, INFINITY);
    row.norm_g_ratio = row.norm_g / sigma;
    row.norm_sg = lp_norm(sg, INFINITY);
    partial += std::pow(row.norm_sg, t);
    row.partial_sum = partial;
    row.max_u = lp_norm(u, INFINITY);
    rows.push_back(row);
  }
  return rows;
}

TestFamily parse_family(const std::string& name) {
  if (name == "bandlimited") return TestFamily::bandlimited;
  if (name == "cubes") return TestFamily::cubes;
  if (name == "packets") return TestFamily::packets;
  throw ContractError("unknown test family: " + name);
}

GridFunction random_bandlimited(const GridSpec& spec, double radius,
                                std::uint64_t seed) {
  Rng rng(mix_seed({seed, 0x626c696dull}));
  GridFunction fhat(spec, Side::frequency);
  // Lattice order (not storage order) so draws are spec-stable.
  for (std::size_t i = 0; i < fhat.size(); ++i) {
    const double r = freq_abs(spec, freq_point(spec, i));
    if (r <= radius) fhat[i] = rng.cnormal();
  }
  return inverse_transform(fhat);
}

namespace {

GridFunction probe_draw(TestFamily family, const GridSpec& g,
                        std::uint64_t seed) {
  switch (family) {
    case TestFamily::bandlimited:
      return random_bandlimited(g, std::exp2(g.K - 1), seed);
    case TestFamily::cubes: {
      Rng rng(mix_seed({seed, 0x70726f62ull}));
      const int k = rng.uniform_int(2, std::max(2, g.K - 2));
      RandomCubeFamily fam{g, k, 0.5, 2.0, seed};
      return sample_random_f(fam);
    }
    case TestFamily::packets: {
      Rng rng(mix_seed({seed, 0x7061636bull}));
      GridFunction fhat(g, Side::frequency);
      const int packets = 3;
      for (int j = 0; j < packets; ++j) {
        const double width = std::exp2(rng.uniform(1.0, g.K - 3.0));
        Vec2 center{rng.uniform01(), g.d == 2 ? rng.uniform01() : 0.0};
        IVec2 v{rng.uniform_int(-(1 << (g.K - 2)), 1 << (g.K - 2)), 0};
        if (g.d == 2) v[1] = rng.uniform_int(-(1 << (g.K - 2)), 1 << (g.K - 2));
        const cplx amp = rng.cnormal();
        for (std::size_t i = 0; i < fhat.size(); ++i) {
          const IVec2 xiv = freq_point(g, i);
          const double d0 = xiv[0] - v[0], d1 = g.d == 2 ? xiv[1] - v[1] : 0.0;
          const double gauss = std::exp(-(d0 * d0 + d1 * d1) / (2.0 * width * width));
          if (gauss < 1e-14) continue;
          const double phase =
              -kTwoPi * (center[0] * xiv[0] + center[1] * xiv[1]);
          fhat[i] += amp * gauss * std::polar(1.0, phase);
        }
      }
      return inverse_transform(fhat);
    }
  }
  throw ContractError("probe_draw: unreachable");
}

}  // namespace

ProbeResult boundedness_probe(const Symbol& a, const SpaceParams& in_params,
                              const SpaceParams& out_params, TestFamily family,
                              int n, std::uint64_t seed, const LPPartition& P) {
  require(n >= 1, "boundedness_probe: n must be >= 1");
  const GridSpec& g = P.spec();
  const Symbol ac = materialize_symbol(a, g);
  ProbeResult res;
  for (int i = 0; i < n; ++i) {
    const GridFunction f = probe_draw(family, g, mix_seed({seed, (std::uint64_t)i}));
    const double denom = space_norm(f, P, in_params);
    if (denom == 0.0) continue;
    const GridFunction tf = apply(ac, f);
    res.ratios.push_back(space_norm(tf, P, out_params) / denom);
  }
  require(!res.ratios.empty(), "boundedness_probe: no nonzero draws");
  double sum = 0.0;
  for (double r : res.ratios) {
    res.max_ratio = std::max(res.max_ratio, r);
    sum += r;
  }
  res.mean_ratio = sum / static_cast<double>(res.ratios.size());
  std::vector<double> sorted = res.ratios;
  std::sort(sorted.begin(), sorted.end());
  res.median_ratio = sorted[sorted.size() / 2];
  return res;
}

}  // namespace lpfield

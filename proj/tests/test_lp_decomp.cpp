#include <cmath>

#include "doctest.h"
#include "lpfield/lp_decomp.hpp"
#include "lpfield/parallel.hpp"
#include "oracles.hpp"

using namespace lpfield;
using namespace lpfield::testing;

TEST_CASE("partition of unity is exact on the resolved range") {
  for (auto [d, K] : {std::pair{1, 10}, std::pair{2, 6}}) {
    GridSpec g(d, K);
    LPPartition p = LPPartition::build(g);
    const double lim = std::exp2(K - 2);
    for (std::size_t i = 0; i < g.total(); ++i) {
      if (freq_abs(g, freq_point(g, i)) > lim) continue;
      double s = 0.0;
      for (int k = 0; k < p.bands(); ++k) s += p.window(k, i);
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("window supports sit in the dyadic annuli") {
  GridSpec g(1, 7);
  LPPartition p = LPPartition::build(g);
  // omega_3 vanishes for |xi| <= 4 and |xi| >= 16.
  for (std::size_t i = 0; i < g.total(); ++i) {
    const double r = freq_abs(g, freq_point(g, i));
    if (r <= 4.0 || r >= 16.0) CHECK(p.window(3, i) == 0.0);
  }
  // omega_0 vanishes outside {|xi| <= 2}.
  for (std::size_t i = 0; i < g.total(); ++i) {
    if (freq_abs(g, freq_point(g, i)) > 2.0) CHECK(p.window(0, i) == 0.0);
  }
  // General support condition for every band.
  for (int k = 1; k < p.bands(); ++k) {
    for (std::size_t i = 0; i < g.total(); ++i) {
      const double r = freq_abs(g, freq_point(g, i));
      if (r < std::exp2(k - 1) || r > std::exp2(k + 1)) {
        CHECK(p.window(k, i) == 0.0);
      }
    }
  }
}

TEST_CASE("scaled window derivatives are bounded uniformly in k") {
  // Central-difference oracle on the constructed bump. The profile is fixed,
  // so the suprema are regression values: the scaled differences saturate at
  // the profile's own sup (~4.0 for order 1, ~39.3 for order 2), uniformly
  // in k.
  GridSpec g(1, 9);
  LPPartition p = LPPartition::build(g);
  for (int order : {1, 2}) {
    for (int k = 1; k <= g.K - 2; ++k) {
      CHECK(p.window_derivative_bound(k, order) <= (order == 1 ? 5.0 : 48.0));
    }
  }
  GridSpec g2(2, 5);
  LPPartition p2 = LPPartition::build(g2);
  for (int order : {1, 2}) {
    for (int k = 1; k <= g2.K - 2; ++k) {
      CHECK(p2.window_derivative_bound(k, order) <= (order == 1 ? 5.0 : 48.0));
    }
  }
}

TEST_CASE("smoothstep and bump basics") {
  CHECK(smoothstep(-1.0) == 0.0);
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(0.5) == doctest::Approx(0.5));
  CHECK(lp_bump(0.5) == 1.0);
  CHECK(lp_bump(1.0) == 1.0);
  CHECK(lp_bump(2.0) == 0.0);
  CHECK(lp_bump(1.5) > 0.0);
  CHECK(lp_bump(1.5) < 1.0);
}

TEST_CASE("band projection of a pure tone is the window value times the tone") {
  GridSpec g(1, 6);
  LPPartition p = LPPartition::build(g);
  const IVec2 v{8, 0};  // |v| = 2^3
  GridFunction f = tone(g, v);
  for (int k = 0; k < p.bands(); ++k) {
    GridFunction bk = p.band_project(f, k);
    const double w = p.window(k, freq_index(g, v));
    CHECK(lp_norm(bk - cplx{w, 0.0} * f, INFINITY) < 1e-12);
  }
}

TEST_CASE("band projections of banded input vanish away from its band") {
  GridSpec g(1, 7);
  LPPartition p = LPPartition::build(g);
  // Spectrum strictly inside band 4's core {2^3 < |xi| < 2^5}.
  GridFunction fhat(g, Side::frequency);
  fhat.at_freq({12, 0}) = {1.0, 0.5};
  fhat.at_freq({-14, 0}) = {0.3, -0.2};
  GridFunction f = inverse_transform(fhat);
  for (int j = 0; j < p.bands(); ++j) {
    if (std::abs(j - 4) >= 2) {
      CHECK(lp_norm(p.band_project(f, j), INFINITY) < 1e-13);
    }
  }
}

TEST_CASE("band projections sum back to band-limited input") {
  GridSpec g(1, 6);
  LPPartition p = LPPartition::build(g);
  GridFunction f = random_bandlimited_for_test(g, std::exp2(g.K - 2), 5);
  GridFunction sum(g, Side::physical);
  for (int k = 0; k < p.bands(); ++k) sum = sum + p.band_project(f, k);
  CHECK(rel_max_error(sum, f) < 1e-12);
}

TEST_CASE("band projection is linear and squares to the omega^2 multiplier") {
  GridSpec g(1, 5);
  LPPartition p = LPPartition::build(g);
  GridFunction f = random_physical(g, 7);
  const int k = 3;
  GridFunction twice = p.band_project(p.band_project(f, k), k);
  // Direct omega_k^2 multiplier.
  GridFunction fhat = forward_transform(f);
  GridFunction direct(g, Side::frequency);
  for (std::size_t i = 0; i < g.total(); ++i) {
    const double w = p.window(k, i);
    direct[i] = w * w * fhat[i];
  }
  CHECK(rel_max_error(twice, inverse_transform(direct)) < 1e-11);

  GridFunction h = random_physical(g, 8);
  GridFunction lin = p.band_project(f + h, k) - p.band_project(f, k);
  CHECK(rel_max_error(lin, p.band_project(h, k)) < 1e-10);
}

TEST_CASE("band index bounds are enforced") {
  GridSpec g(1, 5);
  LPPartition p = LPPartition::build(g);
  GridFunction f(g, Side::physical);
  CHECK_THROWS_AS(p.band_project(f, -1), ContractError);
  CHECK_THROWS_AS(p.band_project(f, g.K), ContractError);
}

TEST_CASE("peetre maximal: constants, pointwise domination, parameter errors") {
  GridSpec g(1, 5);
  GridFunction one(g, Side::physical);
  for (auto& z : one.values()) z = 1.0;
  GridFunction m = peetre_maximal(one, 2.0, 4.0);
  CHECK(rel_max_error(m, one) < 1e-14);

  GridFunction u = random_physical(g, 11);
  GridFunction mu = peetre_maximal(u, 1.5, 8.0);
  for (std::size_t i = 0; i < g.total(); ++i) {
    CHECK(mu[i].real() >= std::abs(u[i]) - 1e-14);
  }
  CHECK_THROWS_AS(peetre_maximal(u, 0.0, 1.0), ContractError);
  CHECK_THROWS_AS(peetre_maximal(u, 1.0, 0.0), ContractError);
}

TEST_CASE("peetre majorization by M_t on band-limited inputs") {
  // For u in E(r) and sigma = d/t the Peetre maximal is dominated by a
  // constant times M_t u. The constant is a regression value: measured max
  // ratio over this 50-draw ensemble is ~1.62.
  GridSpec g(1, 6);
  const int k = 3;
  const double r = std::exp2(k);
  const double t = 1.0;
  const double sigma = g.d / t;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    GridFunction u = random_bandlimited_for_test(g, r, 100 + s);
    GridFunction pe = peetre_maximal(u, sigma, r);
    GridFunction hl = hl_maximal(u, t);
    for (std::size_t i = 0; i < g.total(); ++i) {
      if (hl[i].real() > 1e-12) {
        worst = std::max(worst, pe[i].real() / hl[i].real());
      }
    }
  }
  CHECK(worst < 2.5);
  CHECK(worst > 0.5);  // the bound is not vacuous
}

TEST_CASE("hardy-littlewood maximal: constants and domination") {
  GridSpec g(1, 5);
  GridFunction c(g, Side::physical);
  for (auto& z : c.values()) z = {0.0, -3.0};
  GridFunction m = hl_maximal(c, 2.0);
  for (std::size_t i = 0; i < g.total(); ++i) {
    CHECK(m[i].real() == doctest::Approx(3.0));
  }
  GridFunction u = random_physical(g, 13);
  GridFunction mu = hl_maximal(u, 1.0);
  for (std::size_t i = 0; i < g.total(); ++i) {
    CHECK(mu[i].real() >= std::abs(u[i]) - 1e-12);
  }
  CHECK_THROWS_AS(hl_maximal(u, 0.0), ContractError);
}

TEST_CASE("hardy-littlewood maximal of a single spike decays like the cube volume") {
  GridSpec g(1, 5);
  GridFunction u(g, Side::physical);
  u[0] = 1.0;
  GridFunction m = hl_maximal(u, 1.0);
  const int n = g.n();
  for (int x = 0; x < n; ++x) {
    const int l = std::min(x, n - x);  // periodic distance in cells
    const double expected = 1.0 / std::min(2 * l + 1, n);  // torus caps the cube
    CHECK(m[static_cast<std::size_t>(x)].real() ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  GridSpec g2(2, 4);
  GridFunction u2(g2, Side::physical);
  u2[0] = 1.0;
  GridFunction m2 = hl_maximal(u2, 1.0);
  const int n2 = g2.n();
  for (std::size_t i = 0; i < g2.total(); ++i) {
    const IVec2 iv = unravel(g2, i);
    const int l0 = std::min(iv[0], n2 - iv[0]);
    const int l1 = std::min(iv[1], n2 - iv[1]);
    const int l = std::max(l0, l1);
    const double side = std::min(2 * l + 1, n2);
    CHECK(m2[i].real() == doctest::Approx(1.0 / (side * side)).epsilon(1e-12));
  }
}

TEST_CASE("vector-valued maximal inequality ratio stays in its regression band") {
  // Fefferman-Stein style ratio with sigma > max{d/p, d/q}: recorded, not
  // asserted a priori. Measured over 50 seeds: max ratio ~1.09 at these
  // parameters (d = 1, p = 2, q = 2, bands 2..5).
  GridSpec g(1, 6);
  const double p = 2.0, q = 2.0;
  const double sigma = 1.0 / std::min(p, q) + 1.5;  // > max{d/p, d/q}
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    std::vector<GridFunction> us, ms;
    for (int k = 2; k <= 5; ++k) {
      GridFunction u = random_bandlimited_for_test(g, std::exp2(k), 777 + 10 * s + k);
      ms.push_back(peetre_maximal(u, sigma, std::exp2(k)));
      us.push_back(std::move(u));
    }
    GridFunction num(g, Side::physical), den(g, Side::physical);
    for (std::size_t i = 0; i < g.total(); ++i) {
      double a = 0.0, b = 0.0;
      for (std::size_t k = 0; k < us.size(); ++k) {
        a += std::pow(ms[k][i].real(), q);
        b += std::pow(std::abs(us[k][i]), q);
      }
      num[i] = std::pow(a, 1.0 / q);
      den[i] = std::pow(b, 1.0 / q);
    }
    worst = std::max(worst, lp_norm(num, p) / lp_norm(den, p));
  }
  CHECK(worst < 2.0);
  CHECK(worst >= 1.0);  // maximal dominates identity
}

TEST_CASE("peetre cutoff radius: exact by default, restricted when set") {
  GridSpec g(1, 5);
  GridFunction u = random_physical(g, 55);
  GridFunction exact = peetre_maximal(u, 2.0, 8.0);
  GridFunction full = peetre_maximal(u, 2.0, 8.0, 1.0);  // covers the torus
  for (std::size_t i = 0; i < g.total(); ++i) CHECK(exact[i] == full[i]);
  GridFunction cut = peetre_maximal(u, 2.0, 8.0, 0.1);
  for (std::size_t i = 0; i < g.total(); ++i) {
    CHECK(cut[i].real() <= exact[i].real() + 1e-15);
    CHECK(cut[i].real() >= std::abs(u[i]) - 1e-14);  // y = 0 always included
  }
  CHECK_THROWS_AS(peetre_maximal(u, 2.0, 8.0, 0.0), ContractError);
}

TEST_CASE("worker threads do not change any bit of the output") {
  GridSpec g(2, 4);
  GridFunction u = random_physical(g, 66);
  set_thread_count(1);
  GridFunction m1 = peetre_maximal(u, 1.5, 4.0);
  GridFunction h1 = hl_maximal(u, 1.0);
  set_thread_count(4);
  GridFunction m4 = peetre_maximal(u, 1.5, 4.0);
  GridFunction h4 = hl_maximal(u, 1.0);
  set_thread_count(1);
  for (std::size_t i = 0; i < g.total(); ++i) {
    CHECK(m1[i] == m4[i]);
    CHECK(h1[i] == h4[i]);
  }
}

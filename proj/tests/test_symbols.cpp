#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lpfield/lp_decomp.hpp"
#include "lpfield/symbols.hpp"
#include "oracles.hpp"

using namespace lpfield;
using namespace lpfield::testing;

TEST_CASE("model multiplier c_{m,rho}: value at 0, modulus, parameter range") {
  Symbol c = make_cmrho(-0.25, 0.5);
  CHECK(std::abs(c({0, 0}, {0.0, 0.0}) - cplx{1.0, 0.0}) < 1e-15);
  for (double xi : {1.0, 2.0, 5.0, 64.0, -17.0}) {
    const double expect = std::pow(1.0 + xi * xi, -0.25 / 2.0);
    CHECK(std::abs(c({0, 0}, {xi, 0.0})) == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK_THROWS_AS(make_cmrho(0.0, 0.0), ContractError);
  CHECK_THROWS_AS(make_cmrho(0.0, 1.0), ContractError);
}

TEST_CASE("n_s multiplier: identity, inverse pair, explicit value") {
  Symbol n0 = make_ns(0.0);
  CHECK(n0({0, 0}, {7.0, 0.0}) == cplx{1.0, 0.0});
  Symbol n2 = make_ns(2.0), nm2 = make_ns(-2.0);
  for (double xi : {0.0, 1.0, 3.0, 40.0}) {
    CHECK(std::abs(n2({0, 0}, {xi, 0}) * nm2({0, 0}, {xi, 0}) - cplx{1.0, 0.0}) <
          1e-15);
  }
  Symbol n1 = make_ns(1.0);
  CHECK(n1({0, 0}, {3.0, 4.0}).real() ==
        doctest::Approx(std::sqrt(26.0)).epsilon(1e-15));
}

TEST_CASE("seminorm table of the constant symbol") {
  GridSpec g(1, 5);
  Symbol one("one", SymbolClass{0.0, 1.0, 0.0}, true,
             [](const Vec2&, const Vec2&) { return cplx{1.0, 0.0}; });
  SeminormTable t = seminorm_estimate(one, g, 2, 2);
  CHECK(t.at({0, 0}, {0, 0}).value == doctest::Approx(1.0));
  for (const auto& e : t.entries) {
    if (e.alpha == IVec2{0, 0} && e.beta == IVec2{0, 0}) continue;
    CHECK(e.value < 1e-12);
  }
}

TEST_CASE("seminorm certificate: n_s is class (1,0) of order s") {
  GridSpec g(1, 7);
  Symbol n = make_ns(1.5);
  SeminormTable t = seminorm_estimate(n, g, 2, 0);
  // Analytic first derivative: |d/dxi n_s| = |s| xi (1+xi^2)^{s/2-1};
  // normalized by (1+|xi|)^{-s+1} it stays below |s| 2^{|s|}; entries must be
  // bounded and stable under refinement.
  for (const auto& e : t.entries) {
    CHECK(e.value < 8.0);
    CHECK(e.value_refined < 8.0);
    if (e.value > 1e-3) {
      CHECK(e.value_refined / e.value < 1.6);
      CHECK(e.value_refined / e.value > 0.4);
    }
  }
}

TEST_CASE("seminorm certificate: c_{m,rho} is class (rho, 0) of order m") {
  GridSpec g(1, 8);
  Symbol c = make_cmrho(-0.25, 0.5);
  SeminormTable t = seminorm_estimate(c, g, 2, 0);
  for (const auto& e : t.entries) {
    CHECK(e.value < 30.0);  // measured max ~17.8 at alpha = 2
    if (e.value > 1e-3) CHECK(e.value_refined / e.value < 2.0);
  }
}

TEST_CASE("declaring a stricter rho than the true one is detected as growth") {
  // Normalized first difference of c_{0,rho} at two frequency dyads: under
  // the true rho the quotient stays level, under rho' > rho it grows.
  const double rho = 0.5;
  Symbol c = make_cmrho(0.0, rho);
  auto normalized_diff = [&](double xi, double rho_norm) {
    const cplx d = c({0, 0}, {xi + 0.5, 0}) - c({0, 0}, {xi - 0.5, 0});
    return std::abs(d) * std::pow(1.0 + xi, rho_norm);
  };
  const double lo = 16.0, hi = 1024.0;
  const double true_lo = normalized_diff(lo, rho);
  const double true_hi = normalized_diff(hi, rho);
  CHECK(true_hi / true_lo < 2.0);  // level
  const double strict_lo = normalized_diff(lo, 0.9);
  const double strict_hi = normalized_diff(hi, 0.9);
  CHECK(strict_hi / strict_lo > 4.0);  // growth detected
}

TEST_CASE("truncation: large tau is the identity, a == 1 exposes the cutoff") {
  GridSpec g(1, 6);
  Symbol one("one", SymbolClass{0.0, 1.0, 0.0}, true,
             [](const Vec2&, const Vec2&) { return cplx{1.0, 0.0}; });
  Symbol t2 = truncate(one, 2.0);
  for (std::size_t i = 0; i < g.total(); ++i) {
    const Vec2 x = grid_point(g, i);
    CHECK(t2(x, {1.0, 0}) == cplx{1.0, 0.0});
  }
  Symbol t0 = truncate(one, 0.0);
  for (std::size_t i = 0; i < g.total(); ++i) {
    const Vec2 x = grid_point(g, i);
    const Vec2 xc{x[0] - std::round(x[0]), 0.0};
    CHECK(std::abs(t0(x, {1.0, 0}).real() - truncation_cutoff(xc, 0.0)) <
          1e-15);
  }
  // Cutoff profile: 1 near 0, 0 near the seam.
  CHECK(truncation_cutoff({0.1, 0.0}, 0.0) == 1.0);
  CHECK(truncation_cutoff({0.499, 0.0}, 0.0) == 0.0);
  CHECK_THROWS_AS(truncate(one, -1.0), ContractError);
}

TEST_CASE("truncation seminorms are bounded uniformly in tau") {
  GridSpec g(1, 6);
  Symbol a = make_xmod_cmrho(-0.25, 0.5, 3.0, 0.5, 8, 5, 1);
  const double base = seminorm_estimate(a, g, 1, 1).max_value();
  for (double tau : {0.0, 1.0, 2.0, 3.0}) {
    const double t = seminorm_estimate(truncate(a, tau), g, 1, 1).max_value();
    CHECK(t <= 3.0 * base);  // measured max ratio ~1.9 at tau = 0
  }
}

TEST_CASE("paradiff split of an x-independent symbol has no high rows") {
  GridSpec g(1, 6);
  LPPartition P = LPPartition::build(g);
  Symbol c = make_cmrho(-0.5, 0.5);
  ParadiffSplit sp = paradiff_split(c, P);
  const std::size_t total = g.total();

  // a_{j,k} = 0 for j >= 1 (x-spectrum concentrated at eta = 0).
  for (int j = 1; j < sp.bands(); j += 2) {
    const auto ajk = sp.component(j, std::min(j + 1, sp.bands() - 1));
    double m = 0.0;
    for (const auto& z : ajk) m = std::max(m, std::abs(z));
    CHECK(m < 1e-12);
  }
  const auto a1 = sp.partial_symbol(1);
  double m1 = 0.0;
  for (const auto& z : a1) m1 = std::max(m1, std::abs(z));
  CHECK(m1 < 1e-12);

  // a2 + a3 reproduces c on the resolved range.
  const auto a2 = sp.partial_symbol(2);
  const auto a3 = sp.partial_symbol(3);
  for (std::size_t x = 0; x < total; x += 7) {
    for (std::size_t i = 0; i < total; ++i) {
      const IVec2 xiv = freq_point(g, i);
      if (freq_abs(g, xiv) > std::exp2(g.K - 1)) continue;
      const cplx lhs = a2[x * total + i] + a3[x * total + i];
      const cplx rhs = c({0, 0}, {(double)xiv[0], 0});
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("paradiff split of a pure tone occupies three x-frequency rows") {
  GridSpec g(1, 6);
  LPPartition P = LPPartition::build(g);
  const int v = 8;  // |v| = 2^3, band j0 = 3
  Symbol a = symbol_product(make_tone({v, 0}, 1), make_ns(-1.0));
  ParadiffSplit sp = paradiff_split(a, P);
  for (int j = 0; j < sp.bands(); ++j) {
    double m = 0.0;
    for (int k = 0; k < sp.bands(); ++k) {
      for (const auto& z : sp.component(j, k)) m = std::max(m, std::abs(z));
    }
    if (std::abs(j - 3) > 1) {
      CHECK(m < 1e-12);
    }
    if (j == 3) CHECK(m > 0.01);
  }
}

TEST_CASE("paradiff reconstruction on random smooth symbols") {
  GridSpec g(1, 6);
  LPPartition P = LPPartition::build(g);
  const double lim = std::exp2(g.K - 1);
  for (std::uint64_t s = 0; s < 3; ++s) {
    Symbol a = make_xmod_cmrho(-0.3, 0.5, 3.0, 0.6, g.n() / 4, 100 + s, 1);
    ParadiffSplit sp = paradiff_split(a, P);
    const auto a1 = sp.partial_symbol(1);
    const auto a2 = sp.partial_symbol(2);
    const auto a3 = sp.partial_symbol(3);
    const std::size_t total = g.total();
    for (std::size_t x = 0; x < total; x += 5) {
      const Vec2 xv = grid_point(g, x);
      for (std::size_t i = 0; i < total; ++i) {
        const IVec2 xiv = freq_point(g, i);
        if (freq_abs(g, xiv) > lim) continue;
        const cplx sum =
            a1[x * total + i] + a2[x * total + i] + a3[x * total + i];
        CHECK(std::abs(sum - a(xv, {(double)xiv[0], 0})) < 1e-10);
      }
    }
  }
}

TEST_CASE("diagonal and low families agree with their definitions") {
  GridSpec g(1, 5);
  LPPartition P = LPPartition::build(g);
  Symbol a = make_xmod_cmrho(0.0, 0.5, 3.0, 0.5, 8, 3, 1);
  ParadiffSplit sp = paradiff_split(a, P);
  const std::size_t total = g.total();
  const int k = 4;
  std::vector<cplx> manual(total * total, cplx{0, 0});
  for (int j = std::max(0, k - 2); j <= std::min(sp.bands() - 1, k + 2); ++j) {
    const auto c = sp.component(j, k);
    for (std::size_t i = 0; i < manual.size(); ++i) manual[i] += c[i];
  }
  const auto diag = sp.diagonal_symbol(k);
  for (std::size_t i = 0; i < manual.size(); ++i) {
    CHECK(std::abs(manual[i] - diag[i]) < 1e-12);
  }
  std::fill(manual.begin(), manual.end(), cplx{0, 0});
  for (int j = 0; j <= k - 3; ++j) {
    const auto c = sp.component(j, k);
    for (std::size_t i = 0; i < manual.size(); ++i) manual[i] += c[i];
  }
  const auto low = sp.low_symbol(k);
  for (std::size_t i = 0; i < manual.size(); ++i) {
    CHECK(std::abs(manual[i] - low[i]) < 1e-12);
  }
}

TEST_CASE("low family seminorms stay bounded uniformly over k") {
  GridSpec g(1, 7);
  LPPartition P = LPPartition::build(g);
  Symbol a = make_xmod_cmrho(-0.25, 0.5, 3.0, 0.5, g.n() / 4, 11, 1);
  ParadiffSplit sp = paradiff_split(a, P);
  const double base = seminorm_estimate(a, g, 1, 1).max_value();
  for (int k = 3; k < sp.bands(); ++k) {
    Symbol bk = sp.low_symbol_as_symbol(k);
    SeminormTable t = seminorm_estimate(bk, g, 1, 1, {}, false);
    CHECK(t.max_value() <= 4.0 * base);  // uniform over k; measured <= ~2.4x
  }
}

TEST_CASE("compound adjoint amplitude") {
  Symbol c = make_ns(-1.0);  // real, x-independent
  CompoundSymbol A = compound_adjoint(c);
  CHECK(A.x_independent());
  CHECK(A.y_independent());
  for (double xi : {0.0, 2.0, 9.0}) {
    CHECK(std::abs(A({0.3, 0}, {0.9, 0}, {xi, 0}) - c({0, 0}, {xi, 0})) <
          1e-15);
  }
  Symbol i_sym("i", SymbolClass{0.0, 1.0, 0.0}, true,
               [](const Vec2&, const Vec2&) { return cplx{0.0, 1.0}; });
  CompoundSymbol Ai = compound_adjoint(i_sym);
  CHECK(std::abs(Ai({0, 0}, {0, 0}, {1, 0}) - cplx{0.0, -1.0}) < 1e-15);
  // Class bookkeeping: (m, rho, 0, delta).
  Symbol x = make_xmod_cmrho(-0.25, 0.5, 3.0, 0.5, 4, 1, 1);
  CompoundSymbol Ax = compound_adjoint(x);
  CHECK(Ax.cls().m == x.cls().m);
  CHECK(Ax.cls().delta1 == 0.0);
  CHECK(Ax.cls().delta2 == x.cls().delta);
  CHECK(!Ax.y_independent());
}

TEST_CASE("table symbols reject off-lattice evaluation") {
  GridSpec g(1, 4);
  auto values = std::make_shared<std::vector<cplx>>(g.total() * g.total(),
                                                    cplx{1.0, 0.0});
  Symbol t = table_symbol("t", SymbolClass{}, g, values);
  CHECK(t({0.0, 0}, {3.0, 0}) == cplx{1.0, 0.0});
  CHECK_THROWS_AS(t({0.0, 0}, {3.25, 0}), ContractError);
  CHECK_THROWS_AS(t({0.013, 0}, {3.0, 0}), ContractError);
}

TEST_CASE("reduce_compound collapses a y-independent amplitude") {
  GridSpec g(1, 5);
  Symbol c = make_cmrho(-0.5, 0.5);
  // A(x, y, xi) = c(xi), independent of both x and y.
  CompoundSymbol A("wrap", CompoundSymbol::Class{-0.5, 0.5, 0.0, 0.0}, true,
                   true,
                   [c](const Vec2&, const Vec2&, const Vec2& xi) {
                     return c({0, 0}, xi);
                   });
  ReduceResult r = reduce_compound(A, g);
  for (std::size_t i = 0; i < g.total(); ++i) {
    const IVec2 xiv = freq_point(g, i);
    const cplx got = r.symbol({0.0, 0}, {(double)xiv[0], 0});
    const cplx want = c({0, 0}, {(double)xiv[0], 0});
    CHECK(std::abs(got - want) < 1e-6);
  }
  CHECK(r.diffs.size() == 4);
  for (std::size_t i = 1; i < r.diffs.size(); ++i) {
    CHECK(r.diffs[i] < r.diffs[i - 1]);
  }
}

TEST_CASE("reduce_compound rejects bad schedules") {
  GridSpec g(1, 4);
  CompoundSymbol A("one", CompoundSymbol::Class{}, true, true,
                   [](const Vec2&, const Vec2&, const Vec2&) {
                     return cplx{1.0, 0.0};
                   });
  CHECK_THROWS_AS(reduce_compound(A, g, {0.25, 0.5, 0.125}), ContractError);
  CHECK_THROWS_AS(reduce_compound(A, g, {0.25, 0.125}), ContractError);
}

TEST_CASE("symbol products multiply values and combine classes") {
  Symbol a = make_cmrho(-0.25, 0.5);
  Symbol b = make_ns(1.0);
  Symbol p = symbol_product(a, b);
  CHECK(p.cls().m == doctest::Approx(0.75));
  CHECK(p.cls().rho == doctest::Approx(0.5));
  const Vec2 xi{5.0, 0.0};
  CHECK(std::abs(p({0, 0}, xi) - a({0, 0}, xi) * b({0, 0}, xi)) < 1e-15);
}

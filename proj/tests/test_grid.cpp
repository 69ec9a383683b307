#include <cmath>

#include "doctest.h"
#include "lpfield/grid.hpp"
#include "oracles.hpp"

using namespace lpfield;
using namespace lpfield::testing;

TEST_CASE("constant function transforms to a delta at xi = 0") {
  for (int d : {1, 2}) {
    GridSpec g(d, 4);
    GridFunction f(g, Side::physical);
    for (auto& z : f.values()) z = {1.0, 0.0};
    GridFunction fhat = forward_transform(f);
    CHECK(std::abs(fhat.at_freq({0, 0}) - cplx{1.0, 0.0}) < 1e-13);
    double off = 0.0;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
      if (freq_point(g, i) == IVec2{0, 0}) continue;
      off = std::max(off, std::abs(fhat[i]));
    }
    CHECK(off < 1e-13);
  }
}

TEST_CASE("pure tone transforms to a delta at its frequency") {
  GridSpec g(1, 5);
  const IVec2 v{5, 0};
  GridFunction fhat = forward_transform(tone(g, v));
  CHECK(std::abs(fhat.at_freq(v) - cplx{1.0, 0.0}) < 1e-12);
  CHECK(std::abs(fhat.at_freq({0, 0})) < 1e-13);

  GridSpec g2(2, 4);
  const IVec2 v2{3, -7};
  GridFunction fhat2 = forward_transform(tone(g2, v2));
  CHECK(std::abs(fhat2.at_freq(v2) - cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("round-trip transform is the identity on 100 random functions") {
  GridSpec g(1, 6);
  for (std::uint64_t s = 0; s < 100; ++s) {
    GridFunction f = random_physical(g, s);
    GridFunction back = inverse_transform(forward_transform(f));
    CHECK(rel_max_error(back, f) < 1e-12);
  }
  GridSpec g2(2, 4);
  for (std::uint64_t s = 0; s < 10; ++s) {
    GridFunction f = random_physical(g2, s);
    CHECK(rel_max_error(inverse_transform(forward_transform(f)), f) < 1e-12);
  }
}

TEST_CASE("forward transform agrees with the brute-force DFT oracle") {
  for (int d : {1, 2}) {
    GridSpec g(d, 4);
    GridFunction f = random_physical(g, 17);
    GridFunction fast = forward_transform(f);
    GridFunction slow = brute_forward(f);
    CHECK(rel_max_error(fast, slow) < 1e-12);
  }
}

TEST_CASE("transform rejects side mismatches") {
  GridSpec g(1, 4);
  GridFunction f(g, Side::frequency);
  CHECK_THROWS_AS(forward_transform(f), ContractError);
  GridFunction h(g, Side::physical);
  CHECK_THROWS_AS(inverse_transform(h), ContractError);
}

TEST_CASE("lp_norm basics") {
  GridSpec g(1, 4);
  GridFunction f(g, Side::physical);
  for (auto& z : f.values()) z = {-2.5, 0.0};
  for (double p : {0.5, 1.0, 2.0, 7.0}) CHECK(lp_norm(f, p) == doctest::Approx(2.5));
  CHECK(lp_norm(f, INFINITY) == doctest::Approx(2.5));

  // Indicator of half the grid, p = 2 -> 2^{-1/2}.
  GridFunction ind(g, Side::physical);
  for (int i = 0; i < g.n() / 2; ++i) ind[static_cast<std::size_t>(i)] = 1.0;
  CHECK(std::abs(lp_norm(ind, 2.0) - std::sqrt(0.5)) < 1e-12);

  CHECK_THROWS_AS(lp_norm(f, 0.0), ContractError);
  CHECK_THROWS_AS(lp_norm(f, -1.0), ContractError);
  GridFunction freq(g, Side::frequency);
  CHECK_THROWS_AS(lp_norm(freq, 2.0), ContractError);
}

TEST_CASE("lp_norm is monotone under pointwise domination and 1-homogeneous") {
  GridSpec g(1, 4);
  for (std::uint64_t s = 0; s < 20; ++s) {
    GridFunction f = random_physical(g, s);
    GridFunction dom = f;
    Rng rng(mix_seed({s, 99}));
    for (auto& z : dom.values()) z *= 1.0 + rng.uniform01();
    const cplx c{1.7, -0.3};
    for (double p : {0.5, 1.0, 2.0, 3.5}) {
      CHECK(lp_norm(f, p) <= lp_norm(dom, p) * (1.0 + 1e-12));
      CHECK(lp_norm(c * f, p) ==
            doctest::Approx(std::abs(c) * lp_norm(f, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("inner product: conjugate symmetry, norms, orthogonality") {
  GridSpec g(1, 4);
  GridFunction f = random_physical(g, 3);
  GridFunction h = random_physical(g, 4);
  CHECK(std::abs(inner_product(f, h) - std::conj(inner_product(h, f))) < 1e-14);
  CHECK(std::abs(inner_product(f, f).real() - std::pow(lp_norm(f, 2.0), 2)) <
        1e-12);

  GridFunction one(g, Side::physical);
  for (auto& z : one.values()) z = 1.0;
  CHECK(std::abs(inner_product(one, tone(g, {3, 0}))) < 1e-14);

  GridSpec g2(1, 5);
  GridFunction other(g2, Side::physical);
  CHECK_THROWS_AS(inner_product(f, other), ContractError);
}

TEST_CASE("Parseval: <f,g> physical = N^d <fhat, ghat>") {
  // The constant is pinned by the 1/N^d forward normalization; checked
  // against the brute-force DFT oracle.
  for (int d : {1, 2}) {
    GridSpec g(d, 4);
    GridFunction f = random_physical(g, 21);
    GridFunction h = random_physical(g, 22);
    const cplx lhs = inner_product(f, h);
    const cplx rhs_fast =
        static_cast<double>(g.total()) *
        inner_product(forward_transform(f), forward_transform(h));
    const cplx rhs_slow = static_cast<double>(g.total()) *
                          inner_product(brute_forward(f), brute_forward(h));
    CHECK(std::abs(lhs - rhs_fast) < 1e-12 * std::abs(lhs));
    CHECK(std::abs(lhs - rhs_slow) < 1e-12 * std::abs(lhs));
  }
}

TEST_CASE("grid spec invariants") {
  CHECK_THROWS_AS(GridSpec(3, 5), ContractError);
  CHECK_THROWS_AS(GridSpec(1, 3), ContractError);
  GridSpec g(2, 4);
  CHECK(g.n() == 32);
  CHECK(g.total() == 1024);
  // Frequency lattice covers the annuli up to k = K-1.
  CHECK(std::abs(freq_abs(g, {-g.n() / 2, 0})) == std::exp2(g.K));
}

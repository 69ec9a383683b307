#include "lpfield/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>

namespace lpfield {

bool cube_contains(const DyadicCube& outer, const DyadicCube& inner, int d) {
  if (outer.level > inner.level) return false;
  const int shift = inner.level - outer.level;
  for (int ax = 0; ax < d; ++ax) {
    if ((inner.corner[ax] >> shift) != outer.corner[ax]) return false;
  }
  return true;
}

void SequenceCoeffs::set(const DyadicCube& q, cplx v) {
  require(q.level >= 0 && q.level <= max_level_,
          "SequenceCoeffs: cube level outside depth");
  const int side = 1 << q.level;
  for (int ax = 0; ax < d_; ++ax) {
    require(q.corner[ax] >= 0 && q.corner[ax] < side,
            "SequenceCoeffs: corner outside [0,1)^d");
  }
  m_[q] = v;
}

cplx SequenceCoeffs::get(const DyadicCube& q) const {
  auto it = m_.find(q);
  return it == m_.end() ? cplx{0.0, 0.0} : it->second;
}

std::size_t SequenceCoeffs::support_size() const {
  std::size_t n = 0;
  for (const auto& [q, v] : m_)
    if (v != cplx{0.0, 0.0}) ++n;
  return n;
}

namespace {

// Cells covered by Q, as per-axis [lo, hi) storage ranges.
struct CellRange {
  int lo0, hi0, lo1, hi1;
};

CellRange cube_cells(const GridSpec& g, const DyadicCube& q) {
  const int per = g.n() >> q.level;
  CellRange r{q.corner[0] * per, (q.corner[0] + 1) * per, 0, 1};
  if (g.d == 2) {
    r.lo1 = q.corner[1] * per;
    r.hi1 = (q.corner[1] + 1) * per;
  }
  return r;
}

double coeff_weight(const DyadicCube& q, double s, int d) {
  // |Q|^{-s/d - 1/2} = 2^{level (s + d/2)}
  return std::exp2(q.level * (s + d / 2.0));
}

}  // namespace

GridFunction g_function(const SequenceCoeffs& b, double s, double q,
                        const GridSpec& spec) {
  require(b.dim() == spec.d, "g_function: dimension mismatch");
  require(b.max_level() <= spec.K - 1, "g_function: levels exceed grid depth");
  const bool qinf = std::isinf(q);
  GridFunction out(spec, Side::physical);
  std::vector<double> acc(spec.total(), 0.0);
  for (const auto& [cube, v] : b.entries()) {
    const double a = std::abs(v);
    if (a == 0.0) continue;
    const double w = coeff_weight(cube, s, spec.d) * a;
    const double contrib = qinf ? w : std::pow(w, q);
    const CellRange r = cube_cells(spec, cube);
    for (int i0 = r.lo0; i0 < r.hi0; ++i0) {
      for (int i1 = r.lo1; i1 < r.hi1; ++i1) {
        double& slot = acc[ravel(spec, {i0, i1})];
        slot = qinf ? std::max(slot, contrib) : slot + contrib;
      }
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = qinf ? acc[i] : std::pow(acc[i], 1.0 / q);
  }
  return out;
}

double sequence_norm(const SequenceCoeffs& b, const SpaceParams& params,
                     const GridSpec& spec) {
  return lp_norm(g_function(b, params.s, params.q, spec), params.p);
}

double f_space_norm(const GridFunction& f, const LPPartition& P,
                    const SpaceParams& params) {
  require(f.side() == Side::physical, "f_space_norm: physical side required");
  require(f.spec() == P.spec(), "f_space_norm: spec mismatch");
  require(!(params.scale == Scale::F && std::isinf(params.p)),
          "f_space_norm: F-scale with p = inf uses f_infty_norm");
  const GridSpec& g = f.spec();
  const GridFunction fhat = forward_transform(f);
  const bool qinf = std::isinf(params.q);

  if (params.scale == Scale::B) {
    long double acc = 0.0L;
    double sup = 0.0;
    for (int k = 0; k < P.bands(); ++k) {
      const GridFunction bk = P.band_project_spectrum(fhat, k);
      const double term = std::exp2(k * params.s) * lp_norm(bk, params.p);
      if (qinf) {
        sup = std::max(sup, term);
      } else {
        acc += std::pow((long double)term, (long double)params.q);
      }
    }
    if (qinf) return sup;
    return static_cast<double>(
        std::pow(acc, 1.0L / (long double)params.q));
  }

  std::vector<double> stack(g.total(), 0.0);
  for (int k = 0; k < P.bands(); ++k) {
    const GridFunction bk = P.band_project_spectrum(fhat, k);
    const double w = std::exp2(k * params.s);
    for (std::size_t i = 0; i < stack.size(); ++i) {
      const double t = w * std::abs(bk[i]);
      stack[i] = qinf ? std::max(stack[i], t) : stack[i] + std::pow(t, params.q);
    }
  }
  GridFunction env(g, Side::physical);
  for (std::size_t i = 0; i < stack.size(); ++i) {
    env[i] = qinf ? stack[i] : std::pow(stack[i], 1.0 / params.q);
  }
  return lp_norm(env, params.p);
}

double f_infty_norm(const GridFunction& f, const LPPartition& P, double q,
                    double s) {
  require(f.side() == Side::physical, "f_infty_norm: physical side required");
  require(f.spec() == P.spec(), "f_infty_norm: spec mismatch");
  require(q > 0.0, "f_infty_norm: q must be positive");
  const GridSpec& g = f.spec();
  const int K = g.K;
  const bool qinf = std::isinf(q);
  const GridFunction fhat = forward_transform(f);

  const GridFunction b0 = P.band_project_spectrum(fhat, 0);
  double term0 = 0.0;
  for (const auto& z : b0.values()) term0 = std::max(term0, std::abs(z));

  // vals[k][x] = (2^{ks} |phi_k * f(x)|)^q (or the plain weighted modulus
  // for q = inf); suffix[x] accumulates sum/max over k >= mu as mu descends.
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(K));
  for (int k = 1; k < K; ++k) {
    const GridFunction bk = P.band_project_spectrum(fhat, k);
    auto& row = vals[static_cast<std::size_t>(k)];
    row.resize(g.total());
    const double w = std::exp2(k * s);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const double t = w * std::abs(bk[i]);
      row[i] = qinf ? t : std::pow(t, q);
    }
  }

  double best = 0.0;
  std::vector<double> suffix(g.total(), 0.0);
  for (int mu = K - 1; mu >= 1; --mu) {
    const auto& row = vals[static_cast<std::size_t>(mu)];
    for (std::size_t i = 0; i < suffix.size(); ++i) {
      suffix[i] = qinf ? std::max(suffix[i], row[i]) : suffix[i] + row[i];
    }
    // Aggregate cells into the 2^{mu d} cubes of level mu.
    const int per = g.n() >> mu;  // cells per cube side
    const int cubes = 1 << mu;
    std::vector<double> bin(static_cast<std::size_t>(g.d == 2 ? cubes * cubes
                                                              : cubes),
                            0.0);
    for (std::size_t i = 0; i < suffix.size(); ++i) {
      const IVec2 iv = unravel(g, i);
      const int c0 = iv[0] / per;
      const std::size_t bidx =
          g.d == 2 ? static_cast<std::size_t>(c0) * cubes + iv[1] / per
                   : static_cast<std::size_t>(c0);
      bin[bidx] = qinf ? std::max(bin[bidx], suffix[i]) : bin[bidx] + suffix[i];
    }
    const double cube_vol = std::exp2(-mu * g.d);
    for (double v : bin) {
      double val;
      if (qinf) {
        val = v;
      } else {
        const double mean = v / (cube_vol * static_cast<double>(g.total()));
        val = std::pow(mean, 1.0 / q);
      }
      best = std::max(best, val);
    }
  }
  return term0 + best;
}

PhiFrame PhiFrame::build(const GridSpec& spec) {
  PhiFrame fr(spec);
  const std::size_t total = spec.total();
  const int L = spec.K;
  fr.win_.assign(static_cast<std::size_t>(L), std::vector<double>(total, 0.0));
  fr.dual_.assign(static_cast<std::size_t>(L), std::vector<double>(total, 0.0));
  std::vector<double> denom(total, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    const double r = freq_abs(spec, freq_point(spec, i));
    for (int j = 2; j < L; ++j) {
      const double w = lp_window_radial(j - 2, r);
      fr.win_[static_cast<std::size_t>(j)][i] = w;
      denom[i] += w * w;
    }
  }
  for (int j = 2; j < L; ++j) {
    auto& dual = fr.dual_[static_cast<std::size_t>(j)];
    const auto& win = fr.win_[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < total; ++i) {
      dual[i] = denom[i] > 1e-12 ? win[i] / denom[i] : 0.0;
    }
  }
  // Frame identity sum_j dual_j win_j = 1 on the resolved range.
  const double rad = fr.resolved_radius();
  for (std::size_t i = 0; i < total; ++i) {
    if (freq_abs(spec, freq_point(spec, i)) > rad) continue;
    double s = 0.0;
    for (int j = 2; j < L; ++j) {
      s += fr.dual_[static_cast<std::size_t>(j)][i] *
           fr.win_[static_cast<std::size_t>(j)][i];
    }
    if (std::abs(s - 1.0) > 1e-10) {
      throw ContractError("PhiFrame: frame identity violated on resolved range");
    }
  }
  return fr;
}

const std::vector<double>& PhiFrame::window(int level) const {
  require(level >= 0 && level < levels(), "PhiFrame: level out of range");
  return win_[static_cast<std::size_t>(level)];
}

const std::vector<double>& PhiFrame::dual_window(int level) const {
  require(level >= 0 && level < levels(), "PhiFrame: level out of range");
  return dual_[static_cast<std::size_t>(level)];
}

namespace {

std::size_t corner_grid_index(const GridSpec& g, const DyadicCube& q) {
  const int per = g.n() >> q.level;
  IVec2 iv{q.corner[0] * per, g.d == 2 ? q.corner[1] * per : 0};
  return ravel(g, iv);
}

void for_each_cube(int d, int level, const std::function<void(DyadicCube)>& fn) {
  const int side = 1 << level;
  for (int c0 = 0; c0 < side; ++c0) {
    if (d == 1) {
      fn(DyadicCube{level, {c0, 0}});
    } else {
      for (int c1 = 0; c1 < side; ++c1) fn(DyadicCube{level, {c0, c1}});
    }
  }
}

}  // namespace

SequenceCoeffs phi_analysis(const GridFunction& f, const PhiFrame& frame) {
  require(f.side() == Side::physical, "phi_analysis: physical side required");
  require(f.spec() == frame.spec(), "phi_analysis: spec mismatch");
  const GridSpec& g = f.spec();
  const GridFunction fhat = forward_transform(f);
  SequenceCoeffs v(g.d, frame.levels() - 1);
  for (int j = 0; j < frame.levels(); ++j) {
    GridFunction uj(g, Side::physical);
    if (j >= 2) {
      const auto& dual = frame.dual_window(j);
      GridFunction spec_j(g, Side::frequency);
      for (std::size_t i = 0; i < spec_j.size(); ++i)
        spec_j[i] = dual[i] * fhat[i];
      uj = inverse_transform(spec_j);
    }
    const double half = std::exp2(-j * g.d / 2.0);  // |Q|^{1/2}
    for_each_cube(g.d, j, [&](DyadicCube q) {
      v.set(q, half * uj[corner_grid_index(g, q)]);
    });
  }
  return v;
}

GridFunction phi_synthesis(const SequenceCoeffs& v, const PhiFrame& frame) {
  const GridSpec& g = frame.spec();
  require(v.dim() == g.d, "phi_synthesis: dimension mismatch");
  require(v.max_level() <= frame.levels() - 1,
          "phi_synthesis: levels exceed frame depth");
  GridFunction acc(g, Side::frequency);
  std::vector<GridFunction> deltas;
  for (int j = 2; j < frame.levels(); ++j) {
    deltas.emplace_back(g, Side::physical);
  }
  const double nd = static_cast<double>(g.total());
  for (const auto& [cube, val] : v.entries()) {
    if (val == cplx{0.0, 0.0} || cube.level < 2) continue;
    const double half = std::exp2(-cube.level * g.d / 2.0);
    deltas[static_cast<std::size_t>(cube.level - 2)]
        [corner_grid_index(g, cube)] += half * val;
  }
  for (int j = 2; j < frame.levels(); ++j) {
    const GridFunction shat = forward_transform(deltas[j - 2]);
    const auto& win = frame.window(j);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      acc[i] += nd * shat[i] * win[i];
    }
  }
  return inverse_transform(acc);
}

GridFunction frame_function(const PhiFrame& frame, const DyadicCube& q,
                            bool dual) {
  const GridSpec& g = frame.spec();
  const auto& win = dual ? frame.dual_window(q.level) : frame.window(q.level);
  const double half = std::exp2(-q.level * g.d / 2.0);
  GridFunction spec(g, Side::frequency);
  const double inv = 1.0 / g.n();
  const Vec2 xq{q.corner[0] * (g.n() >> q.level) * inv,
                g.d == 2 ? q.corner[1] * (g.n() >> q.level) * inv : 0.0};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const IVec2 xi = freq_point(g, i);
    const double phase =
        -2.0 * std::numbers::pi * (xq[0] * xi[0] + xq[1] * xi[1]);
    spec[i] = half * win[i] * std::polar(1.0, phase);
  }
  return inverse_transform(spec);
}

namespace {

// Count pyramid: cells with g > threshold inside each dyadic cube, for all
// cube levels 0..K-1.
struct CountPyramid {
  std::vector<std::vector<long>> cnt;  // [level][cube raveled by (c0, c1)]

  long at(const GridSpec& g, const DyadicCube& q) const {
    const int side = 1 << q.level;
    const std::size_t idx =
        g.d == 2 ? static_cast<std::size_t>(q.corner[0]) * side + q.corner[1]
                 : static_cast<std::size_t>(q.corner[0]);
    return cnt[static_cast<std::size_t>(q.level)][idx];
  }
};

CountPyramid build_counts(const GridSpec& g, const std::vector<double>& gv,
                          double threshold) {
  CountPyramid p;
  const int top = g.K - 1;
  p.cnt.resize(static_cast<std::size_t>(top) + 1);
  const int side_top = 1 << top;
  const std::size_t bins = g.d == 2
                               ? static_cast<std::size_t>(side_top) * side_top
                               : static_cast<std::size_t>(side_top);
  p.cnt[static_cast<std::size_t>(top)].assign(bins, 0);
  const int per = g.n() >> top;
  for (std::size_t i = 0; i < gv.size(); ++i) {
    if (!(gv[i] > threshold)) continue;
    const IVec2 iv = unravel(g, i);
    const int c0 = iv[0] / per;
    const std::size_t bidx =
        g.d == 2 ? static_cast<std::size_t>(c0) * side_top + iv[1] / per
                 : static_cast<std::size_t>(c0);
    ++p.cnt[static_cast<std::size_t>(top)][bidx];
  }
  for (int l = top - 1; l >= 0; --l) {
    const int side = 1 << l;
    const std::size_t n =
        g.d == 2 ? static_cast<std::size_t>(side) * side
                 : static_cast<std::size_t>(side);
    p.cnt[static_cast<std::size_t>(l)].assign(n, 0);
    const int child_side = side * 2;
    for (int c0 = 0; c0 < child_side; ++c0) {
      if (g.d == 1) {
        p.cnt[static_cast<std::size_t>(l)][static_cast<std::size_t>(c0 / 2)] +=
            p.cnt[static_cast<std::size_t>(l + 1)][static_cast<std::size_t>(c0)];
      } else {
        for (int c1 = 0; c1 < child_side; ++c1) {
          p.cnt[static_cast<std::size_t>(l)]
               [static_cast<std::size_t>(c0 / 2) * side + c1 / 2] +=
              p.cnt[static_cast<std::size_t>(l + 1)]
                   [static_cast<std::size_t>(c0) * child_side + c1];
        }
      }
    }
  }
  return p;
}

long cube_cell_count(const GridSpec& g, int level) {
  const long per = g.n() >> level;
  return g.d == 2 ? per * per : per;
}

}  // namespace

AtomDecomposition atom_decompose(const SequenceCoeffs& b,
                                 const SpaceParams& params,
                                 const GridSpec& spec) {
  require(params.p > 0.0 && params.p <= 1.0,
          "atom_decompose: requires 0 < p <= 1");
  require(params.q >= params.p, "atom_decompose: requires p <= q");
  AtomDecomposition out;
  if (b.support_size() == 0) return out;

  const GridFunction gf = g_function(b, params.s, params.q, spec);
  std::vector<double> gv(gf.size());
  for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = gf[i].real();

  // Height assignment: the largest n such that g > 2^n on more than half of Q.
  // Per cube this is determined by the upper-median of g over its cells.
  std::map<int, std::vector<DyadicCube>> by_height;
  for (const auto& [cube, val] : b.entries()) {
    if (val == cplx{0.0, 0.0}) continue;
    const CellRange r = cube_cells(spec, cube);
    std::vector<double> cells;
    for (int i0 = r.lo0; i0 < r.hi0; ++i0)
      for (int i1 = r.lo1; i1 < r.hi1; ++i1)
        cells.push_back(gv[ravel(spec, {i0, i1})]);
    std::sort(cells.begin(), cells.end());
    const std::size_t m = cells.size();
    // #{g > x} > m/2  <=>  x < T
    const double T = cells[m - 1 - m / 2];
    int n = static_cast<int>(std::floor(std::log2(T)));
    while (std::exp2(n) >= T) --n;
    while (std::exp2(n + 1) < T) ++n;
    by_height[n].push_back(cube);
  }

  for (const auto& [n, cubes] : by_height) {
    const double threshold = std::exp2(n);
    const CountPyramid counts = build_counts(spec, gv, threshold);

    // Maximal dyadic cubes with density > 1/2, top-down.
    std::set<DyadicCube> maximal;
    std::set<DyadicCube> covered;  // any ancestor (or self) already maximal
    for (int l = 0; l <= spec.K - 1; ++l) {
      for_each_cube(spec.d, l, [&](DyadicCube q) {
        DyadicCube parent{l - 1, {q.corner[0] >> 1, q.corner[1] >> 1}};
        const bool parent_covered = l > 0 && covered.count(parent) > 0;
        if (parent_covered) {
          covered.insert(q);
          return;
        }
        if (2 * counts.at(spec, q) > cube_cell_count(spec, l)) {
          maximal.insert(q);
          covered.insert(q);
        }
      });
    }

    // Group the height-n support cubes under their maximal ancestor.
    std::map<DyadicCube, std::vector<DyadicCube>> groups;
    for (const DyadicCube& q : cubes) {
      DyadicCube anc = q;
      bool found = false;
      for (int l = q.level; l >= 0; --l) {
        DyadicCube cand{l, {q.corner[0] >> (q.level - l),
                            q.corner[1] >> (q.level - l)}};
        if (maximal.count(cand)) {
          anc = cand;
          found = true;
          break;
        }
      }
      require(found, "atom_decompose: support cube without maximal ancestor");
      groups[anc].push_back(q);
    }

    for (const auto& [q0, members] : groups) {
      SequenceCoeffs raw(spec.d, b.max_level());
      for (const DyadicCube& q : members) raw.set(q, b.get(q));
      const GridFunction gr = g_function(raw, params.s, params.q, spec);
      double w = 0.0;
      for (const auto& z : gr.values()) w = std::max(w, z.real());
      require(w > 0.0, "atom_decompose: vanishing group");
      const double lam = w * std::exp2(-q0.level * spec.d / params.p);
      SequenceCoeffs r(spec.d, b.max_level());
      for (const DyadicCube& q : members) r.set(q, b.get(q) / lam);
      out.lambda.push_back(lam);
      out.atoms.push_back(InftyAtom{q0, std::move(r)});
    }
  }

  long double acc = 0.0L;
  for (double l : out.lambda) acc += std::pow((long double)l, (long double)params.p);
  out.lambda_lp_sum =
      static_cast<double>(std::pow(acc, 1.0L / (long double)params.p));
  return out;
}

bool atom_is_valid(const InftyAtom& atom, const SpaceParams& params,
                   const GridSpec& spec, double tol) {
  for (const auto& [q, v] : atom.r.entries()) {
    if (v == cplx{0.0, 0.0}) continue;
    if (!cube_contains(atom.q0, q, spec.d)) return false;
  }
  const GridFunction gr = g_function(atom.r, params.s, params.q, spec);
  double sup = 0.0;
  for (const auto& z : gr.values()) sup = std::max(sup, z.real());
  const double bound = std::exp2(atom.q0.level * spec.d / params.p);
  return sup <= bound * (1.0 + tol);
}

}  // namespace lpfield

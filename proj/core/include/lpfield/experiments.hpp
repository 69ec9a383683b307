#ifndef LPFIELD_EXPERIMENTS_HPP
#define LPFIELD_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lpfield/grid.hpp"
#include "lpfield/psido.hpp"
#include "lpfield/spaces.hpp"
#include "lpfield/symbols.hpp"

namespace lpfield {

/// Norm of f in the space described by params, routing F-scale p = inf to the
/// Carleson-type norm.
double space_norm(const GridFunction& f, const LPPartition& P,
                  const SpaceParams& params);

/// Radial profile of eta_hat: vanishes for r <= 1/4, equals 1 on
/// [2^{-1/2}, 2^{1/2}], supported in r < 1.9.
double eta_hat_profile(double r);
/// Radial profile of the companion eta~_hat: 1 on r <= 1.9 (hence on supp
/// eta_hat), supported in r <= 2 (the class E(1)).
double eta_tilde_hat_profile(double r);

/// S_k multiplier: Shat(xi) = 2^{mk} e^{2 pi i |xi|^{1-rho}} eta_hat(2^{-k} xi).
Symbol make_sk(int k, double m, double rho, const GridSpec& spec);

/// Random cube family of level k: cubes of Q(k) activate independently with
/// probability 2^{-kd(1-rho)}; the sampled function is
///   f(x) = 2^{kd(1-rho)/p} sum_{Q active} eta~(2^k (x - c_Q)).
struct RandomCubeFamily {
  GridSpec spec;
  int level = 1;
  double rho = 0.5;
  double p = 2.0;
  std::uint64_t seed = 0;
};

std::vector<DyadicCube> sample_active_cubes(const RandomCubeFamily& fam);
GridFunction sample_random_f(const RandomCubeFamily& fam);

/// Least-squares fit of log(value) against log(level).
struct GrowthFit {
  std::vector<std::pair<double, double>> points;  // (level, value)
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS residual in log-log
};

GrowthFit fit_loglog(const std::vector<std::pair<double, double>>& points);

struct SharpnessConfig {
  GridSpec spec;
  double p = 2.0, q = 1.0, t = 1.0;
  double rho = 0.5;
  double m = 0.0;  // must equal -d(1-rho)(1/p - 1/2)
  std::vector<int> levels;  // values of L
  int seeds = 64;
  std::uint64_t seed0 = 0;
  bool drop_smallest = true;  // drop the smallest level from the fits
};

struct SharpnessResult {
  SharpnessConfig config;
  // one row per (level, seed): ||(sum_k |f^k|^q)^{1/q}||_p^p and the same
  // with t and S_k f^k.
  struct Row {
    int level;
    int seed;
    double input_pth;
    double output_pth;
  };
  std::vector<Row> rows;
  std::vector<double> input_by_level;   // (mean_w input_pth)^{1/p}
  std::vector<double> output_by_level;  // (mean_w output_pth)^{1/p}
  GrowthFit input_fit, output_fit, ratio_fit;
};

/// Ensemble growth experiment behind the (log R)^{1/q-1/p} sharpness claim:
/// the input ensemble scales like L^{1/p}, the output ensemble like L^{1/t}.
SharpnessResult sharpness_growth(const SharpnessConfig& cfg);

/// Besov-scale family h_k(x) = k^{-1/t} 2^{kd/p} eta~(2^k x).
struct BesovRow {
  int k;
  double norm_h;          // ||h_k||_p
  double norm_h_scaled;   // ||h_k||_p k^{1/t}
  double norm_sh;         // ||S_k h_k||_p
  double norm_sh_scaled;  // ||S_k h_k||_p k^{1/t}
};

std::vector<BesovRow> besov_family_check(double p, double t, double rho,
                                         const std::vector<int>& k_list,
                                         const GridSpec& spec);

enum class SigmaRule { supercritical, critical };

/// p = inf family: g_k has spectrum sigma_k 2^{-rho k d} W(2^{2-rho k}
/// (xi - 2^k e1)) with W the annulus profile; sigma_k is
/// 2^{-k(m + d(1-rho)/2)/2} (supercritical) or k^{-1/t} (critical).
struct LinfRow {
  int k;
  double sigma;
  double norm_g;        // ||g_k||_inf
  double norm_g_ratio;  // ||g_k||_inf / sigma_k
  double norm_sg;       // ||S_k g_k||_inf
  double partial_sum;   // running sum of ||S_j g_j||_inf^t (critical rule)
  double max_u;         // max |U_k| for the unit-normalized phase window
};

std::vector<LinfRow> linf_family_check(double m, double rho, SigmaRule rule,
                                       double t, const std::vector<int>& k_list,
                                       const GridSpec& spec);

enum class TestFamily { bandlimited, cubes, packets };

TestFamily parse_family(const std::string& name);

struct ProbeResult {
  std::vector<double> ratios;  // ||T_a f||_out / ||f||_in per draw, seed order
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  double median_ratio = 0.0;
};

/// Ratio statistics of ||T_a f||_out / ||f||_in over n seeded draws.
/// Stability under grid refinement is evidence for boundedness, growth is
/// evidence against; interpretation is left to the caller.
ProbeResult boundedness_probe(const Symbol& a, const SpaceParams& in_params,
                              const SpaceParams& out_params, TestFamily family,
                              int n, std::uint64_t seed,
                              const LPPartition& P);

/// Random band-limited draw: unit complex Gaussian spectrum on
/// {|xi| <= radius}, zero outside.
GridFunction random_bandlimited(const GridSpec& spec, double radius,
                                std::uint64_t seed);

}  // namespace lpfield

#endif

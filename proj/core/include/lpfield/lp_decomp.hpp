#ifndef LPFIELD_LP_DECOMP_HPP
#define LPFIELD_LP_DECOMP_HPP

#include <vector>

#include "lpfield/grid.hpp"

namespace lpfield {

/// C-infinity transition built from the exp(-1/t) mollifier ratio:
/// 0 for t <= 0, 1 for t >= 1, strictly increasing in between.
double smoothstep(double t);

/// Radial bump psi with psi = 1 on r <= 1 and psi = 0 on r >= 2.
double lp_bump(double r);

/// Radial profile of omega_k: lp_bump(r/2^k) - lp_bump(r/2^{k-1}) for k >= 1,
/// lp_bump(r) for k = 0.
double lp_window_radial(int k, double r);

/// Smooth dyadic partition of unity {omega_k} on the frequency lattice and
/// the derived convolution family phi_k = omega_k^vee.
///
/// Bands k = 0..K-1. omega_0 is supported in {|xi| <= 2}, omega_k (k >= 1) in
/// the annulus {2^{k-1} <= |xi| <= 2^{k+1}}, and the windows sum to 1 exactly
/// at every lattice point with |xi| <= 2^{K-1}.
class LPPartition {
public:
  static LPPartition build(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int bands() const { return spec_.K; }

  const std::vector<double>& window(int k) const;
  double window(int k, std::size_t freq_idx) const;

  /// (omega_k fhat)^vee, i.e. phi_k * f. Input must be physical side.
  GridFunction band_project(const GridFunction& f, int k) const;

  /// Same band projection applied to an already-transformed spectrum.
  GridFunction band_project_spectrum(const GridFunction& fhat, int k) const;

  /// Central-difference estimate of sup_xi 2^{k|alpha|} |d^alpha omega_k|
  /// maximized over all multi-indices with |alpha| = order (order 1 or 2).
  double window_derivative_bound(int k, int order) const;

private:
  explicit LPPartition(const GridSpec& spec) : spec_(spec) {}
  GridSpec spec_;
  std::vector<std::vector<double>> win_;  // [band][freq storage index]
};

inline LPPartition build_partition(const GridSpec& spec) {
  return LPPartition::build(spec);
}

/// Peetre maximal function M_{sigma,r} u(x) = sup_y |u(x+y)| / (1+r|y|)^sigma
/// with the sup over all lattice offsets and |y| the periodic distance.
/// `max_radius` (torus units) restricts the offset search to |y| <= max_radius
/// as a cost cutoff; the default is the exact full-torus sup.
GridFunction peetre_maximal(const GridFunction& u, double sigma, double r,
                            double max_radius = INFINITY);

/// Hardy-Littlewood maximal function M_t u = (M(|u|^t))^{1/t}, with M the sup
/// of averages over periodic cubes centered at x.
GridFunction hl_maximal(const GridFunction& u, double t);

}  // namespace lpfield

#endif

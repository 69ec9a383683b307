#ifndef LPFIELD_PSIDO_HPP
#define LPFIELD_PSIDO_HPP

#include <cstdint>
#include <vector>

#include "lpfield/grid.hpp"
#include "lpfield/symbols.hpp"

namespace lpfield {

/// T_a f(x) = sum_xi a(x, xi) fhat(xi) e^{2 pi i <x, xi>}, the exact discrete
/// sum over the frequency lattice. x-independent symbols dispatch to the
/// multiplier fast path (transform, multiply, inverse); the general path is
/// the dense O(N^{2d}) sum.
GridFunction apply(const Symbol& a, const GridFunction& f);

/// Force one of the two paths (consistency tests).
GridFunction apply_multiplier_path(const Symbol& a, const GridFunction& f);
GridFunction apply_dense_path(const Symbol& a, const GridFunction& f);

/// Discrete adjoint: <T_a f, g> = <f, apply_adjoint(a, g)> exactly. Equals
/// T_[conj a(y, xi)] and costs O(N^{2d}).
GridFunction apply_adjoint(const Symbol& a, const GridFunction& g);

/// T_[A] f(x) = (1/N^d) sum_y sum_xi A(x,y,xi) f(y) e^{2 pi i <x-y, xi>}.
/// Cost: O(N^{2d}) when A is independent of y or of x, O(N^{3d}) dense.
GridFunction apply_compound(const CompoundSymbol& A, const GridFunction& f);

/// Dense O(N^{3d}) path regardless of structure (oracle for the fast paths).
GridFunction apply_compound_dense(const CompoundSymbol& A,
                                  const GridFunction& f);

/// n_{s1}(D) T_a n_{s2}(D) f.
GridFunction compose_with_multiplier(double s1, const Symbol& a, double s2,
                                     const GridFunction& f);

/// Dense kernel of the band operator T_{a_k} from a paradifferential split:
/// K_k(x,y) = sum_xi a_k(x,xi) e^{2 pi i <x-y, xi>}; the matrix acts on
/// samples weighted by 1/N^d.
struct BandKernel {
  int k = 0;
  GridSpec spec;
  std::vector<cplx> m;  // row-major K[x][y]

  cplx at(std::size_t x, std::size_t y) const {
    return m[x * spec.total() + y];
  }
};

BandKernel band_kernel(const ParadiffSplit& split, int k);

/// (1/N^d) K f.
GridFunction apply_kernel(const BandKernel& kernel, const GridFunction& f);

double kernel_max_abs(const BandKernel& kernel);

/// Max |K(x,y)| binned by periodic distance |x-y|; returns (distance, max)
/// per occupied bin, distances in torus units.
std::vector<std::pair<double, double>> kernel_radial_profile(
    const BandKernel& kernel, int bins = 64);

/// L2 -> L2 operator norm estimate by power iteration on T_a* T_a with the
/// discrete adjoint: 50 iterations or relative change < 1e-6.
double l2_operator_norm_estimate(const Symbol& a, const GridSpec& spec,
                                 std::uint64_t seed, int max_iters = 50,
                                 double rel_tol = 1e-6);

}  // namespace lpfield

#endif

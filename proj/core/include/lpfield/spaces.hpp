#ifndef LPFIELD_SPACES_HPP
#define LPFIELD_SPACES_HPP

#include <map>
#include <vector>

#include "lpfield/grid.hpp"
#include "lpfield/lp_decomp.hpp"

namespace lpfield {

enum class Scale { F, B };

/// (p, q, s) with 0 < p,q <= inf (use INFINITY), s real.
struct SpaceParams {
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;
  Scale scale = Scale::F;

  SpaceParams() = default;
  SpaceParams(double p_, double q_, double s_, Scale sc = Scale::F)
      : p(p_), q(q_), s(s_), scale(sc) {
    require(p > 0.0 && q > 0.0, "SpaceParams: p and q must be positive");
  }
};

/// Dyadic cube Q in [0,1)^d: side 2^{-level}, integer corner coordinates in
/// [0, 2^level)^d. Corner x_Q = corner * 2^{-level}, center c_Q = x_Q + half.
struct DyadicCube {
  int level = 0;
  IVec2 corner{0, 0};

  double side() const { return std::ldexp(1.0, -level); }
  double volume(int d) const { return std::ldexp(1.0, -level * d); }
  bool operator<(const DyadicCube& o) const {
    if (level != o.level) return level < o.level;
    if (corner[0] != o.corner[0]) return corner[0] < o.corner[0];
    return corner[1] < o.corner[1];
  }
  bool operator==(const DyadicCube& o) const {
    return level == o.level && corner == o.corner;
  }
};

/// Does `outer` contain `inner` (as dyadic cubes; equality counts)?
bool cube_contains(const DyadicCube& outer, const DyadicCube& inner, int d);

/// Complex coefficients indexed by dyadic cubes with l(Q) <= 1, finitely
/// supported up to max_level <= K-1. Lexicographic (level, corner) ordering
/// throughout, so every traversal is deterministic.
class SequenceCoeffs {
public:
  SequenceCoeffs() = default;
  SequenceCoeffs(int d, int max_level) : d_(d), max_level_(max_level) {}

  int dim() const { return d_; }
  int max_level() const { return max_level_; }

  void set(const DyadicCube& q, cplx v);
  cplx get(const DyadicCube& q) const;  // zero if absent
  const std::map<DyadicCube, cplx>& entries() const { return m_; }
  std::size_t support_size() const;

private:
  int d_ = 1;
  int max_level_ = 0;
  std::map<DyadicCube, cplx> m_;
};

/// g^{s,q}(b)(x) = (sum_Q (|Q|^{-s/d-1/2} |b_Q| chi_Q(x))^q)^{1/q} evaluated
/// exactly on the grid (cube indicators are unions of cells). q = inf is the
/// pointwise sup over cubes.
GridFunction g_function(const SequenceCoeffs& b, double s, double q,
                        const GridSpec& spec);

/// ||b||_{f_p^{s,q}} = || g^{s,q}(b) ||_{L^p}.
double sequence_norm(const SequenceCoeffs& b, const SpaceParams& params,
                     const GridSpec& spec);

/// Triebel-Lizorkin / Besov quasi-norm from band projections.
/// F-scale: || ( sum_k (2^{ks} |phi_k * f|)^q )^{1/q} ||_{L^p}  (p < inf)
/// B-scale: ( sum_k (2^{ks} ||phi_k * f||_{L^p})^q )^{1/q}
/// with q = inf replaced by the sup over k. F-scale with p = inf is rejected;
/// use f_infty_norm.
double f_space_norm(const GridFunction& f, const LPPartition& P,
                    const SpaceParams& params);

/// p = inf Carleson-type norm:
/// ||phi_0 * f||_inf + sup_P ( |P|^{-1} int_P sum_{k >= -log2 l(P)}
///                             (2^{ks} |phi_k * f|)^q )^{1/q}
/// with the sup over all dyadic cubes P of side 2^{-1} .. 2^{-(K-1)};
/// for q = inf the bracket degenerates to the sup over (k, x in P).
double f_infty_norm(const GridFunction& f, const LPPartition& P, double q,
                    double s);

/// Frame pair for the discrete phi-transform. Cube level j carries the
/// annulus window at scale 2^{j-2} (profile support {1/2 <= |xi| <= 2},
/// lower-bounded on [3/4, 5/3]); the two-level lag keeps each level's corner
/// sampling alias-free, which makes synthesis(analysis(f)) exact for f with
/// spectrum inside {|xi| <= 2^{K-3}}. Duals are theta / sum_j theta_j^2, so
/// the frame identity holds by construction and is validated on build.
class PhiFrame {
public:
  static PhiFrame build(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int levels() const { return spec_.K; }  // cube levels 0..K-1
  const std::vector<double>& window(int level) const;
  const std::vector<double>& dual_window(int level) const;
  /// Largest |xi| with guaranteed exact reconstruction.
  double resolved_radius() const { return std::ldexp(1.0, spec_.K - 3); }

private:
  explicit PhiFrame(const GridSpec& spec) : spec_(spec) {}
  GridSpec spec_;
  std::vector<std::vector<double>> win_, dual_;
};

/// v_Q = <f, theta~^Q>, theta^Q = |Q|^{1/2} theta_j(. - x_Q) for level-j Q.
/// Emits coefficients for every cube up to level K-1.
SequenceCoeffs phi_analysis(const GridFunction& f, const PhiFrame& frame);

/// f = sum_Q v_Q theta^Q.
GridFunction phi_synthesis(const SequenceCoeffs& v, const PhiFrame& frame);

/// Frame function theta^Q itself, as a grid function (used in tests and to
/// build localized inputs).
GridFunction frame_function(const PhiFrame& frame, const DyadicCube& q,
                            bool dual = false);

/// An infinity-atom: coefficients supported on cubes inside q0 with
/// ||g^{s,q}(r)||_inf <= |q0|^{-1/p}.
struct InftyAtom {
  DyadicCube q0;
  SequenceCoeffs r;
};

struct AtomDecomposition {
  std::vector<double> lambda;
  std::vector<InftyAtom> atoms;
  double lambda_lp_sum = 0.0;  // (sum |lambda_j|^p)^{1/p}
};

/// Decompose b (exactly) into infinity-atoms for f_p^{s,q}, 0 < p <= 1,
/// p <= q <= inf. Level-set construction: cubes are classified by the dyadic
/// height at which g^{s,q}(b) majorizes them, grouped under maximal dyadic
/// ancestors, and each group is normalized to meet the sup bound with
/// equality.
AtomDecomposition atom_decompose(const SequenceCoeffs& b,
                                 const SpaceParams& params,
                                 const GridSpec& spec);

/// Direct check of the atom postconditions (support containment and the
/// normalized sup bound), used by tests and the acceptance suite.
bool atom_is_valid(const InftyAtom& atom, const SpaceParams& params,
                   const GridSpec& spec, double tol = 1e-12);

}  // namespace lpfield

#endif

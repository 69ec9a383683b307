#ifndef LPFIELD_SYMBOLS_HPP
#define LPFIELD_SYMBOLS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lpfield/grid.hpp"
#include "lpfield/lp_decomp.hpp"

namespace lpfield {

/// Declared symbol class parameters. The declaration is a claim checked
/// empirically by seminorm_estimate, not an enforced property.
struct SymbolClass {
  double m = 0.0;
  double rho = 1.0;
  double delta = 0.0;
};

/// Symbol a(x, xi): x in torus units [0,1)^d, xi in frequency-lattice units
/// (real-valued; integer at lattice points). Evaluators are total on the grid
/// and, for the closed-form constructions here, off-lattice as well.
class Symbol {
public:
  using Eval = std::function<cplx(const Vec2& x, const Vec2& xi)>;

  Symbol() = default;
  Symbol(std::string name, SymbolClass cls, bool x_independent, Eval eval)
      : name_(std::move(name)),
        cls_(cls),
        x_independent_(x_independent),
        eval_(std::move(eval)) {}

  cplx operator()(const Vec2& x, const Vec2& xi) const { return eval_(x, xi); }
  const std::string& name() const { return name_; }
  const SymbolClass& cls() const { return cls_; }
  bool x_independent() const { return x_independent_; }

private:
  std::string name_;
  SymbolClass cls_;
  bool x_independent_ = false;
  Eval eval_;
};

/// Compound symbol A(x, y, xi) with class (m, rho, delta1, delta2).
class CompoundSymbol {
public:
  using Eval = std::function<cplx(const Vec2& x, const Vec2& y, const Vec2& xi)>;

  struct Class {
    double m = 0.0;
    double rho = 1.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
  };

  CompoundSymbol() = default;
  CompoundSymbol(std::string name, Class cls, bool x_independent,
                 bool y_independent, Eval eval)
      : name_(std::move(name)),
        cls_(cls),
        x_independent_(x_independent),
        y_independent_(y_independent),
        eval_(std::move(eval)) {}

  cplx operator()(const Vec2& x, const Vec2& y, const Vec2& xi) const {
    return eval_(x, y, xi);
  }
  const std::string& name() const { return name_; }
  const Class& cls() const { return cls_; }
  bool x_independent() const { return x_independent_; }
  bool y_independent() const { return y_independent_; }

private:
  std::string name_;
  Class cls_;
  bool x_independent_ = false;
  bool y_independent_ = false;
  Eval eval_;
};

/// Model multiplier c_{m,rho}(xi) = e^{-2 pi i |xi|^{1-rho}} (1+|xi|^2)^{m/2}.
/// The phase ramp is smoothly switched off below |xi| < 1/2 so the symbol is
/// C^inf at the origin; every integer lattice point is unaffected.
Symbol make_cmrho(double m, double rho);

/// n_s(xi) = (1+|xi|^2)^{s/2}.
Symbol make_ns(double s);

/// Modulation symbol a(x, xi) = e^{2 pi i <x, v>} (x-dependent pure tone).
Symbol make_tone(const IVec2& v, int d);

/// x-modulated model symbol c_{m,rho}(xi) (1 + beta m_c(x)) where m_c is a
/// real trigonometric polynomial with |spectrum| <= J and coefficient decay
/// (1+|eta|)^{-decay}; phases are drawn deterministically from `seed`. Smooth
/// in x with full (but decaying) x-spectrum up to J — the model input for the
/// paradifferential and kernel diagnostics.
Symbol make_xmod_cmrho(double m, double rho, double decay, double beta, int J,
                       std::uint64_t seed, int d);

/// Pointwise product; class (m_a + m_b, min rho, max delta).
Symbol symbol_product(const Symbol& a, const Symbol& b);

/// One entry of the empirical seminorm table: central-difference estimate of
/// sup |d_xi^alpha d_x^beta a| (1+|xi|)^{-m + rho|alpha| - delta|beta|},
/// at the base step and at half step.
struct SeminormEntry {
  IVec2 alpha{0, 0};
  IVec2 beta{0, 0};
  double value = 0.0;
  double value_refined = 0.0;
};

struct SeminormTable {
  std::vector<SeminormEntry> entries;
  double max_value() const;
  const SeminormEntry& at(const IVec2& alpha, const IVec2& beta) const;
};

/// Empirical class certificate. Normalization defaults to the symbol's
/// declared class; pass `as_class` to test membership in a different class.
/// `refine` re-estimates at half step; disable for lattice-table symbols,
/// which cannot be evaluated off-lattice.
SeminormTable seminorm_estimate(const Symbol& a, const GridSpec& spec,
                                int alpha_max, int beta_max,
                                std::optional<SymbolClass> as_class = {},
                                bool refine = true);

/// Spatial truncation a^tau(x, xi) = a(x, xi) gamma(x / 2^tau) with gamma a
/// fixed torus-adapted cutoff: 1 for |z| <= 1/4, 0 for |z| >= 0.49, applied
/// to the centered representative of x.
Symbol truncate(const Symbol& a, double tau);
double truncation_cutoff(const Vec2& x_centered, double tau);

/// Paradifferential split of a symbol against a Littlewood-Paley partition:
/// a_{j,k}(x, xi) = [phi_j * a(., xi)](x) omega_k(xi), grouped into
///   a1: j - k >= 3   (high x-frequency, low xi)
///   a2: |j - k| <= 2 (diagonal)
///   a3: k - j >= 3   (low x-frequency, high xi)
/// plus the diagonal family a_k = [Phi_k * a(., xi)] omega_k (Phi_k the
/// five-band sum) and the low family b_k = [(sum_{j<=k-3} phi_j) * a] omega_k.
/// Stores the x-spectrum of a per xi column; every component is assembled on
/// demand as dense values[x][xi].
class ParadiffSplit {
public:
  const GridSpec& spec() const { return spec_; }
  int bands() const { return part_.bands(); }
  const LPPartition& partition() const { return part_; }

  /// Dense a^{(which)}, which in {1,2,3}; values[x_idx * total + xi_idx].
  std::vector<cplx> partial_symbol(int which) const;
  /// Dense a_{j,k}.
  std::vector<cplx> component(int j, int k) const;
  /// Dense diagonal family member a_k.
  std::vector<cplx> diagonal_symbol(int k) const;
  /// Dense low family member b_k.
  std::vector<cplx> low_symbol(int k) const;
  /// b_k wrapped as a Symbol (lattice-exact lookup) for seminorm estimation.
  Symbol low_symbol_as_symbol(int k) const;

  const SymbolClass& source_class() const { return cls_; }

  friend ParadiffSplit paradiff_split(const Symbol& a, const LPPartition& P);

private:
  ParadiffSplit(const GridSpec& spec, LPPartition part, SymbolClass cls)
      : spec_(spec), part_(std::move(part)), cls_(cls) {}
  // Assemble sum over (j,k) pairs selected by `pick`, weighting the
  // x-spectrum row eta by omega_j(eta) and the column xi by omega_k(xi).
  std::vector<cplx> assemble(
      const std::function<bool(int j, int k)>& pick) const;

  GridSpec spec_;
  LPPartition part_;
  SymbolClass cls_;
  std::vector<cplx> xspec_;  // [eta_idx * total + xi_idx]
};

ParadiffSplit paradiff_split(const Symbol& a, const LPPartition& P);

/// Adjoint amplitude A(x, y, xi) = conj(a(y, xi)); class (m, rho, 0, delta).
CompoundSymbol compound_adjoint(const Symbol& a);

/// Result of the compound -> ordinary reduction. The reduced symbol is a
/// lattice table wrapped as a Symbol; `diffs` traces the max-abs change
/// between consecutive epsilon stages and `err_estimate` the size of the last
/// extrapolation correction.
struct ReduceResult {
  Symbol symbol;
  std::vector<double> eps;
  std::vector<double> diffs;
  double err_estimate = 0.0;
};

/// Discrete oscillatory-integral reduction of T_[A] to T_a:
///   a_eps(x, nu) = (1/N^d) sum_{y'} sum_{xi} A(x, x-y', xi)
///                  W(eps y', eps (nu-xi)) e^{-2 pi i <y', nu-xi>}
/// with Gaussian W(u, v) = exp(-pi (|u|^2 + |v|^2)), y' the centered periodic
/// displacement, followed by Richardson extrapolation in eps^2 across the
/// schedule. Throws DiagnosticError when successive differences fail to
/// decrease.
ReduceResult reduce_compound(const CompoundSymbol& A, const GridSpec& spec,
                             std::vector<double> eps_schedule = {
                                 0.25, 0.125, 0.0625, 0.03125, 0.015625});

/// Wrap dense lattice values[x_idx * total + xi_idx] as a Symbol. Evaluation
/// requires exact lattice arguments.
Symbol table_symbol(std::string name, SymbolClass cls, const GridSpec& spec,
                    std::shared_ptr<const std::vector<cplx>> values);

/// Cache a symbol as an N^d x N^d lattice table when the memory budget
/// allows (default 1 GiB); otherwise returns the symbol unchanged.
/// x-independent symbols are returned unchanged (the multiplier path never
/// needs the table).
Symbol materialize_symbol(const Symbol& a, const GridSpec& spec,
                          std::size_t budget_bytes = std::size_t(1) << 30);

}  // namespace lpfield

#endif

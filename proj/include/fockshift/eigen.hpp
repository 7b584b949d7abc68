#pragma once

// Joint eigenvectors nu_lambda of the adjoint shifts, the convergence series
// sum_w |w(lambda)|^2 W(e,w)^{-2} that decides whether they exist, and grid
// sampling of the resulting eigenvalue region in moduli space.

#include <string>
#include <vector>

#include "fockshift/fock.hpp"

namespace fockshift {

struct EigenCandidate {
  std::vector<cplx> lambda;
  int depth = 0;
  /// Coefficient of xi_w, in basis order: conj(w(lambda)) W(e,w)^{-1}.
  std::vector<cplx> coeffs;
};

/// Throws DomainError when lambda has the wrong length.
EigenCandidate eigenvector_coeffs(const WeightSystem& ws, std::span<const cplx> lambda, int depth);

struct EigenResidual {
  /// max over levels <= depth - 1 of |((T_i^* - conj(lambda_i)) nu)_w|, per i.
  std::vector<double> per_letter;
  double max_residual = 0.0;
  int letter = 1;
  Word witness;
};

EigenResidual eigen_residual(const WeightSystem& ws, const EigenCandidate& candidate);
EigenResidual eigen_residual(const WeightSystem& ws, std::span<const cplx> lambda, int depth);

/// Nullity of the stacked rows of (T_i^* - conj(lambda_i)) at levels <= depth - 1
/// (dense SVD; throws DomainError above the dense limit).
std::size_t eigenspace_dimension(const WeightSystem& ws, std::span<const cplx> lambda, int depth, double rel_tol = 1e-10);

struct LevelSums {
  /// sigma_k = sum_{|w| = k} r(w)^2 W(e,w)^{-2}, k = 0..depth.
  std::vector<double> sigma;
  /// log sigma_k (-inf when sigma_k = 0); finite even when sigma_k overflows.
  std::vector<double> log_sigma;
  double partial_sum = 0.0;
};

/// Level-by-level dynamic programme over the word blocks. Throws DomainError
/// for negative moduli or when n^depth exceeds 2^20.
LevelSums level_sums(const WeightSystem& ws, std::span<const double> r, int depth);

enum class Membership { Inside, Outside, Inconclusive };
std::string to_string(Membership m);

struct MembershipVerdict {
  Membership verdict = Membership::Inconclusive;
  /// sigma_{k+1} / sigma_k at the last computed level.
  double tail_ratio = 0.0;
  /// Number of trailing ratios inspected: max(1, ceil(depth / 4)).
  int window = 1;
  double epsilon = 0.02;
};

/// Inside when every ratio in the window is <= 1 - eps, Outside when every
/// ratio is >= 1 + eps or the partial sum exceeds 1e250, else Inconclusive.
/// Needs at least 4 levels.
MembershipVerdict membership_verdict(const LevelSums& sums, double epsilon = 0.02);

struct EllipseResult {
  bool inside = false;
  /// sum_i r_i^2 / c_i^2
  double value = 0.0;
  /// c_i = min over |w| <= depth_for_inf of lambda_{i,w}
  std::vector<double> c;
};

/// Throws PreconditionError when some c_i vanishes.
EllipseResult ellipse_predicate(const WeightSystem& ws, std::span<const double> r, int depth_for_inf);

struct HereditaryResult {
  bool holds = true;
  /// First level where sigma_k(r') > sigma_k(r), or -1.
  int violation_level = -1;
};

/// Term-by-term domination sigma_k(r') <= sigma_k(r). Throws DomainError unless r'_i <= r_i.
HereditaryResult hereditary_check(const WeightSystem& ws, std::span<const double> r, std::span<const double> r_prime,
                                  int depth);

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.1;

  /// lo + i step for i = 0 .. floor((hi - lo) / step + 1e-9).
  std::vector<double> values() const;
  /// Parses "lo:hi:step".
  static GridSpec parse(const std::string& text);
};

struct RegionRow {
  std::vector<double> r;
  int levels = 0;
  double partial_sum = 0.0;
  double tail_ratio = 0.0;
  Membership verdict = Membership::Inconclusive;
};

/// One row per point of the product grid, rows in lexicographic order of the
/// grid coordinates (r_1 slowest).
std::vector<RegionRow> region_sample(const WeightSystem& ws, const GridSpec& grid, int depth, double epsilon = 0.02);

/// Header r1,...,rn,levels,partial_sum,tail_ratio,verdict; values with 17 significant digits.
std::string region_csv(int n, const std::vector<RegionRow>& rows);

}  // namespace fockshift

#pragma once

// Compressions P_d X P_d of operators on Fock space to the words of length
// <= d. Raising operators have zero columns at the top level, so identities
// between compressed operators are exact only on the levels stated by each
// check.

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fockshift/condition.hpp"
#include "fockshift/weights.hpp"
#include "fockshift/words.hpp"

namespace fockshift {

class TruncatedFock {
 public:
  TruncatedFock(int n, int depth);

  const BasisEnumeration& basis() const { return *basis_; }
  int alphabet() const { return basis_->alphabet(); }
  int depth() const { return basis_->depth(); }
  std::size_t dimension() const { return basis_->dimension(); }
  std::size_t index(const Word& w) const { return basis_->index(w); }
  Word word(std::size_t idx) const { return basis_->word(idx); }
  int level_of(std::size_t idx) const { return (*levels_)[idx]; }
  /// First index of level k.
  std::size_t level_begin(int k) const { return basis_->level_offset(k); }
  /// One past the last index of levels <= k.
  std::size_t levels_end(int k) const { return basis_->levels_end(k); }
  std::vector<cplx> basis_vector(const Word& w) const;

  bool operator==(const TruncatedFock& other) const {
    return alphabet() == other.alphabet() && depth() == other.depth();
  }

 private:
  std::shared_ptr<const BasisEnumeration> basis_;
  std::shared_ptr<const std::vector<int>> levels_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Sparse operator on a truncated Fock space, stored by columns.
class GradedOperator {
 public:
  explicit GradedOperator(TruncatedFock space);
  static GradedOperator identity(const TruncatedFock& space);
  /// Duplicate entries are summed; exact zeros are dropped.
  static GradedOperator from_triplets(const TruncatedFock& space, std::vector<Triplet> entries);
  static GradedOperator from_dense(const TruncatedFock& space, const Eigen::MatrixXcd& m);

  const TruncatedFock& space() const { return space_; }
  std::size_t dimension() const { return space_.dimension(); }
  std::size_t nonzeros() const { return rows_.size(); }
  cplx entry(std::size_t row, std::size_t col) const;
  /// Nonzero entries of one column as (row, value) pairs, rows ascending.
  std::vector<std::pair<std::size_t, cplx>> column(std::size_t col) const;
  std::vector<Triplet> triplets() const;

  std::vector<cplx> apply(std::span<const cplx> x) const;
  GradedOperator adjoint() const;
  GradedOperator operator*(const GradedOperator& rhs) const;
  GradedOperator operator+(const GradedOperator& rhs) const;
  GradedOperator operator-(const GradedOperator& rhs) const;
  GradedOperator scaled(cplx s) const;

  /// Phi_j(X) = sum_k Q_k X Q_{k+j}: entries with level(col) - level(row) = j.
  GradedOperator band(int j) const;
  /// Sorted j with a nonzero band.
  std::vector<int> bands() const;

  /// Dense copy; throws DomainError above the dense limit.
  Eigen::MatrixXcd to_dense() const;
  /// Largest |X_rc - Y_rc|.
  double max_entry_diff(const GradedOperator& other) const;

 private:
  void require_same_space(const GradedOperator& other) const;

  TruncatedFock space_;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::size_t> rows_;
  std::vector<cplx> values_;
};

/// Dense algorithms run only at or below this dimension.
inline constexpr std::size_t kDenseLimit = 4096;

enum class ShiftKind { LeftWeighted, RightWeighted, LeftUnweighted, RightUnweighted };

/// Compressed T_i, S_i (commutant weights), L_i or R_i. RightWeighted throws
/// PreconditionError, with the divergence certificate, when the commutant
/// weights are unbounded.
GradedOperator build_shift(const TruncatedFock& space, const WeightSystem& ws, ShiftKind kind, int i);
/// Compressed S_i xi_w = mu_{i,w} xi_{wi} for explicit right weights.
GradedOperator build_shift(const TruncatedFock& space, const MuSystem& mu, int i);
/// Compressed T_u: T_u xi_v = W(v,u) xi_{uv}.
GradedOperator build_word_shift(const TruncatedFock& space, const WeightSystem& ws, const Word& u);

/// Automaton state of every basis word (index order).
std::vector<std::size_t> word_states(const TruncatedFock& space, const WeightSystem& ws);
/// W(e, w) for every basis word.
std::vector<double> vacuum_weights(const TruncatedFock& space, const WeightSystem& ws);

/// Matrix-free T_i and T_i^* on the level blocks. T_i maps the level-k block
/// onto a contiguous slice of level k+1, so both directions are elementwise
/// products with the per-word weights.
class LeftShiftAction {
 public:
  LeftShiftAction(const TruncatedFock& space, const WeightSystem& ws);

  const TruncatedFock& space() const { return space_; }
  /// y = T_i x
  void apply(int i, std::span<const cplx> x, std::span<cplx> y) const;
  /// y = T_i^* x
  void apply_adjoint(int i, std::span<const cplx> x, std::span<cplx> y) const;
  /// lambda_{i,w} for all w below the top level.
  std::span<const double> weights(int i) const;

 private:
  TruncatedFock space_;
  std::vector<std::vector<double>> weights_;
};

struct PowerIterationResult {
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ||T_i|| from power iteration on T_i^* T_i (Rayleigh quotient, all-ones start).
PowerIterationResult shift_norm(const LeftShiftAction& action, int i, double tol = 1e-10, int max_iter = 10000);

struct NormCheckEntry {
  int letter = 1;
  double power_norm = 0.0;
  double max_weight = 0.0;
  double gap = 0.0;  // |power_norm - max_weight| / max_weight
  int iterations = 0;
  bool converged = false;
};

/// Spectral norm of each compressed T_i against max_{|w| < depth} lambda_{i,w}.
std::vector<NormCheckEntry> norm_check(const WeightSystem& ws, int depth);

struct CommutationReport {
  double max_defect = 0.0;
  int i = 1;
  int j = 1;
  Word witness;
  std::size_t columns = 0;
};

/// max over i, j, |w| <= depth - 2 of ||(T_i S_j - S_j T_i) xi_w|| with the
/// commutant weights; PreconditionError when they are unbounded.
CommutationReport commutation_defect(const WeightSystem& ws, int depth);
/// Same with explicit right weights.
CommutationReport commutation_defect(const WeightSystem& ws, const MuSystem& mu, int depth);

struct VacuumKernelReport {
  /// Zero columns of the stacked T_i^*; the kernel dimension when the
  /// nonzero columns have disjoint supports.
  std::size_t kernel_dim_structural = 0;
  bool supports_disjoint = false;
  std::optional<std::size_t> kernel_dim_svd;
  bool vacuum_in_kernel = false;
  /// max entry of (I - sum L_i L_i^*) - P_e on levels <= depth - 1.
  double projection_defect = 0.0;
};

/// Joint kernel of the compressed T_i^* and the vacuum projection identity.
VacuumKernelReport vacuum_kernel_check(const WeightSystem& ws, int depth);

double vector_norm(std::span<const cplx> x);

}  // namespace fockshift

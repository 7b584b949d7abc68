#pragma once

// Joint right and left spectrum experiments for the unweighted left creation
// tuple L = (L_1, ..., L_n): geometric resolvent series, right inverses
// outside the closed ball, growth certificates against left inverses, and the
// rank-one family of left inverses at the origin.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fockshift/algebra.hpp"
#include "fockshift/eigen.hpp"

namespace fockshift {

/// sum_{|w| <= max_len} w(beta) L_w, with w(beta) = beta_{i_1} ... beta_{i_k}.
GradedOperator geometric_series(const TruncatedFock& space, std::span<const cplx> beta, int max_len);

struct IdentityDefect {
  /// max |(P - I)_{rc}| over rows at levels <= depth - 1.
  double low = 0.0;
  /// max over columns of the norm of the top-level rows of P - I.
  double top = 0.0;
};

IdentityDefect identity_defect(const GradedOperator& p);

struct ResolventReport {
  std::vector<cplx> lambda;
  int depth = 0;
  IdentityDefect defect;
  /// ||lambda||^depth, the norm of the tail left at the top level.
  double predicted_top = 0.0;
};

/// B = sum_{|w| <= depth-1} conj(w(lambda)) L_w against (I - sum conj(lambda_i) L_i).
/// Throws PreconditionError when ||lambda|| >= 1.
ResolventReport resolvent_check(std::span<const cplx> lambda, int depth);

enum class SpectrumVerdict { InSpectrum, NotInSpectrum, Inconclusive };
std::string to_string(SpectrumVerdict v);

struct RightMembershipReport {
  std::vector<cplx> lambda;
  int depth = 0;
  double norm = 0.0;
  SpectrumVerdict verdict = SpectrumVerdict::Inconclusive;
  /// InSpectrum: the joint eigenvector of the L_i^* and its residual.
  std::optional<EigenCandidate> eigenvector;
  std::optional<double> eigen_residual;
  /// NotInSpectrum: B_i with sum (lambda_i I - L_i) B_i = I below the top level.
  std::vector<GradedOperator> inverse_factors;
  std::optional<IdentityDefect> inverse_defect;
};

/// Verdict by ||lambda|| against 1 with boundary tolerance tol.
RightMembershipReport right_membership(std::span<const cplx> lambda, int depth, double tol = 1e-9);

struct GrowthRow {
  int k = 0;
  /// xi_w on which the hypothetical left inverse is evaluated.
  Word word;
  /// Lower bound for ||A_j xi_w||.
  double bound = 0.0;
};

struct LeftGrowthTable {
  std::vector<cplx> lambda;
  /// Index j of the left inverse component that is forced to be unbounded.
  int component = 1;
  /// unimodular | geometric | geometric_fallback
  std::string rule;
  /// Assumed value of ||A_j xi_e|| used by the rule.
  double assumed = 0.0;
  std::vector<GrowthRow> rows;
};

/// n = 2 only. Rules, by the first letter i with |lambda_i| >= 1:
///   |lambda_i| = 1: A_i xi_{i^k} = lambda_i^k A_i xi_e + sum_{j<k} lambda_i^{k-1-j} xi_{i^j},
///     bound sqrt(k) - M with M >= ||A_i xi_e||;
///   |lambda_i| > 1: A_j xi_{i^k} = lambda_i^k A_j xi_e (j the other letter),
///     bound |lambda_i|^k M with M = ||A_j xi_e||; when M = 0 the bound
///     |lambda_i|^k along i^k j from A_j xi_j = xi_e.
/// The bounds come from running the recursions on explicit coefficient vectors.
/// Throws PreconditionError when every |lambda_i| < 1.
LeftGrowthTable left_growth_certificate(std::span<const cplx> lambda, int k_max, double m);

struct ZeroLeftInverseReport {
  int depth = 0;
  /// max over i, j of the largest entry of A_i L_j - delta_ij I on columns at levels <= depth - 1.
  double relation_defect = 0.0;
  /// max over i of the largest entry of X_i - (L_i^* + (X_i xi_e) xi_e^*) for a
  /// least-squares solution X_i of X_i L_j = delta_ij I with a random vacuum column.
  double reconstruction_residual = 0.0;
  /// Least-squares residual of the solve itself.
  double solve_residual = 0.0;
};

/// A_i = L_i^* + eta_i xi_e^* for n = 2. Throws DomainError when eta_i has
/// words longer than depth.
ZeroLeftInverseReport zero_left_inverses(const CoeffMap& eta1, const CoeffMap& eta2, int depth,
                                         std::uint64_t seed = 0x5eed);

}  // namespace fockshift

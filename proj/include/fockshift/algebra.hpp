#pragma once

// Elements of the weighted left algebra given by their Fourier coefficients
// a_w = <A xi_e, xi_w>, the action A xi_v = W_mu(e,v)^{-1} sum_w a_w W_mu(w,v) xi_{wv},
// level bands, Cesaro sums and the Fejer polynomials p_k(A).

#include <map>
#include <optional>
#include <vector>

#include "fockshift/fock.hpp"

namespace fockshift {

using CoeffMap = std::map<Word, cplx>;

struct FourierElement {
  int n = 1;
  /// a_w; graded-lex ordered. Zero entries are ignored.
  CoeffMap coeffs;

  cplx at(const Word& w) const;
  /// Longest word with a nonzero coefficient (0 when A = 0).
  std::size_t max_length() const;
  /// Shortest word with a nonzero coefficient, ties broken by graded-lex order.
  std::optional<Word> minimal_word() const;
  /// Throws DomainError for letters outside [1, n].
  void validate() const;
};

/// A xi_v. Throws DomainError when |v| + max_length(A) > depth.
CoeffMap apply_fourier(const MuSystem& mu, const FourierElement& a, const Word& v, int depth);
/// A applied to a finite vector, dropping words longer than depth.
CoeffMap apply_fourier_truncated(const MuSystem& mu, const FourierElement& a, const CoeffMap& x, int depth);

/// Compression of A to the space, column by column from the action above.
GradedOperator fourier_operator(const TruncatedFock& space, const MuSystem& mu, const FourierElement& a);
/// sum_w a_w W(e,w)^{-1} T_w with compressed T_w.
GradedOperator polynomial_operator(const TruncatedFock& space, const WeightSystem& ws, const FourierElement& a);

/// Phi_j(X). Throws DomainError when |j| exceeds the number of levels.
GradedOperator phi_band(const GradedOperator& x, int j);
/// sum_{|j| < k} (1 - |j|/k) Phi_j(X).
GradedOperator cesaro_sum(const GradedOperator& x, int k);
/// p_k(A) = sum_{|w| < k} (1 - |w|/k) a_w W(e,w)^{-1} T_w.
GradedOperator pk_polynomial(const TruncatedFock& space, const WeightSystem& ws, const FourierElement& a, int k);

/// max over i and columns |w| <= depth - 2 of ||(X S_i - S_i X) xi_w||.
CommutationReport right_commutation_defect(const GradedOperator& x, const MuSystem& mu);

struct ExtractResult {
  FourierElement element;
  /// max_v ||X xi_v - A xi_v|| over |v| <= depth - max_length(A).
  double residual = 0.0;
  Word residual_witness;
  CommutationReport precheck;
};

/// Reads a_w = <X xi_e, xi_w> and measures how far X is from the element
/// with those coefficients. Throws PreconditionError with the witness when X
/// fails the commutation pre-check (tolerance 1e-9).
ExtractResult commutant_extract(const GradedOperator& x, const MuSystem& mu, double precheck_tol = 1e-9);

struct PairingResult {
  cplx via_action;
  cplx closed_form;
};

/// <A xi, xi_{v1 v2}> by the action and by a_{v1} b_{v2} W_mu(e,v2)^{-1} W_mu(v1,v2).
/// Throws DomainError unless v1, v2 are minimal support words of A and xi.
PairingResult injectivity_pairing(const MuSystem& mu, const FourierElement& a, const CoeffMap& xi, const Word& v1,
                                  const Word& v2);

struct SpectralRadiusRow {
  int k = 1;
  /// <A^k xi_e, xi_{v^k}>
  cplx coefficient;
  /// |coefficient|^{1/k}, a lower bound for ||A^k||^{1/k}.
  double bound = 0.0;
  /// a_v^k W_mu(e,v)^{-(k-1)} W_mu(v, v^{k-1})
  cplx leading_term;
  /// Every nonzero word of A^k xi_e has length >= k |v|.
  bool lengths_ok = true;
};

/// A^k xi_e by repeated application of the action, k = 1..k_max.
/// Throws DomainError unless v is the minimal support word and k_max |v| <= depth.
std::vector<SpectralRadiusRow> spectral_radius_lower(const MuSystem& mu, const FourierElement& a, const Word& v,
                                                     int k_max, int depth);

}  // namespace fockshift

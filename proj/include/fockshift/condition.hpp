#pragma once

// The commutant boundedness condition sup_{i,w} W(i,w) W(e,w)^{-1} < inf.
//
// For a weight system with a finite prepend automaton, the pair of states
// (state(w), state(iw)) evolves on a finite product automaton as letters are
// prepended, and each step multiplies the ratio by
// weight[s_i][a] / weight[s_e][a]. The supremum over all words is then a
// max-product path problem: it is infinite exactly when some reachable cycle
// has product > 1.

#include <optional>
#include <string>

#include "fockshift/weights.hpp"

namespace fockshift {

enum class Verdict { Bounded, BoundedSoFar, Diverging };

std::string to_string(Verdict v);

/// Along the words cycle^k stem, W(i,.)/W(e,.) = stem_ratio * cycle_ratio^k.
struct GrowthCertificate {
  int letter = 1;
  Word stem;
  Word cycle;
  double stem_ratio = 1.0;
  double cycle_ratio = 1.0;

  Word word(std::size_t k) const { return concat(cycle.power(k), stem); }
};

struct Condition6Result {
  int alphabet = 1;
  /// Depth actually scanned (clamped to the table depth for tabulated systems).
  int depth = 0;
  /// max over |w| <= depth and all i of W(i,w)/W(e,w), with a maximizer.
  double value = 1.0;
  int argmax_letter = 1;
  Word argmax_word;
  Verdict verdict = Verdict::BoundedSoFar;
  /// Supremum over all words (Bounded only).
  std::optional<double> supremum;
  std::optional<GrowthCertificate> certificate;
  std::size_t automaton_states = 0;
  std::string method;
};

/// Throws DomainError when depth < 1.
Condition6Result condition6_sup(const WeightSystem& ws, int depth);

/// One-line human-readable summary.
std::string describe(const Condition6Result& result);

}  // namespace fockshift

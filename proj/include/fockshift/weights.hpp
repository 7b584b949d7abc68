#pragma once

// Weight systems lambda_{i,w} > 0 for weighted left creation operators
// T_i xi_w = lambda_{i,w} xi_{iw}, the weight functions W and W_mu, and the
// weight-level identities relating them.
//
// Every family is compiled into a WeightAutomaton: lambda_{i,w} depends only
// on the state reached by reading w in prepend order (rightmost letter
// first). The automaton is finite for all closed families, which is what
// makes the commutant boundedness condition decidable (see condition.hpp).

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fockshift/words.hpp"

namespace fockshift {

/// (letter i, word w) -> value
using WeightTable = std::map<std::pair<int, Word>, double>;

struct ConstantFamily {
  double value;
};

struct ScaledFamily {
  std::vector<double> scales;
};

/// lambda_{i,w} from `table` for |w| <= cutoff (missing entries fall back to
/// the tail scale), lambda_{i,w} = tail[i-1] for |w| > cutoff.
struct FinitePerturbationFamily {
  int cutoff;
  WeightTable table;
  std::vector<double> tail;
};

/// lambda_{i,w} = remainders(i, u) where w = u v, |u| < period, |v| = 0 mod period.
struct PeriodicFamily {
  int period;
  WeightTable remainders;
};

/// n = 2; lambda_{1,1^k} = 1/m, lambda_{1,1^k 2} = m^{-1/2}, all others c.
struct TwoLetterMFamily {
  double m;
  double c;
};

/// Explicit weights for all words up to `depth`; undefined beyond.
/// values[index(w) * n + (i - 1)] = lambda_{i,w}.
struct TabulatedFamily {
  int depth;
  std::vector<double> values;
};

using WeightFamily = std::variant<ConstantFamily, ScaledFamily, FinitePerturbationFamily, PeriodicFamily,
                                  TwoLetterMFamily, TabulatedFamily>;

/// Deterministic automaton over the alphabet {1..n}. Reading a base word w in
/// prepend order from `start` lands in a state s with
/// lambda_{a,w} = weight[s * n + a - 1].
struct WeightAutomaton {
  int n = 0;
  std::size_t states = 0;
  std::size_t start = 0;
  std::vector<std::size_t> next;
  std::vector<double> weight;  // NaN where undefined (beyond a table)
  std::vector<std::string> labels;

  std::size_t step(std::size_t s, int a) const { return next[s * static_cast<std::size_t>(n) + (a - 1)]; }
  double at(std::size_t s, int a) const { return weight[s * static_cast<std::size_t>(n) + (a - 1)]; }
  /// State of the word w u when `s` is the state of u.
  std::size_t run(std::size_t s, const Word& w) const;
  std::size_t state_of(const Word& w) const { return run(start, w); }
};

class WeightSystem {
 public:
  static WeightSystem constant(int n, double value);
  static WeightSystem unweighted(int n) { return constant(n, 1.0); }
  static WeightSystem scaled(std::vector<double> scales);
  static WeightSystem finite_perturbation(int n, int cutoff, WeightTable table, std::vector<double> tail);
  static WeightSystem periodic(int n, int period, WeightTable remainders);
  static WeightSystem two_letter_m(double m, double c);
  static WeightSystem tabulated(int n, int depth, std::vector<double> values);

  int alphabet() const { return n_; }
  const WeightFamily& family() const { return *family_; }
  std::string family_name() const;
  const WeightAutomaton& automaton() const { return *automaton_; }
  bool is_tabulated() const { return std::holds_alternative<TabulatedFamily>(*family_); }
  /// True when every weight equals 1.
  bool is_unweighted() const;

  /// lambda_{i,w}. Throws DomainError for a bad letter or a word beyond a table.
  double lambda(int i, const Word& w) const;

 private:
  WeightSystem(int n, WeightFamily family);

  int n_;
  std::shared_ptr<const WeightFamily> family_;
  std::shared_ptr<const WeightAutomaton> automaton_;
};

/// lambda_{i,w}, the weight on the edge from xi_w to xi_{iw}.
double lambda_of(const WeightSystem& ws, int i, const Word& w);

/// W(u, w): product of weights on the path from xi_u to xi_{wu}; W(u, e) = 1.
/// Products over more than 32 factors are accumulated in log space.
double left_weight(const WeightSystem& ws, const Word& u, const Word& w);

/// Right creation weights mu_{i,w} (S_i xi_w = mu_{i,w} xi_{wi}).
class MuSystem {
 public:
  /// mu_{i,w} = W(i,w) / W(e,w), the commutant weights with mu_{i,e} = 1.
  static MuSystem commutant(const WeightSystem& ws);
  /// mu_{i,w} = c_i W(i,w) / W(e,w) for arbitrary constants c_i > 0.
  static MuSystem commutant(const WeightSystem& ws, std::vector<double> constants);
  /// Explicit right weights: mu_{i,w} from `table` for |w| <= cutoff, 1 for
  /// longer words and for missing entries.
  static MuSystem right_table(int n, int cutoff, WeightTable table);

  /// Copy with one value replaced.
  MuSystem with_value(int i, const Word& w, double value) const;

  int alphabet() const { return n_; }
  double mu(int i, const Word& w) const;
  /// The weight system this mu was derived from, if any.
  const WeightSystem* source() const { return source_ ? &*source_ : nullptr; }
  /// Explicit table cutoff (right_table only).
  std::optional<int> cutoff() const { return cutoff_; }

 private:
  MuSystem() = default;

  int n_ = 0;
  std::optional<WeightSystem> source_;
  std::vector<double> constants_;
  std::optional<int> cutoff_;
  std::shared_ptr<const WeightTable> table_;
  std::map<std::pair<int, Word>, double> overrides_;
};

/// W(i,w) W(e,w)^{-1}; equals 1 at w = e.
double commutant_mu(const WeightSystem& ws, int i, const Word& w);

/// W_mu(v, w) = mu_{i_1,v} mu_{i_2,v i_1} ... for w = i_1 ... i_k; W_mu(v, e) = 1.
double right_weight(const MuSystem& mu, const Word& v, const Word& w);

/// Largest relative defect of an identity over a finite scan, with the triple
/// that attains it.
struct DefectReport {
  double max_defect = 0.0;
  std::string identity;
  std::string witness;
  std::size_t samples = 0;
};

struct CocycleReport {
  DefectReport left;   // W(u, vw) = W(wu, v) W(u, w)
  DefectReport right;  // W_mu(u, vw) = W_mu(u, v) W_mu(uv, w)
  double max_defect() const { return std::max(left.max_defect, right.max_defect); }
};

/// Both cocycle identities over all u, v, w with |u| + |v| + |w| <= depth.
CocycleReport check_cocycles(const WeightSystem& ws, const MuSystem& mu, int depth);
/// Left cocycle only (used when no bounded mu exists).
DefectReport check_left_cocycle(const WeightSystem& ws, int depth);

/// mu_{i,v} W(vi, w) = mu_{i,wv} W(v, w) over |v| + |w| + 1 <= depth, all i.
DefectReport check_intertwining(const WeightSystem& ws, int depth);

double relative_defect(double lhs, double rhs);

/// Tabulated weights lambda_{i,w} = W~(i,w) W~(e,w)^{-1} for |w| <= depth,
/// where W~ is the right weight function of `mu`. Requires mu_{i,e} = 1.
WeightSystem lambda_from_mu(const MuSystem& mu, int depth);

/// sup over |w| <= depth, all i, of W~(i,w) W~(e,w)^{-1}.
double tilde_sup(const MuSystem& mu, int depth);

/// Finite-range estimate of
///   inf_v W_mu(e,v)^{-1} liminf_k W_mu(v, v^{k-1})^{1/k}
/// taking v over 1 <= |v| <= max_v_len and the liminf as a minimum over
/// k in [max_k / 2, max_k].
struct SemisimpleEstimate {
  double value = 0.0;
  Word argmin;
  int max_v_len = 0;
  int k_low = 0;
  int k_high = 0;
};
SemisimpleEstimate semisimple_estimate(const MuSystem& mu, int max_v_len, int max_k);
/// As above for the commutant weights of `ws`; throws PreconditionError when
/// the commutant weights are unbounded.
SemisimpleEstimate semisimple_estimate(const WeightSystem& ws, int max_v_len, int max_k);

}  // namespace fockshift

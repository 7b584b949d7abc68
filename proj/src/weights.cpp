#include "fockshift/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fockshift/condition.hpp"

namespace fockshift {

namespace {

constexpr std::size_t kLogSpaceLength = 32;
constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

void require_positive(double value, const std::string& what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(what + " must be a finite positive number (weights are assumed strictly positive), got " +
                      std::to_string(value));
  }
}

void require_letter(int i, int n) {
  if (i < 1 || i > n) {
    throw DomainError("letter " + std::to_string(i) + " out of range [1, " + std::to_string(n) + "]");
  }
}

std::string key_str(int i, const Word& w, int n) { return std::to_string(i) + ":" + w.str(n); }

WeightAutomaton single_state(int n, const std::vector<double>& weights) {
  WeightAutomaton a;
  a.n = n;
  a.states = 1;
  a.next.assign(static_cast<std::size_t>(n), 0);
  a.weight = weights;
  a.labels = {"*"};
  return a;
}

// One state per enumerated word, plus `extra_states` trailing states.
WeightAutomaton word_state_automaton(int n, const BasisEnumeration& basis, std::size_t extra_states) {
  WeightAutomaton a;
  a.n = n;
  a.states = basis.dimension() + extra_states;
  a.start = 0;
  a.next.assign(a.states * static_cast<std::size_t>(n), 0);
  a.weight.assign(a.states * static_cast<std::size_t>(n), kUndefined);
  a.labels.reserve(a.states);
  for (std::size_t s = 0; s < basis.dimension(); ++s) a.labels.push_back(basis.word(s).str(n));
  return a;
}

WeightAutomaton build_automaton(int n, const WeightFamily& family) {
  const auto un = static_cast<std::size_t>(n);
  if (const auto* f = std::get_if<ConstantFamily>(&family)) {
    return single_state(n, std::vector<double>(un, f->value));
  }
  if (const auto* f = std::get_if<ScaledFamily>(&family)) return single_state(n, f->scales);
  if (const auto* f = std::get_if<FinitePerturbationFamily>(&family)) {
    const BasisEnumeration basis(n, f->cutoff);
    WeightAutomaton a = word_state_automaton(n, basis, 1);
    const std::size_t tail = basis.dimension();
    a.labels.push_back("tail");
    for (std::size_t s = 0; s < basis.dimension(); ++s) {
      const bool top = basis.level_of(s) == f->cutoff;
      const Word w = basis.word(s);
      for (int c = 1; c <= n; ++c) {
        a.next[s * un + (c - 1)] = top ? tail : basis.prepend_index(c, s);
        const auto it = f->table.find({c, w});
        a.weight[s * un + (c - 1)] = it != f->table.end() ? it->second : f->tail[static_cast<std::size_t>(c - 1)];
      }
    }
    for (int c = 1; c <= n; ++c) {
      a.next[tail * un + (c - 1)] = tail;
      a.weight[tail * un + (c - 1)] = f->tail[static_cast<std::size_t>(c - 1)];
    }
    return a;
  }
  if (const auto* f = std::get_if<PeriodicFamily>(&family)) {
    const BasisEnumeration basis(n, f->period - 1);
    WeightAutomaton a = word_state_automaton(n, basis, 0);
    for (std::size_t s = 0; s < basis.dimension(); ++s) {
      const bool top = basis.level_of(s) == f->period - 1;
      const Word u = basis.word(s);
      for (int c = 1; c <= n; ++c) {
        a.next[s * un + (c - 1)] = top ? 0 : basis.prepend_index(c, s);
        a.weight[s * un + (c - 1)] = f->remainders.at({c, u});
      }
    }
    return a;
  }
  if (const auto* f = std::get_if<TwoLetterMFamily>(&family)) {
    // E = e, ONES = 1^k (k >= 1), ONES2 = 1^k 2 (k >= 0), OTHER = everything else.
    enum : std::size_t { E, ONES, ONES2, OTHER };
    WeightAutomaton a;
    a.n = 2;
    a.states = 4;
    a.start = E;
    a.labels = {"e", "1^k", "1^k2", "other"};
    a.next = {ONES, ONES2, ONES, OTHER, ONES2, OTHER, OTHER, OTHER};
    const double inv_m = 1.0 / f->m;
    const double inv_sqrt_m = 1.0 / std::sqrt(f->m);
    a.weight = {inv_m, f->c, inv_m, f->c, inv_sqrt_m, f->c, f->c, f->c};
    return a;
  }
  const auto& f = std::get<TabulatedFamily>(family);
  const BasisEnumeration basis(n, f.depth);
  WeightAutomaton a = word_state_automaton(n, basis, 1);
  const std::size_t sink = basis.dimension();
  a.labels.push_back("beyond-table");
  for (std::size_t s = 0; s < basis.dimension(); ++s) {
    const bool top = basis.level_of(s) == f.depth;
    for (int c = 1; c <= n; ++c) {
      a.next[s * un + (c - 1)] = top ? sink : basis.prepend_index(c, s);
      a.weight[s * un + (c - 1)] = f.values[s * un + (c - 1)];
    }
  }
  for (int c = 1; c <= n; ++c) a.next[sink * un + (c - 1)] = sink;
  return a;
}

void validate_table(const WeightTable& table, int n, int max_len, const std::string& what) {
  for (const auto& [key, value] : table) {
    require_letter(key.first, n);
    require_alphabet(key.second, n);
    if (static_cast<int>(key.second.length()) > max_len) {
      throw DomainError(what + " entry " + key_str(key.first, key.second, n) + " is longer than " +
                        std::to_string(max_len));
    }
    require_positive(value, what + " entry " + key_str(key.first, key.second, n));
  }
}

double log_left_weight(const WeightAutomaton& a, std::size_t s, const Word& w) {
  double total = 0.0;
  for (std::size_t p = w.length(); p-- > 0;) {
    total += std::log(a.at(s, w[p]));
    s = a.step(s, w[p]);
  }
  return total;
}

// W(u, w) as a state walk starting from state(u).
double walk_weight(const WeightAutomaton& a, std::size_t s, const Word& w) {
  if (w.length() > kLogSpaceLength) return std::exp(log_left_weight(a, s, w));
  double total = 1.0;
  for (std::size_t p = w.length(); p-- > 0;) {
    total *= a.at(s, w[p]);
    s = a.step(s, w[p]);
  }
  return total;
}

void check_defined(const WeightSystem& ws, std::size_t s, const Word& w) {
  // Only tabulated systems have undefined states; every state on the walk must be inside the table.
  if (!ws.is_tabulated()) return;
  const auto& a = ws.automaton();
  for (std::size_t p = w.length(); p-- > 0;) {
    if (std::isnan(a.at(s, w[p]))) {
      throw DomainError("weight requested beyond the tabulated depth " +
                        std::to_string(std::get<TabulatedFamily>(ws.family()).depth));
    }
    s = a.step(s, w[p]);
  }
}

}  // namespace

std::size_t WeightAutomaton::run(std::size_t s, const Word& w) const {
  for (std::size_t p = w.length(); p-- > 0;) s = step(s, w[p]);
  return s;
}

WeightSystem::WeightSystem(int n, WeightFamily family)
    : n_(n),
      family_(std::make_shared<const WeightFamily>(std::move(family))),
      automaton_(std::make_shared<const WeightAutomaton>(build_automaton(n, *family_))) {}

WeightSystem WeightSystem::constant(int n, double value) {
  require_alphabet(Word{}, n);
  require_positive(value, "constant weight");
  return WeightSystem(n, ConstantFamily{value});
}

WeightSystem WeightSystem::scaled(std::vector<double> scales) {
  const int n = static_cast<int>(scales.size());
  require_alphabet(Word{}, n);
  for (std::size_t i = 0; i < scales.size(); ++i) require_positive(scales[i], "scale c_" + std::to_string(i + 1));
  return WeightSystem(n, ScaledFamily{std::move(scales)});
}

WeightSystem WeightSystem::finite_perturbation(int n, int cutoff, WeightTable table, std::vector<double> tail) {
  require_alphabet(Word{}, n);
  if (cutoff < 0) throw DomainError("finite_perturbation cutoff must be nonnegative");
  if (static_cast<int>(tail.size()) != n) {
    throw DomainError("finite_perturbation needs " + std::to_string(n) + " tail scales, got " +
                      std::to_string(tail.size()));
  }
  for (std::size_t i = 0; i < tail.size(); ++i) require_positive(tail[i], "tail scale c_" + std::to_string(i + 1));
  validate_table(table, n, cutoff, "finite_perturbation table");
  return WeightSystem(n, FinitePerturbationFamily{cutoff, std::move(table), std::move(tail)});
}

WeightSystem WeightSystem::periodic(int n, int period, WeightTable remainders) {
  require_alphabet(Word{}, n);
  if (period < 1) throw DomainError("periodic period must be at least 1");
  validate_table(remainders, n, period - 1, "periodic remainder");
  const BasisEnumeration basis(n, period - 1);
  for (std::size_t s = 0; s < basis.dimension(); ++s) {
    const Word u = basis.word(s);
    for (int i = 1; i <= n; ++i) {
      if (!remainders.contains({i, u})) throw DomainError("periodic remainder " + key_str(i, u, n) + " is missing");
    }
  }
  return WeightSystem(n, PeriodicFamily{period, std::move(remainders)});
}

WeightSystem WeightSystem::two_letter_m(double m, double c) {
  require_positive(m, "two_letter_m parameter m");
  require_positive(c, "two_letter_m parameter c");
  return WeightSystem(2, TwoLetterMFamily{m, c});
}

WeightSystem WeightSystem::tabulated(int n, int depth, std::vector<double> values) {
  const BasisEnumeration basis(n, depth);
  if (values.size() != basis.dimension() * static_cast<std::size_t>(n)) {
    throw DomainError("tabulated weights need " + std::to_string(basis.dimension() * static_cast<std::size_t>(n)) +
                      " values, got " + std::to_string(values.size()));
  }
  for (double v : values) require_positive(v, "tabulated weight");
  return WeightSystem(n, TabulatedFamily{depth, std::move(values)});
}

std::string WeightSystem::family_name() const {
  switch (family_->index()) {
    case 0: return "constant";
    case 1: return "scaled";
    case 2: return "finite_perturbation";
    case 3: return "periodic";
    case 4: return "two_letter_m";
    default: return "tabulated";
  }
}

bool WeightSystem::is_unweighted() const {
  return std::all_of(automaton_->weight.begin(), automaton_->weight.end(),
                     [](double v) { return std::isnan(v) || v == 1.0; });
}

double WeightSystem::lambda(int i, const Word& w) const {
  require_letter(i, n_);
  require_alphabet(w, n_);
  const double value = automaton_->at(automaton_->state_of(w), i);
  if (std::isnan(value)) {
    throw DomainError("weight " + key_str(i, w, n_) + " lies beyond the tabulated depth");
  }
  return value;
}

double lambda_of(const WeightSystem& ws, int i, const Word& w) { return ws.lambda(i, w); }

double left_weight(const WeightSystem& ws, const Word& u, const Word& w) {
  require_alphabet(u, ws.alphabet());
  require_alphabet(w, ws.alphabet());
  const auto& a = ws.automaton();
  const std::size_t s = a.state_of(u);
  check_defined(ws, s, w);
  return walk_weight(a, s, w);
}

double commutant_mu(const WeightSystem& ws, int i, const Word& w) {
  require_letter(i, ws.alphabet());
  require_alphabet(w, ws.alphabet());
  const auto& a = ws.automaton();
  const std::size_t si = a.step(a.start, i);
  check_defined(ws, si, w);
  if (w.length() > kLogSpaceLength) {
    return std::exp(log_left_weight(a, si, w) - log_left_weight(a, a.start, w));
  }
  return walk_weight(a, si, w) / walk_weight(a, a.start, w);
}

MuSystem MuSystem::commutant(const WeightSystem& ws) {
  return commutant(ws, std::vector<double>(static_cast<std::size_t>(ws.alphabet()), 1.0));
}

MuSystem MuSystem::commutant(const WeightSystem& ws, std::vector<double> constants) {
  if (static_cast<int>(constants.size()) != ws.alphabet()) {
    throw DomainError("commutant constants need one value per letter");
  }
  for (double c : constants) require_positive(c, "commutant constant");
  MuSystem mu;
  mu.n_ = ws.alphabet();
  mu.source_ = ws;
  mu.constants_ = std::move(constants);
  return mu;
}

MuSystem MuSystem::right_table(int n, int cutoff, WeightTable table) {
  require_alphabet(Word{}, n);
  if (cutoff < 0) throw DomainError("right weight table cutoff must be nonnegative");
  validate_table(table, n, cutoff, "right weight table");
  MuSystem mu;
  mu.n_ = n;
  mu.cutoff_ = cutoff;
  mu.table_ = std::make_shared<const WeightTable>(std::move(table));
  return mu;
}

MuSystem MuSystem::with_value(int i, const Word& w, double value) const {
  require_letter(i, n_);
  require_alphabet(w, n_);
  require_positive(value, "right weight " + key_str(i, w, n_));
  MuSystem out = *this;
  out.overrides_[{i, w}] = value;
  return out;
}

double MuSystem::mu(int i, const Word& w) const {
  require_letter(i, n_);
  require_alphabet(w, n_);
  if (!overrides_.empty()) {
    if (auto it = overrides_.find({i, w}); it != overrides_.end()) return it->second;
  }
  if (source_) return constants_[static_cast<std::size_t>(i - 1)] * commutant_mu(*source_, i, w);
  if (static_cast<int>(w.length()) > *cutoff_) return 1.0;
  const auto it = table_->find({i, w});
  return it != table_->end() ? it->second : 1.0;
}

double right_weight(const MuSystem& mu, const Word& v, const Word& w) {
  require_alphabet(v, mu.alphabet());
  require_alphabet(w, mu.alphabet());
  const bool log_space = w.length() > kLogSpaceLength;
  double total = log_space ? 0.0 : 1.0;
  Word base = v;
  for (std::size_t p = 0; p < w.length(); ++p) {
    const double factor = mu.mu(w[p], base);
    total = log_space ? total + std::log(factor) : total * factor;
    base = base.append(w[p]);
  }
  return log_space ? std::exp(total) : total;
}

double relative_defect(double lhs, double rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

namespace {

std::vector<Word> all_words(int n, int depth) {
  const BasisEnumeration basis(n, depth);
  std::vector<Word> words;
  words.reserve(basis.dimension());
  for (std::size_t s = 0; s < basis.dimension(); ++s) words.push_back(basis.word(s));
  return words;
}

void record(DefectReport& report, double defect, const std::string& witness) {
  ++report.samples;
  if (defect > report.max_defect || report.samples == 1) {
    report.max_defect = defect;
    report.witness = witness;
  }
}

template <typename Fn>
void for_each_triple(int n, int depth, Fn&& fn) {
  const auto words = all_words(n, std::max(depth, 0));
  for (const auto& u : words) {
    const auto lu = static_cast<int>(u.length());
    for (const auto& v : words) {
      const auto lv = static_cast<int>(v.length());
      if (lu + lv > depth) break;
      for (const auto& w : words) {
        if (lu + lv + static_cast<int>(w.length()) > depth) break;
        fn(u, v, w);
      }
    }
  }
}

}  // namespace

DefectReport check_left_cocycle(const WeightSystem& ws, int depth) {
  const int n = ws.alphabet();
  DefectReport report;
  report.identity = "W(u,vw) = W(wu,v) W(u,w)";
  for_each_triple(n, depth, [&](const Word& u, const Word& v, const Word& w) {
    const double lhs = left_weight(ws, u, concat(v, w));
    const double rhs = left_weight(ws, concat(w, u), v) * left_weight(ws, u, w);
    record(report, relative_defect(lhs, rhs), "u=" + u.str(n) + " v=" + v.str(n) + " w=" + w.str(n));
  });
  return report;
}

CocycleReport check_cocycles(const WeightSystem& ws, const MuSystem& mu, int depth) {
  if (depth < 0) throw DomainError("depth must be nonnegative");
  if (mu.alphabet() != ws.alphabet()) throw DomainError("weight and right weight alphabets differ");
  const int n = ws.alphabet();
  CocycleReport report;
  report.left = check_left_cocycle(ws, depth);
  report.right.identity = "W_mu(u,vw) = W_mu(u,v) W_mu(uv,w)";
  for_each_triple(n, depth, [&](const Word& u, const Word& v, const Word& w) {
    const double lhs = right_weight(mu, u, concat(v, w));
    const double rhs = right_weight(mu, u, v) * right_weight(mu, concat(u, v), w);
    record(report.right, relative_defect(lhs, rhs), "u=" + u.str(n) + " v=" + v.str(n) + " w=" + w.str(n));
  });
  return report;
}

DefectReport check_intertwining(const WeightSystem& ws, int depth) {
  const int n = ws.alphabet();
  DefectReport report;
  report.identity = "mu_{i,v} W(vi,w) = mu_{i,wv} W(v,w)";
  if (depth < 1) return report;
  const auto words = all_words(n, depth - 1);
  for (const auto& v : words) {
    for (const auto& w : words) {
      if (static_cast<int>(v.length() + w.length()) + 1 > depth) break;
      for (int i = 1; i <= n; ++i) {
        const double lhs = commutant_mu(ws, i, v) * left_weight(ws, v.append(i), w);
        const double rhs = commutant_mu(ws, i, concat(w, v)) * left_weight(ws, v, w);
        record(report, relative_defect(lhs, rhs),
               "i=" + std::to_string(i) + " v=" + v.str(n) + " w=" + w.str(n));
      }
    }
  }
  return report;
}

WeightSystem lambda_from_mu(const MuSystem& mu, int depth) {
  const int n = mu.alphabet();
  if (depth < 0) throw DomainError("depth must be nonnegative");
  for (int i = 1; i <= n; ++i) {
    const double at_unit = mu.mu(i, Word{});
    if (std::abs(at_unit - 1.0) > 1e-12) {
      throw DomainError("right weights must be normalized: mu_{" + std::to_string(i) + ",e} = " +
                        std::to_string(at_unit));
    }
  }
  if (const WeightSystem* ws = mu.source()) {
    const auto cond = condition6_sup(*ws, std::max(depth, 1));
    if (cond.verdict == Verdict::Diverging) {
      throw PreconditionError("right weights are unbounded: " + describe(cond));
    }
  }
  const BasisEnumeration basis(n, depth);
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> values(basis.dimension() * un);
  for (std::size_t s = 0; s < basis.dimension(); ++s) {
    const Word w = basis.word(s);
    const double denom = right_weight(mu, Word{}, w);
    for (int i = 1; i <= n; ++i) {
      values[s * un + (i - 1)] = right_weight(mu, Word::letter(i), w) / denom;
    }
  }
  return WeightSystem::tabulated(n, depth, std::move(values));
}

double tilde_sup(const MuSystem& mu, int depth) {
  const int n = mu.alphabet();
  const BasisEnumeration basis(n, depth);
  double best = 0.0;
  for (std::size_t s = 0; s < basis.dimension(); ++s) {
    const Word w = basis.word(s);
    const double denom = right_weight(mu, Word{}, w);
    for (int i = 1; i <= n; ++i) best = std::max(best, right_weight(mu, Word::letter(i), w) / denom);
  }
  return best;
}

SemisimpleEstimate semisimple_estimate(const MuSystem& mu, int max_v_len, int max_k) {
  if (max_v_len < 1) throw DomainError("max_v_len must be at least 1");
  if (max_k < 1) throw DomainError("max_k must be at least 1");
  const int n = mu.alphabet();
  SemisimpleEstimate out;
  out.max_v_len = max_v_len;
  out.k_high = max_k;
  out.k_low = std::max(1, max_k / 2);
  out.value = std::numeric_limits<double>::infinity();
  const BasisEnumeration basis(n, max_v_len);
  for (std::size_t s = 1; s < basis.dimension(); ++s) {
    const Word v = basis.word(s);
    const double log_head = std::log(right_weight(mu, Word{}, v));
    // log W_mu(v, v^{k-1}) accumulated one letter at a time.
    double log_tail = 0.0;
    Word base = v;
    double inner = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= max_k; ++k) {
      if (k > 1) {
        for (Letter a : v.letters()) {
          log_tail += std::log(mu.mu(a, base));
          base = base.append(a);
        }
      }
      if (k >= out.k_low) inner = std::min(inner, log_tail / k);
    }
    const double value = std::exp(inner - log_head);
    if (value < out.value) {
      out.value = value;
      out.argmin = v;
    }
  }
  return out;
}

SemisimpleEstimate semisimple_estimate(const WeightSystem& ws, int max_v_len, int max_k) {
  const auto cond = condition6_sup(ws, std::max(1, max_v_len));
  if (cond.verdict == Verdict::Diverging) {
    throw PreconditionError("commutant weights are unbounded: " + describe(cond));
  }
  return semisimple_estimate(MuSystem::commutant(ws), max_v_len, max_k);
}

}  // namespace fockshift

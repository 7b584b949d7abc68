#include "fockshift/fock.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fockshift/kernels.hpp"
#include "fockshift/parallel.hpp"

namespace fockshift {

namespace {

void require_letter(int i, int n) {
  if (i < 1 || i > n) throw DomainError("letter " + std::to_string(i) + " out of range [1, " + std::to_string(n) + "]");
}

// W(u, w) for every basis word w, where `first` is the automaton state of u.
std::vector<double> weights_from(const TruncatedFock& space, const WeightAutomaton& a, std::size_t first) {
  const auto& basis = space.basis();
  std::vector<double> out(space.dimension(), 0.0);
  std::vector<std::size_t> state(space.dimension(), 0);
  out[0] = 1.0;
  state[0] = first;
  const std::size_t inner = space.depth() > 0 ? space.levels_end(space.depth() - 1) : 0;
  for (std::size_t idx = 0; idx < inner; ++idx) {
    for (int c = 1; c <= space.alphabet(); ++c) {
      const std::size_t child = basis.prepend_index(c, idx);
      out[child] = out[idx] * a.at(state[idx], c);
      state[child] = a.step(state[idx], c);
    }
  }
  return out;
}

void require_defined(double value, const WeightSystem& ws) {
  if (std::isnan(value)) {
    throw DomainError("truncation depth exceeds the tabulated depth of the " + ws.family_name() + " weight system");
  }
}

}  // namespace

TruncatedFock::TruncatedFock(int n, int depth) : basis_(std::make_shared<const BasisEnumeration>(n, depth)) {
  auto levels = std::make_shared<std::vector<int>>(basis_->dimension());
  for (int k = 0; k <= depth; ++k) {
    std::fill(levels->begin() + static_cast<std::ptrdiff_t>(basis_->level_offset(k)),
              levels->begin() + static_cast<std::ptrdiff_t>(basis_->levels_end(k)), k);
  }
  levels_ = std::move(levels);
}

std::vector<cplx> TruncatedFock::basis_vector(const Word& w) const {
  std::vector<cplx> v(dimension());
  v[index(w)] = 1.0;
  return v;
}

GradedOperator::GradedOperator(TruncatedFock space)
    : space_(std::move(space)), col_ptr_(space_.dimension() + 1, 0) {}

GradedOperator GradedOperator::identity(const TruncatedFock& space) {
  std::vector<Triplet> entries;
  entries.reserve(space.dimension());
  for (std::size_t k = 0; k < space.dimension(); ++k) entries.push_back({k, k, 1.0});
  return from_triplets(space, std::move(entries));
}

GradedOperator GradedOperator::from_triplets(const TruncatedFock& space, std::vector<Triplet> entries) {
  const std::size_t dim = space.dimension();
  for (const auto& t : entries) {
    if (t.row >= dim || t.col >= dim) throw DomainError("operator entry outside the truncated space");
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) { return a.col != b.col ? a.col < b.col : a.row < b.row; });
  GradedOperator op(space);
  op.rows_.reserve(entries.size());
  op.values_.reserve(entries.size());
  std::vector<std::size_t> counts(dim, 0);
  for (std::size_t p = 0; p < entries.size();) {
    std::size_t q = p;
    cplx total = 0.0;
    while (q < entries.size() && entries[q].col == entries[p].col && entries[q].row == entries[p].row) {
      total += entries[q].value;
      ++q;
    }
    if (total != cplx(0.0)) {
      op.rows_.push_back(entries[p].row);
      op.values_.push_back(total);
      ++counts[entries[p].col];
    }
    p = q;
  }
  for (std::size_t c = 0; c < dim; ++c) op.col_ptr_[c + 1] = op.col_ptr_[c] + counts[c];
  return op;
}

GradedOperator GradedOperator::from_dense(const TruncatedFock& space, const Eigen::MatrixXcd& m) {
  if (static_cast<std::size_t>(m.rows()) != space.dimension() || static_cast<std::size_t>(m.cols()) != space.dimension()) {
    throw DomainError("dense matrix does not match the truncated space dimension");
  }
  std::vector<Triplet> entries;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (m(r, c) != cplx(0.0)) entries.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), m(r, c)});
    }
  }
  return from_triplets(space, std::move(entries));
}

cplx GradedOperator::entry(std::size_t row, std::size_t col) const {
  if (row >= dimension() || col >= dimension()) throw DomainError("operator entry outside the truncated space");
  const auto begin = rows_.begin() + static_cast<std::ptrdiff_t>(col_ptr_[col]);
  const auto end = rows_.begin() + static_cast<std::ptrdiff_t>(col_ptr_[col + 1]);
  const auto it = std::lower_bound(begin, end, row);
  if (it == end || *it != row) return 0.0;
  return values_[static_cast<std::size_t>(it - rows_.begin())];
}

std::vector<std::pair<std::size_t, cplx>> GradedOperator::column(std::size_t col) const {
  if (col >= dimension()) throw DomainError("column outside the truncated space");
  std::vector<std::pair<std::size_t, cplx>> out;
  for (std::size_t p = col_ptr_[col]; p < col_ptr_[col + 1]; ++p) out.emplace_back(rows_[p], values_[p]);
  return out;
}

std::vector<Triplet> GradedOperator::triplets() const {
  std::vector<Triplet> out;
  out.reserve(rows_.size());
  for (std::size_t c = 0; c < dimension(); ++c) {
    for (std::size_t p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) out.push_back({rows_[p], c, values_[p]});
  }
  return out;
}

std::vector<cplx> GradedOperator::apply(std::span<const cplx> x) const {
  if (x.size() != dimension()) throw DomainError("vector length does not match the truncated space dimension");
  std::vector<cplx> y(dimension());
  for (std::size_t c = 0; c < dimension(); ++c) {
    if (x[c] == cplx(0.0)) continue;
    for (std::size_t p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) y[rows_[p]] += values_[p] * x[c];
  }
  return y;
}

GradedOperator GradedOperator::adjoint() const {
  auto entries = triplets();
  for (auto& t : entries) {
    std::swap(t.row, t.col);
    t.value = std::conj(t.value);
  }
  return from_triplets(space_, std::move(entries));
}

void GradedOperator::require_same_space(const GradedOperator& other) const {
  if (!(space_ == other.space_)) throw DomainError("operators act on different truncated spaces");
}

GradedOperator GradedOperator::operator*(const GradedOperator& rhs) const {
  require_same_space(rhs);
  const std::size_t dim = dimension();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(worker_count(), dim));
  const std::size_t chunk = (dim + workers - 1) / workers;
  std::vector<std::vector<Triplet>> parts(workers);
  parallel_for(workers, [&](std::size_t t) {
    std::vector<cplx> acc(dim);
    std::vector<char> seen(dim, 0);
    std::vector<std::size_t> touched;
    const std::size_t end = std::min(dim, (t + 1) * chunk);
    for (std::size_t c = t * chunk; c < end; ++c) {
      touched.clear();
      for (std::size_t p = rhs.col_ptr_[c]; p < rhs.col_ptr_[c + 1]; ++p) {
        const std::size_t k = rhs.rows_[p];
        for (std::size_t q = col_ptr_[k]; q < col_ptr_[k + 1]; ++q) {
          const std::size_t r = rows_[q];
          if (!seen[r]) {
            seen[r] = 1;
            touched.push_back(r);
          }
          acc[r] += values_[q] * rhs.values_[p];
        }
      }
      std::sort(touched.begin(), touched.end());
      for (std::size_t r : touched) {
        parts[t].push_back({r, c, acc[r]});
        acc[r] = 0.0;
        seen[r] = 0;
      }
    }
  });
  std::vector<Triplet> entries;
  for (auto& part : parts) entries.insert(entries.end(), part.begin(), part.end());
  return from_triplets(space_, std::move(entries));
}

GradedOperator GradedOperator::operator+(const GradedOperator& rhs) const {
  require_same_space(rhs);
  auto entries = triplets();
  auto more = rhs.triplets();
  entries.insert(entries.end(), more.begin(), more.end());
  return from_triplets(space_, std::move(entries));
}

GradedOperator GradedOperator::operator-(const GradedOperator& rhs) const { return *this + rhs.scaled(-1.0); }

GradedOperator GradedOperator::scaled(cplx s) const {
  auto entries = triplets();
  for (auto& t : entries) t.value *= s;
  return from_triplets(space_, std::move(entries));
}

GradedOperator GradedOperator::band(int j) const {
  std::vector<Triplet> entries;
  for (const auto& t : triplets()) {
    if (space_.level_of(t.col) - space_.level_of(t.row) == j) entries.push_back(t);
  }
  return from_triplets(space_, std::move(entries));
}

std::vector<int> GradedOperator::bands() const {
  std::set<int> found;
  for (const auto& t : triplets()) found.insert(space_.level_of(t.col) - space_.level_of(t.row));
  return {found.begin(), found.end()};
}

Eigen::MatrixXcd GradedOperator::to_dense() const {
  if (dimension() > kDenseLimit) {
    throw DomainError("dimension " + std::to_string(dimension()) + " exceeds the dense limit " +
                      std::to_string(kDenseLimit));
  }
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : triplets()) m(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;
  return m;
}

double GradedOperator::max_entry_diff(const GradedOperator& other) const {
  const GradedOperator diff = *this - other;
  double best = 0.0;
  for (const auto& v : diff.values_) best = std::max(best, std::abs(v));
  return best;
}

std::vector<std::size_t> word_states(const TruncatedFock& space, const WeightSystem& ws) {
  if (ws.alphabet() != space.alphabet()) throw DomainError("weight system and space alphabets differ");
  const auto& a = ws.automaton();
  std::vector<std::size_t> state(space.dimension(), a.start);
  const std::size_t inner = space.depth() > 0 ? space.levels_end(space.depth() - 1) : 0;
  for (std::size_t idx = 0; idx < inner; ++idx) {
    for (int c = 1; c <= space.alphabet(); ++c) state[space.basis().prepend_index(c, idx)] = a.step(state[idx], c);
  }
  return state;
}

std::vector<double> vacuum_weights(const TruncatedFock& space, const WeightSystem& ws) {
  if (ws.alphabet() != space.alphabet()) throw DomainError("weight system and space alphabets differ");
  auto out = weights_from(space, ws.automaton(), ws.automaton().start);
  for (double v : out) require_defined(v, ws);
  return out;
}

GradedOperator build_shift(const TruncatedFock& space, const WeightSystem& ws, ShiftKind kind, int i) {
  const int n = space.alphabet();
  if (ws.alphabet() != n) throw DomainError("weight system and space alphabets differ");
  require_letter(i, n);
  const auto& basis = space.basis();
  const std::size_t inner = space.depth() > 0 ? space.levels_end(space.depth() - 1) : 0;
  std::vector<Triplet> entries;
  entries.reserve(inner);
  switch (kind) {
    case ShiftKind::LeftUnweighted:
      for (std::size_t c = 0; c < inner; ++c) entries.push_back({basis.prepend_index(i, c), c, 1.0});
      break;
    case ShiftKind::RightUnweighted:
      for (std::size_t c = 0; c < inner; ++c) entries.push_back({basis.append_index(c, i), c, 1.0});
      break;
    case ShiftKind::LeftWeighted: {
      const auto state = word_states(space, ws);
      for (std::size_t c = 0; c < inner; ++c) {
        const double value = ws.automaton().at(state[c], i);
        require_defined(value, ws);
        entries.push_back({basis.prepend_index(i, c), c, value});
      }
      break;
    }
    case ShiftKind::RightWeighted: {
      const auto cond = condition6_sup(ws, std::max(1, space.depth()));
      if (cond.verdict == Verdict::Diverging) {
        throw PreconditionError("weighted right shift undefined, commutant weights are unbounded: " + describe(cond));
      }
      const auto& a = ws.automaton();
      const auto we = weights_from(space, a, a.start);
      const auto wi = weights_from(space, a, a.step(a.start, i));
      for (std::size_t c = 0; c < inner; ++c) {
        const double value = wi[c] / we[c];
        require_defined(value, ws);
        entries.push_back({basis.append_index(c, i), c, value});
      }
      break;
    }
  }
  return GradedOperator::from_triplets(space, std::move(entries));
}

GradedOperator build_shift(const TruncatedFock& space, const MuSystem& mu, int i) {
  if (mu.alphabet() != space.alphabet()) throw DomainError("right weights and space alphabets differ");
  require_letter(i, space.alphabet());
  const std::size_t inner = space.depth() > 0 ? space.levels_end(space.depth() - 1) : 0;
  std::vector<Triplet> entries;
  entries.reserve(inner);
  for (std::size_t c = 0; c < inner; ++c) {
    entries.push_back({space.basis().append_index(c, i), c, mu.mu(i, space.word(c))});
  }
  return GradedOperator::from_triplets(space, std::move(entries));
}

GradedOperator build_word_shift(const TruncatedFock& space, const WeightSystem& ws, const Word& u) {
  if (ws.alphabet() != space.alphabet()) throw DomainError("weight system and space alphabets differ");
  require_alphabet(u, space.alphabet());
  std::vector<Triplet> entries;
  if (static_cast<int>(u.length()) > space.depth()) return GradedOperator(space);
  const std::size_t cols = space.levels_end(space.depth() - static_cast<int>(u.length()));
  entries.reserve(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const Word v = space.word(c);
    entries.push_back({space.index(concat(u, v)), c, left_weight(ws, v, u)});
  }
  return GradedOperator::from_triplets(space, std::move(entries));
}

LeftShiftAction::LeftShiftAction(const TruncatedFock& space, const WeightSystem& ws) : space_(space) {
  if (ws.alphabet() != space.alphabet()) throw DomainError("weight system and space alphabets differ");
  const auto state = word_states(space, ws);
  const std::size_t inner = space.depth() > 0 ? space.levels_end(space.depth() - 1) : 0;
  weights_.resize(static_cast<std::size_t>(space.alphabet()));
  for (int i = 1; i <= space.alphabet(); ++i) {
    auto& w = weights_[static_cast<std::size_t>(i - 1)];
    w.resize(inner);
    for (std::size_t c = 0; c < inner; ++c) {
      w[c] = ws.automaton().at(state[c], i);
      require_defined(w[c], ws);
    }
  }
}

std::span<const double> LeftShiftAction::weights(int i) const {
  require_letter(i, space_.alphabet());
  return weights_[static_cast<std::size_t>(i - 1)];
}

void LeftShiftAction::apply(int i, std::span<const cplx> x, std::span<cplx> y) const {
  const auto w = weights(i);
  std::fill(y.begin(), y.end(), cplx(0.0));
  const auto& basis = space_.basis();
  for (int k = 0; k < space_.depth(); ++k) {
    const std::size_t len = basis.level_size(k);
    const std::size_t src = basis.level_offset(k);
    const std::size_t dst = basis.level_offset(k + 1) + static_cast<std::size_t>(i - 1) * len;
    kernels::scale_into(w.subspan(src, len), x.subspan(src, len), y.subspan(dst, len));
  }
}

void LeftShiftAction::apply_adjoint(int i, std::span<const cplx> x, std::span<cplx> y) const {
  const auto w = weights(i);
  std::fill(y.begin(), y.end(), cplx(0.0));
  const auto& basis = space_.basis();
  for (int k = 0; k < space_.depth(); ++k) {
    const std::size_t len = basis.level_size(k);
    const std::size_t dst = basis.level_offset(k);
    const std::size_t src = basis.level_offset(k + 1) + static_cast<std::size_t>(i - 1) * len;
    kernels::scale_into(w.subspan(dst, len), x.subspan(src, len), y.subspan(dst, len));
  }
}

double vector_norm(std::span<const cplx> x) { return std::sqrt(kernels::norm_sq(x)); }

PowerIterationResult shift_norm(const LeftShiftAction& action, int i, double tol, int max_iter) {
  const std::size_t dim = action.space().dimension();
  std::vector<cplx> v(dim, cplx(1.0 / std::sqrt(static_cast<double>(dim))));
  std::vector<cplx> tv(dim), u(dim);
  PowerIterationResult out;
  double previous = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    action.apply(i, v, tv);
    const double quotient = kernels::norm_sq(tv);
    out.iterations = it;
    out.norm = std::sqrt(quotient);
    if (quotient == 0.0 || (previous >= 0.0 && std::abs(quotient - previous) <= tol * quotient)) {
      out.converged = true;
      break;
    }
    previous = quotient;
    action.apply_adjoint(i, tv, u);
    const double len = vector_norm(u);
    for (std::size_t k = 0; k < dim; ++k) v[k] = u[k] / len;
  }
  return out;
}

std::vector<NormCheckEntry> norm_check(const WeightSystem& ws, int depth) {
  if (depth < 1) throw DomainError("norm_check needs depth >= 1");
  const TruncatedFock space(ws.alphabet(), depth);
  const LeftShiftAction action(space, ws);
  std::vector<NormCheckEntry> out;
  for (int i = 1; i <= ws.alphabet(); ++i) {
    NormCheckEntry e;
    e.letter = i;
    const auto w = action.weights(i);
    e.max_weight = *std::max_element(w.begin(), w.end());
    const auto pi = shift_norm(action, i);
    e.power_norm = pi.norm;
    e.iterations = pi.iterations;
    e.converged = pi.converged;
    e.gap = std::abs(e.power_norm - e.max_weight) / e.max_weight;
    out.push_back(e);
  }
  return out;
}

namespace {

double column_diff_norm(const std::vector<std::pair<std::size_t, cplx>>& a,
                        const std::vector<std::pair<std::size_t, cplx>>& b) {
  double total = 0.0;
  std::size_t p = 0, q = 0;
  while (p < a.size() || q < b.size()) {
    if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
      total += std::norm(a[p++].second);
    } else if (p == a.size() || b[q].first < a[p].first) {
      total += std::norm(b[q++].second);
    } else {
      total += std::norm(a[p++].second - b[q++].second);
    }
  }
  return std::sqrt(total);
}

}  // namespace

CommutationReport commutation_defect(const WeightSystem& ws, const MuSystem& mu, int depth) {
  if (depth < 2) throw DomainError("commutation_defect needs depth >= 2");
  if (mu.alphabet() != ws.alphabet()) throw DomainError("weight and right weight alphabets differ");
  const int n = ws.alphabet();
  const TruncatedFock space(n, depth);
  std::vector<GradedOperator> t, s;
  for (int i = 1; i <= n; ++i) {
    t.push_back(build_shift(space, ws, ShiftKind::LeftWeighted, i));
    s.push_back(build_shift(space, mu, i));
  }
  CommutationReport report;
  const std::size_t cols = space.levels_end(depth - 2);
  bool first = true;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const GradedOperator ts = t[static_cast<std::size_t>(i - 1)] * s[static_cast<std::size_t>(j - 1)];
      const GradedOperator st = s[static_cast<std::size_t>(j - 1)] * t[static_cast<std::size_t>(i - 1)];
      for (std::size_t c = 0; c < cols; ++c) {
        const double d = column_diff_norm(ts.column(c), st.column(c));
        ++report.columns;
        if (first || d > report.max_defect) {
          first = false;
          report.max_defect = d;
          report.i = i;
          report.j = j;
          report.witness = space.word(c);
        }
      }
    }
  }
  return report;
}

CommutationReport commutation_defect(const WeightSystem& ws, int depth) {
  const auto cond = condition6_sup(ws, std::max(1, depth));
  if (cond.verdict == Verdict::Diverging) {
    throw PreconditionError("commutant weights are unbounded: " + describe(cond));
  }
  return commutation_defect(ws, MuSystem::commutant(ws), depth);
}

VacuumKernelReport vacuum_kernel_check(const WeightSystem& ws, int depth) {
  if (depth < 1) throw DomainError("vacuum_kernel_check needs depth >= 1");
  const int n = ws.alphabet();
  const TruncatedFock space(n, depth);
  const std::size_t dim = space.dimension();
  VacuumKernelReport report;

  // Stacked rows (i, r) of T_i^*. A column c is nonzero in T_i^* iff c = i w.
  std::vector<std::vector<std::pair<std::size_t, double>>> stacked(dim);
  std::vector<GradedOperator> adjoints;
  for (int i = 1; i <= n; ++i) {
    adjoints.push_back(build_shift(space, ws, ShiftKind::LeftWeighted, i).adjoint());
    for (const auto& t : adjoints.back().triplets()) {
      stacked[t.col].emplace_back(static_cast<std::size_t>(i - 1) * dim + t.row, std::abs(t.value));
    }
  }
  std::set<std::size_t> used_rows;
  bool disjoint = true;
  for (std::size_t c = 0; c < dim; ++c) {
    if (stacked[c].empty()) ++report.kernel_dim_structural;
    for (const auto& [row, value] : stacked[c]) disjoint = used_rows.insert(row).second && disjoint;
  }
  report.supports_disjoint = disjoint;
  report.vacuum_in_kernel = stacked[0].empty();

  if (dim <= kDenseLimit) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n * dim), static_cast<Eigen::Index>(dim));
    for (std::size_t c = 0; c < dim; ++c) {
      for (const auto& [row, value] : stacked[c]) {
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = value;
      }
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-10 * (sv.size() > 0 ? sv(0) : 0.0);
    std::size_t rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv(k) > cutoff ? 1 : 0;
    report.kernel_dim_svd = dim - rank;
  }

  GradedOperator sum(space);
  for (int i = 1; i <= n; ++i) {
    const auto l = build_shift(space, ws, ShiftKind::LeftUnweighted, i);
    sum = sum + l * l.adjoint();
  }
  std::vector<Triplet> pe{{0, 0, 1.0}};
  const GradedOperator defect =
      GradedOperator::identity(space) - sum - GradedOperator::from_triplets(space, std::move(pe));
  const std::size_t low = space.levels_end(depth - 1);
  for (const auto& t : defect.triplets()) {
    if (t.row < low && t.col < low) report.projection_defect = std::max(report.projection_defect, std::abs(t.value));
  }
  return report;
}

}  // namespace fockshift

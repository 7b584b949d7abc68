#include "fockshift/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "fockshift/kernels.hpp"
#include "fockshift/parallel.hpp"

namespace fockshift {

namespace {

// Slack on the verdict thresholds so grid points landing on 1 +- eps up to
// rounding are classified the same way on every platform.
constexpr double kVerdictSlack = 1e-12;
constexpr std::size_t kMaxLevelWords = std::size_t{1} << 20;
constexpr std::size_t kMaxGridPoints = std::size_t{1} << 20;

void require_tuple(std::size_t size, int n, const char* what) {
  if (static_cast<int>(size) != n) {
    throw DomainError(std::string(what) + " has " + std::to_string(size) + " entries, expected " + std::to_string(n));
  }
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

EigenCandidate eigenvector_coeffs(const WeightSystem& ws, std::span<const cplx> lambda, int depth) {
  const int n = ws.alphabet();
  require_tuple(lambda.size(), n, "lambda");
  if (depth < 0) throw DomainError("depth must be nonnegative");
  const TruncatedFock space(n, depth);
  const auto state = word_states(space, ws);
  EigenCandidate out;
  out.lambda.assign(lambda.begin(), lambda.end());
  out.depth = depth;
  out.coeffs.assign(space.dimension(), 0.0);
  out.coeffs[0] = 1.0;
  const std::size_t inner = depth > 0 ? space.levels_end(depth - 1) : 0;
  for (std::size_t idx = 0; idx < inner; ++idx) {
    for (int i = 1; i <= n; ++i) {
      const double weight = ws.automaton().at(state[idx], i);
      if (std::isnan(weight)) throw DomainError("depth exceeds the tabulated weights");
      out.coeffs[space.basis().prepend_index(i, idx)] =
          out.coeffs[idx] * std::conj(lambda[static_cast<std::size_t>(i - 1)]) / weight;
    }
  }
  return out;
}

EigenResidual eigen_residual(const WeightSystem& ws, const EigenCandidate& candidate) {
  const int n = ws.alphabet();
  require_tuple(candidate.lambda.size(), n, "lambda");
  const TruncatedFock space(n, candidate.depth);
  if (candidate.coeffs.size() != space.dimension()) throw DomainError("eigenvector length does not match the depth");
  EigenResidual out;
  if (candidate.depth < 1) {
    out.per_letter.assign(static_cast<std::size_t>(n), 0.0);
    return out;
  }
  const LeftShiftAction action(space, ws);
  const std::size_t low = space.levels_end(candidate.depth - 1);
  std::vector<cplx> image(space.dimension());
  double worst_entry = -1.0;
  for (int i = 1; i <= n; ++i) {
    action.apply_adjoint(i, candidate.coeffs, image);
    const cplx target = std::conj(candidate.lambda[static_cast<std::size_t>(i - 1)]);
    double total = 0.0;
    for (std::size_t k = 0; k < low; ++k) {
      const double d = std::abs(image[k] - target * candidate.coeffs[k]);
      total += d * d;
      if (d > worst_entry) {
        worst_entry = d;
        out.letter = i;
        out.witness = space.word(k);
      }
    }
    const double norm = std::sqrt(total);
    out.per_letter.push_back(norm);
    out.max_residual = std::max(out.max_residual, norm);
  }
  return out;
}

EigenResidual eigen_residual(const WeightSystem& ws, std::span<const cplx> lambda, int depth) {
  return eigen_residual(ws, eigenvector_coeffs(ws, lambda, depth));
}

std::size_t eigenspace_dimension(const WeightSystem& ws, std::span<const cplx> lambda, int depth, double rel_tol) {
  const int n = ws.alphabet();
  require_tuple(lambda.size(), n, "lambda");
  if (depth < 1) throw DomainError("eigenspace_dimension needs depth >= 1");
  const TruncatedFock space(n, depth);
  if (space.dimension() > kDenseLimit) throw DomainError("dimension exceeds the dense limit");
  const auto state = word_states(space, ws);
  const std::size_t low = space.levels_end(depth - 1);
  const auto rows = static_cast<Eigen::Index>(static_cast<std::size_t>(n) * low);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, static_cast<Eigen::Index>(space.dimension()));
  for (int i = 1; i <= n; ++i) {
    for (std::size_t w = 0; w < low; ++w) {
      const auto row = static_cast<Eigen::Index>(static_cast<std::size_t>(i - 1) * low + w);
      m(row, static_cast<Eigen::Index>(space.basis().prepend_index(i, w))) = ws.automaton().at(state[w], i);
      m(row, static_cast<Eigen::Index>(w)) -= std::conj(lambda[static_cast<std::size_t>(i - 1)]);
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_tol * (sv.size() > 0 ? sv(0) : 0.0);
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv(k) > cutoff ? 1 : 0;
  return space.dimension() - rank;
}

LevelSums level_sums(const WeightSystem& ws, std::span<const double> r, int depth) {
  const int n = ws.alphabet();
  require_tuple(r.size(), n, "moduli");
  for (double x : r) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("moduli must be finite and nonnegative");
  }
  if (depth < 0) throw DomainError("depth must be nonnegative");
  const BasisEnumeration basis(n, depth);
  if (basis.level_size(depth) > kMaxLevelWords) {
    throw DomainError("level sums at n=" + std::to_string(n) + ", depth=" + std::to_string(depth) +
                      " need more than 2^20 words per level");
  }
  const TruncatedFock space(n, depth);
  const auto state = word_states(space, ws);
  // inv_sq[i][idx] = lambda_{i,w}^{-2} for words below the top level.
  const std::size_t inner = depth > 0 ? space.levels_end(depth - 1) : 0;
  std::vector<std::vector<double>> inv_sq(static_cast<std::size_t>(n), std::vector<double>(inner));
  for (int i = 1; i <= n; ++i) {
    for (std::size_t idx = 0; idx < inner; ++idx) {
      const double w = ws.automaton().at(state[idx], i);
      if (std::isnan(w)) throw DomainError("depth exceeds the tabulated weights");
      inv_sq[static_cast<std::size_t>(i - 1)][idx] = 1.0 / (w * w);
    }
  }
  LevelSums out;
  std::vector<double> block{1.0};
  double log_scale = 0.0;
  out.sigma.push_back(1.0);
  out.log_sigma.push_back(0.0);
  for (int k = 0; k < depth; ++k) {
    const std::size_t len = basis.level_size(k);
    const std::size_t off = basis.level_offset(k);
    std::vector<double> next(len * static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
      const double ri = r[static_cast<std::size_t>(i - 1)];
      kernels::scaled_product(ri * ri, block,
                              std::span<const double>(inv_sq[static_cast<std::size_t>(i - 1)]).subspan(off, len),
                              std::span<double>(next).subspan(static_cast<std::size_t>(i - 1) * len, len));
    }
    block = std::move(next);
    const double s = kernels::sum(block);
    if (s > 0.0 && (s > 1e100 || s < 1e-100)) {
      // Rescale the block so later levels stay in range; the scale lives in log space.
      for (double& x : block) x /= s;
      log_scale += std::log(s);
      out.log_sigma.push_back(log_scale);
      out.sigma.push_back(std::exp(log_scale));
    } else {
      out.log_sigma.push_back(s > 0.0 ? std::log(s) + log_scale : -std::numeric_limits<double>::infinity());
      out.sigma.push_back(log_scale == 0.0 ? s : std::exp(std::log(s) + log_scale));
    }
  }
  for (double s : out.sigma) out.partial_sum += s;
  return out;
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Outside: return "outside";
    case Membership::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

MembershipVerdict membership_verdict(const LevelSums& sums, double epsilon) {
  if (sums.sigma.size() < 4) throw DomainError("membership verdict needs at least 4 levels");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  const int depth = static_cast<int>(sums.sigma.size()) - 1;
  MembershipVerdict out;
  out.epsilon = epsilon;
  out.window = std::max(1, (depth + 3) / 4);
  std::vector<double> ratios;
  for (int k = depth - out.window; k < depth; ++k) {
    const double a = sums.log_sigma[static_cast<std::size_t>(k)];
    const double b = sums.log_sigma[static_cast<std::size_t>(k + 1)];
    double ratio;
    if (std::isinf(b) && b < 0) {
      ratio = 0.0;
    } else if (std::isinf(a) && a < 0) {
      ratio = std::numeric_limits<double>::infinity();
    } else if (std::isfinite(sums.sigma[static_cast<std::size_t>(k)]) &&
               std::isfinite(sums.sigma[static_cast<std::size_t>(k + 1)]) && sums.sigma[static_cast<std::size_t>(k)] > 0) {
      ratio = sums.sigma[static_cast<std::size_t>(k + 1)] / sums.sigma[static_cast<std::size_t>(k)];
    } else {
      ratio = std::exp(b - a);
    }
    ratios.push_back(ratio);
  }
  out.tail_ratio = ratios.back();
  const bool overflow = !std::isfinite(sums.partial_sum) || sums.partial_sum > 1e250;
  const bool inside = std::all_of(ratios.begin(), ratios.end(),
                                  [&](double x) { return x <= 1.0 - epsilon + kVerdictSlack; });
  const bool outside = std::all_of(ratios.begin(), ratios.end(),
                                   [&](double x) { return x >= 1.0 + epsilon - kVerdictSlack; });
  if (overflow || outside) {
    out.verdict = Membership::Outside;
  } else if (inside) {
    out.verdict = Membership::Inside;
  }
  return out;
}

EllipseResult ellipse_predicate(const WeightSystem& ws, std::span<const double> r, int depth_for_inf) {
  const int n = ws.alphabet();
  require_tuple(r.size(), n, "moduli");
  if (depth_for_inf < 0) throw DomainError("depth must be nonnegative");
  const TruncatedFock space(n, depth_for_inf);
  const auto state = word_states(space, ws);
  EllipseResult out;
  out.c.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (std::size_t idx = 0; idx < space.dimension(); ++idx) {
    for (int i = 1; i <= n; ++i) {
      const double w = ws.automaton().at(state[idx], i);
      if (std::isnan(w)) throw DomainError("depth exceeds the tabulated weights");
      out.c[static_cast<std::size_t>(i - 1)] = std::min(out.c[static_cast<std::size_t>(i - 1)], w);
    }
  }
  for (int i = 0; i < n; ++i) {
    const double c = out.c[static_cast<std::size_t>(i)];
    if (!(c > 1e-300)) {
      throw PreconditionError("weights of letter " + std::to_string(i + 1) +
                              " are not bounded away from zero on the inspected range");
    }
    out.value += (r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)]) / (c * c);
  }
  out.inside = out.value < 1.0;
  return out;
}

HereditaryResult hereditary_check(const WeightSystem& ws, std::span<const double> r, std::span<const double> r_prime,
                                  int depth) {
  require_tuple(r.size(), ws.alphabet(), "moduli");
  require_tuple(r_prime.size(), ws.alphabet(), "dominated moduli");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r_prime[i] > r[i]) {
      throw DomainError("r' does not lie below r in coordinate " + std::to_string(i + 1));
    }
  }
  const auto big = level_sums(ws, r, depth);
  const auto small = level_sums(ws, r_prime, depth);
  HereditaryResult out;
  for (std::size_t k = 0; k < big.sigma.size(); ++k) {
    if (small.log_sigma[k] > big.log_sigma[k]) {
      out.holds = false;
      out.violation_level = static_cast<int>(k);
      break;
    }
  }
  return out;
}

std::vector<double> GridSpec::values() const {
  if (!(lo >= 0.0) || !(hi >= lo) || !(step > 0.0) || !std::isfinite(hi)) {
    throw DomainError("grid needs 0 <= lo <= hi and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > kMaxGridPoints) throw DomainError("grid has too many points per axis");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

GridSpec GridSpec::parse(const std::string& text) {
  GridSpec g;
  std::istringstream in(text);
  char c1 = 0, c2 = 0;
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw DomainError("grid must look like lo:hi:step, got \"" + text + "\"");
  }
  g.values();
  return g;
}

std::vector<RegionRow> region_sample(const WeightSystem& ws, const GridSpec& grid, int depth, double epsilon) {
  const int n = ws.alphabet();
  const auto axis = grid.values();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > kMaxGridPoints / axis.size()) throw DomainError("grid has too many points");
    total *= axis.size();
  }
  std::vector<RegionRow> rows(total);
  parallel_for(total, [&](std::size_t p) {
    RegionRow row;
    row.r.resize(static_cast<std::size_t>(n));
    std::size_t rest = p;
    for (int i = n - 1; i >= 0; --i) {
      row.r[static_cast<std::size_t>(i)] = axis[rest % axis.size()];
      rest /= axis.size();
    }
    const auto sums = level_sums(ws, row.r, depth);
    const auto verdict = membership_verdict(sums, epsilon);
    row.levels = static_cast<int>(sums.sigma.size());
    row.partial_sum = sums.partial_sum;
    row.tail_ratio = verdict.tail_ratio;
    row.verdict = verdict.verdict;
    rows[p] = std::move(row);
  });
  return rows;
}

std::string region_csv(int n, const std::vector<RegionRow>& rows) {
  std::string out;
  for (int i = 1; i <= n; ++i) out += "r" + std::to_string(i) + ",";
  out += "levels,partial_sum,tail_ratio,verdict\n";
  for (const auto& row : rows) {
    for (double x : row.r) out += format_g17(x) + ",";
    out += std::to_string(row.levels) + "," + format_g17(row.partial_sum) + "," + format_g17(row.tail_ratio) + "," +
           to_string(row.verdict) + "\n";
  }
  return out;
}

}  // namespace fockshift

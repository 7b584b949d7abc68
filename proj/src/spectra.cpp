#include "fockshift/spectra.hpp"

#include <cmath>
#include <random>

namespace fockshift {

namespace {

constexpr double kUnimodularTol = 1e-12;

double tuple_norm(std::span<const cplx> lambda) {
  double total = 0.0;
  for (const cplx& x : lambda) total += std::norm(x);
  return std::sqrt(total);
}

std::vector<GradedOperator> left_shifts(const TruncatedFock& space) {
  const auto ws = WeightSystem::unweighted(space.alphabet());
  std::vector<GradedOperator> out;
  for (int i = 1; i <= space.alphabet(); ++i) out.push_back(build_shift(space, ws, ShiftKind::LeftUnweighted, i));
  return out;
}

void require_n2(std::size_t size, const char* what) {
  if (size != 2) throw DomainError(std::string(what) + " is implemented for n = 2 only");
}

}  // namespace

GradedOperator geometric_series(const TruncatedFock& space, std::span<const cplx> beta, int max_len) {
  const int n = space.alphabet();
  if (static_cast<int>(beta.size()) != n) throw DomainError("coefficient tuple has the wrong length");
  const int d = space.depth();
  std::vector<cplx> coef(space.dimension());
  coef[0] = 1.0;
  const std::size_t inner = d > 0 ? space.levels_end(d - 1) : 0;
  for (std::size_t idx = 0; idx < inner; ++idx) {
    for (int i = 1; i <= n; ++i) {
      coef[space.basis().prepend_index(i, idx)] = beta[static_cast<std::size_t>(i - 1)] * coef[idx];
    }
  }
  std::vector<Triplet> entries;
  for (std::size_t col = 0; col < space.dimension(); ++col) {
    const Word v = space.word(col);
    const int reach = std::min(max_len, d - space.level_of(col));
    if (reach < 0) continue;
    for (std::size_t w = 0; w < space.levels_end(reach); ++w) {
      entries.push_back({space.index(concat(space.word(w), v)), col, coef[w]});
    }
  }
  return GradedOperator::from_triplets(space, std::move(entries));
}

IdentityDefect identity_defect(const GradedOperator& p) {
  const auto& space = p.space();
  const int d = space.depth();
  const auto diff = p - GradedOperator::identity(space);
  IdentityDefect out;
  for (std::size_t c = 0; c < space.dimension(); ++c) {
    double top = 0.0;
    for (const auto& [row, value] : diff.column(c)) {
      if (space.level_of(row) < d) {
        out.low = std::max(out.low, std::abs(value));
      } else {
        top += std::norm(value);
      }
    }
    out.top = std::max(out.top, std::sqrt(top));
  }
  return out;
}

ResolventReport resolvent_check(std::span<const cplx> lambda, int depth) {
  const double norm = tuple_norm(lambda);
  if (norm >= 1.0) throw PreconditionError("resolvent series needs ||lambda|| < 1");
  if (depth < 1) throw DomainError("resolvent check needs depth >= 1");
  const TruncatedFock space(static_cast<int>(lambda.size()), depth);
  std::vector<cplx> beta;
  for (const cplx& x : lambda) beta.push_back(std::conj(x));
  const auto b = geometric_series(space, beta, depth - 1);
  const auto shifts = left_shifts(space);
  auto m = GradedOperator::identity(space);
  for (std::size_t i = 0; i < shifts.size(); ++i) m = m - shifts[i].scaled(beta[i]);
  ResolventReport out;
  out.lambda.assign(lambda.begin(), lambda.end());
  out.depth = depth;
  out.defect = identity_defect(m * b);
  out.predicted_top = std::pow(norm, depth);
  return out;
}

std::string to_string(SpectrumVerdict v) {
  switch (v) {
    case SpectrumVerdict::InSpectrum: return "in_spectrum";
    case SpectrumVerdict::NotInSpectrum: return "not_in_spectrum";
    case SpectrumVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

RightMembershipReport right_membership(std::span<const cplx> lambda, int depth, double tol) {
  if (lambda.empty()) throw DomainError("lambda is empty");
  if (depth < 1) throw DomainError("right membership needs depth >= 1");
  RightMembershipReport out;
  out.lambda.assign(lambda.begin(), lambda.end());
  out.depth = depth;
  out.norm = tuple_norm(lambda);
  const int n = static_cast<int>(lambda.size());
  if (out.norm <= 1.0 - tol) {
    const auto ws = WeightSystem::unweighted(n);
    out.verdict = SpectrumVerdict::InSpectrum;
    out.eigenvector = eigenvector_coeffs(ws, lambda, depth);
    out.eigen_residual = eigen_residual(ws, *out.eigenvector).max_residual;
  } else if (out.norm >= 1.0 + tol) {
    out.verdict = SpectrumVerdict::NotInSpectrum;
    const TruncatedFock space(n, depth);
    const double sq = out.norm * out.norm;
    std::vector<cplx> inverse;
    for (const cplx& x : lambda) inverse.push_back(std::conj(x) / sq);
    const auto series = geometric_series(space, inverse, depth - 1);
    const auto shifts = left_shifts(space);
    GradedOperator total(space);
    for (int i = 0; i < n; ++i) {
      out.inverse_factors.push_back(series.scaled(inverse[static_cast<std::size_t>(i)]));
      const auto factor = GradedOperator::identity(space).scaled(lambda[static_cast<std::size_t>(i)]) -
                          shifts[static_cast<std::size_t>(i)];
      total = total + factor * out.inverse_factors.back();
    }
    out.inverse_defect = identity_defect(total);
  }
  return out;
}

LeftGrowthTable left_growth_certificate(std::span<const cplx> lambda, int k_max, double m) {
  require_n2(lambda.size(), "left growth certificate");
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("assumed norm must be finite and nonnegative");
  int letter = 0;
  for (int i = 1; i <= 2 && letter == 0; ++i) {
    if (std::abs(lambda[static_cast<std::size_t>(i - 1)]) >= 1.0 - kUnimodularTol) letter = i;
  }
  if (letter == 0) {
    throw PreconditionError("no growth certificate when |lambda_1| < 1 and |lambda_2| < 1");
  }
  const cplx li = lambda[static_cast<std::size_t>(letter - 1)];
  const int other = 3 - letter;
  LeftGrowthTable out;
  out.lambda.assign(lambda.begin(), lambda.end());
  out.assumed = m;
  if (std::abs(std::abs(li) - 1.0) <= kUnimodularTol) {
    out.rule = "unimodular";
    out.component = letter;
    // Coefficients of xi_{i^j}, j < k, in A_i xi_{i^k} - lambda_i^k A_i xi_e.
    std::vector<cplx> tail;
    for (int k = 1; k <= k_max; ++k) {
      for (cplx& c : tail) c *= li;
      tail.push_back(1.0);
      double sq = 0.0;
      for (const cplx& c : tail) sq += std::norm(c);
      out.rows.push_back({k, Word::repeat(letter, static_cast<std::size_t>(k)), std::sqrt(sq) - m});
    }
    return out;
  }
  out.component = other;
  out.rule = m > 0.0 ? "geometric" : "geometric_fallback";
  cplx power = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    power *= li;
    Word w = Word::repeat(letter, static_cast<std::size_t>(k));
    if (m > 0.0) {
      out.rows.push_back({k, w, std::abs(power) * m});
    } else {
      out.rows.push_back({k, w.append(other), std::abs(power)});
    }
  }
  return out;
}

ZeroLeftInverseReport zero_left_inverses(const CoeffMap& eta1, const CoeffMap& eta2, int depth, std::uint64_t seed) {
  if (depth < 1) throw DomainError("zero left inverses need depth >= 1");
  const TruncatedFock space(2, depth);
  if (space.dimension() > kDenseLimit) throw DomainError("dimension exceeds the dense limit");
  const auto shifts = left_shifts(space);
  const std::size_t low = space.levels_end(depth - 1);
  ZeroLeftInverseReport out;
  out.depth = depth;
  const CoeffMap* etas[2] = {&eta1, &eta2};
  for (int i = 0; i < 2; ++i) {
    std::vector<Triplet> entries;
    for (const auto& [w, value] : *etas[i]) {
      require_alphabet(w, 2);
      if (static_cast<int>(w.length()) > depth) throw DomainError("eta has words longer than depth");
      entries.push_back({space.index(w), 0, value});
    }
    const auto a = shifts[static_cast<std::size_t>(i)].adjoint() + GradedOperator::from_triplets(space, entries);
    for (int j = 0; j < 2; ++j) {
      auto p = a * shifts[static_cast<std::size_t>(j)];
      if (i == j) p = p - GradedOperator::identity(space);
      for (std::size_t c = 0; c < low; ++c) {
        for (const auto& [row, value] : p.column(c)) out.relation_defect = std::max(out.relation_defect, std::abs(value));
      }
    }
  }

  // X G = H with G = [L_1, L_2] restricted to columns below the top level.
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  const auto e = static_cast<Eigen::Index>(low);
  Eigen::MatrixXd g(dim, 2 * e);
  g.leftCols(e) = shifts[0].to_dense().real().leftCols(e);
  g.rightCols(e) = shifts[1].to_dense().real().leftCols(e);
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(g.transpose());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 2; ++i) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, 2 * e);
    h.block(0, i * e, dim, e) = Eigen::MatrixXd::Identity(dim, e);
    Eigen::MatrixXcd x = cod.solve(h.transpose()).transpose().cast<cplx>();
    for (Eigen::Index r = 0; r < dim; ++r) x(r, 0) += cplx(normal(rng), normal(rng));
    out.solve_residual = std::max(out.solve_residual, (x * g.cast<cplx>() - h.cast<cplx>()).cwiseAbs().maxCoeff());
    Eigen::MatrixXcd form = shifts[static_cast<std::size_t>(i)].to_dense().adjoint();
    form.col(0) += x.col(0);
    out.reconstruction_residual = std::max(out.reconstruction_residual, (x - form).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace fockshift

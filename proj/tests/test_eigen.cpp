#include <gtest/gtest.h>

#include <random>

#include "fockshift/eigen.hpp"
#include "support.hpp"

using namespace fockshift;

namespace {

const auto kPeriodic = oracle::periodic_table(1, 1, 2, 2, 2, 2);

/// sigma_k by enumerating all words of length k.
std::vector<double> brute_sigma(const oracle::LambdaFn& lambda, const std::vector<double>& r, int n, int depth) {
  std::vector<double> sigma(static_cast<std::size_t>(depth) + 1, 0.0);
  for (const auto& w : oracle::words(n, depth)) {
    double rw = 1.0;
    for (std::size_t p = 0; p < w.length(); ++p) rw *= r[static_cast<std::size_t>(w[p] - 1)];
    const double weight = oracle::path_weight(lambda, Word{}, w);
    sigma[w.length()] += rw * rw / (weight * weight);
  }
  return sigma;
}

}  // namespace

TEST(Eigen, EigenvectorCoefficientsFollowTheFormula) {
  const auto ws = WeightSystem::periodic(2, 2, kPeriodic);
  const auto lambda = oracle::periodic(2, kPeriodic);
  const std::vector<cplx> l{cplx(0.4, 0.3), cplx(-0.2, 0.5)};
  const auto c = eigenvector_coeffs(ws, l, 5);
  const auto words = oracle::words(2, 5);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const cplx expected = std::conj(eval_word(words[i], l)) / oracle::path_weight(lambda, Word{}, words[i]);
    EXPECT_NEAR(std::abs(c.coeffs[i] - expected), 0.0, 1e-15);
  }
}

TEST(Eigen, ResidualAgainstDenseAdjointShifts) {
  const auto ws = WeightSystem::two_letter_m(0.81, 0.9);
  const auto lambda = oracle::two_letter_m(0.81, 0.9);
  const std::vector<cplx> l{cplx(0.3, 0.1), cplx(0.2, -0.4)};
  const int depth = 6;
  const auto c = eigenvector_coeffs(ws, l, depth);
  const Eigen::Map<const Eigen::VectorXcd> nu(c.coeffs.data(), static_cast<Eigen::Index>(c.coeffs.size()));
  const BasisEnumeration basis(2, depth);
  for (int i = 1; i <= 2; ++i) {
    const Eigen::VectorXcd r = oracle::left_shift(lambda, 2, depth, i).adjoint() * nu - std::conj(l[i - 1]) * nu;
    EXPECT_LE(r.head(static_cast<Eigen::Index>(basis.levels_end(depth - 1))).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LE(eigen_residual(ws, c).max_residual, 1e-12);
}

TEST(Eigen, WrongEigenvalueLeavesResidual) {
  const auto ws = WeightSystem::unweighted(2);
  auto c = eigenvector_coeffs(ws, std::vector<cplx>{0.5, 0.2}, 5);
  c.lambda = {0.5, 0.3};
  const auto r = eigen_residual(ws, c);
  EXPECT_GT(r.max_residual, 1e-3);
  EXPECT_EQ(r.letter, 2);
}

TEST(Eigen, EigenspaceIsOneDimensional) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
  const auto ws = WeightSystem::periodic(2, 2, kPeriodic);
  for (int t = 0; t < 5; ++t) {
    const std::vector<cplx> l{std::polar(0.3, phase(rng)), std::polar(0.4, phase(rng))};
    EXPECT_EQ(eigenspace_dimension(ws, l, 6), 1u);
  }
}

TEST(Eigen, LevelSumsMatchEnumeration) {
  const std::vector<double> r{0.6, 0.9};
  for (const auto& [ws, lambda] : {std::pair{WeightSystem::periodic(2, 2, kPeriodic), oracle::periodic(2, kPeriodic)},
                                   std::pair{WeightSystem::two_letter_m(0.81, 0.9), oracle::two_letter_m(0.81, 0.9)}}) {
    const auto sums = level_sums(ws, r, 8);
    const auto expected = brute_sigma(lambda, r, 2, 8);
    ASSERT_EQ(sums.sigma.size(), expected.size());
    double partial = 0.0;
    for (std::size_t k = 0; k < expected.size(); ++k) {
      EXPECT_NEAR(sums.sigma[k], expected[k], 1e-13 * expected[k]);
      EXPECT_NEAR(sums.log_sigma[k], std::log(expected[k]), 1e-12);
      partial += expected[k];
    }
    EXPECT_NEAR(sums.partial_sum, partial, 1e-13 * partial);
  }
}

TEST(Eigen, LevelSumsUnweightedGeometric) {
  const std::vector<double> r{std::sqrt(0.2), std::sqrt(0.3)};
  const auto sums = level_sums(WeightSystem::unweighted(2), r, 10);
  for (std::size_t k = 0; k < sums.sigma.size(); ++k) EXPECT_NEAR(sums.sigma[k], std::pow(0.5, k), 1e-13);
  EXPECT_NEAR(sums.partial_sum, 1.9990234375, 1e-12);
}

TEST(Eigen, LevelSumsSurviveOverflow) {
  const auto sums = level_sums(WeightSystem::unweighted(1), std::vector<double>{1e30}, 12);
  EXPECT_NEAR(sums.log_sigma[12], 12 * 2 * std::log(1e30), 1e-9);
  EXPECT_EQ(membership_verdict(sums).verdict, Membership::Outside);
}

TEST(Eigen, LevelSumsRejectBadInput) {
  const auto ws = WeightSystem::unweighted(2);
  EXPECT_THROW(level_sums(ws, std::vector<double>{-0.1, 0.2}, 4), DomainError);
  EXPECT_THROW(level_sums(ws, std::vector<double>{0.1}, 4), DomainError);
  EXPECT_THROW(level_sums(ws, std::vector<double>{0.1, 0.1}, 21), DomainError);
}

TEST(Eigen, MembershipVerdicts) {
  const auto ws = WeightSystem::unweighted(2);
  EXPECT_EQ(membership_verdict(level_sums(ws, std::vector<double>{0.5, 0.5}, 10)).verdict, Membership::Inside);
  EXPECT_EQ(membership_verdict(level_sums(ws, std::vector<double>{0.8, 0.8}, 10)).verdict, Membership::Outside);
  EXPECT_EQ(membership_verdict(level_sums(ws, std::vector<double>{0.6, 0.8}, 10)).verdict, Membership::Inconclusive);
  EXPECT_EQ(membership_verdict(level_sums(ws, std::vector<double>{0.0, 0.0}, 10)).verdict, Membership::Inside);
  const auto v = membership_verdict(level_sums(ws, std::vector<double>{0.5, 0.5}, 10));
  EXPECT_EQ(v.window, 3);
  EXPECT_NEAR(v.tail_ratio, 0.5, 1e-15);
  EXPECT_THROW(membership_verdict(level_sums(ws, std::vector<double>{0.5, 0.5}, 2)), DomainError);
  EXPECT_EQ(to_string(Membership::Inconclusive), "inconclusive");
}

TEST(Eigen, EllipseAndHereditary) {
  const auto ws = WeightSystem::scaled({2.0, 3.0});
  const auto e = ellipse_predicate(ws, std::vector<double>{1.0, 1.5}, 4);
  EXPECT_EQ(e.c, (std::vector<double>{2.0, 3.0}));
  EXPECT_DOUBLE_EQ(e.value, 0.5);
  EXPECT_TRUE(e.inside);
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const std::vector<double> r{u(rng), u(rng)};
    const std::vector<double> rp{r[0] * frac(rng), r[1] * frac(rng)};
    EXPECT_TRUE(hereditary_check(ws, r, rp, 8).holds);
  }
  EXPECT_THROW(hereditary_check(ws, std::vector<double>{1.0, 1.0}, std::vector<double>{1.5, 0.5}, 4), DomainError);
}

TEST(Eigen, GridParsingAndValues) {
  const auto g = GridSpec::parse("0:1:0.25");
  EXPECT_EQ(g.values(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(GridSpec::parse("0:1:0.1").values().size(), 11u);
  EXPECT_THROW(GridSpec::parse("0:1"), DomainError);
  EXPECT_THROW(GridSpec::parse("1:0:0.1"), DomainError);
  EXPECT_THROW(GridSpec::parse("0:1:0"), DomainError);
  EXPECT_THROW(GridSpec::parse("-1:1:0.5"), DomainError);
  EXPECT_THROW(GridSpec::parse("0:1:0.1x"), DomainError);
}

TEST(Eigen, RegionCsvLayout) {
  const auto rows = region_sample(WeightSystem::unweighted(2), GridSpec::parse("0:1:0.5"), 8);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[1].r, (std::vector<double>{0.0, 0.5}));
  EXPECT_EQ(rows[3].r, (std::vector<double>{0.5, 0.0}));
  const auto csv = region_csv(2, rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r1,r2,levels,partial_sum,tail_ratio,verdict");
  EXPECT_NE(csv.find("0.5,0.5,9,"), std::string::npos);
  EXPECT_NE(csv.find(",inside\n"), std::string::npos);
  EXPECT_NE(csv.find(",outside\n"), std::string::npos);
}

TEST(Eigen, RegionIndependentOfThreadCount) {
  const auto ws = WeightSystem::periodic(2, 2, kPeriodic);
  setenv("FOCKSHIFT_THREADS", "1", 1);
  const auto one = region_csv(2, region_sample(ws, GridSpec::parse("0:1.5:0.1"), 8));
  setenv("FOCKSHIFT_THREADS", "4", 1);
  const auto four = region_csv(2, region_sample(ws, GridSpec::parse("0:1.5:0.1"), 8));
  unsetenv("FOCKSHIFT_THREADS");
  EXPECT_EQ(one, four);
}

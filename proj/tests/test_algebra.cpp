#include <gtest/gtest.h>

#include <random>

#include "fockshift/algebra.hpp"
#include "support.hpp"

using namespace fockshift;

namespace {

const auto kPeriodic = oracle::periodic_table(1, 1, 2, 2, 2, 2);

FourierElement random_element(std::mt19937_64& rng, int n, int min_len, int max_len) {
  FourierElement a;
  a.n = n;
  for (const auto& w : oracle::words(n, max_len)) {
    if (static_cast<int>(w.length()) >= min_len) a.coeffs[w] = oracle::random_complex(rng);
  }
  return a;
}

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Algebra, FourierActionEqualsPolynomialInShifts) {
  std::mt19937_64 rng(1);
  for (const auto& ws : {WeightSystem::periodic(2, 2, kPeriodic), WeightSystem::two_letter_m(0.81, 0.9),
                         WeightSystem::scaled({2.0, 3.0})}) {
    const TruncatedFock space(2, 6);
    const auto a = random_element(rng, 2, 0, 3);
    const auto via_action = fourier_operator(space, MuSystem::commutant(ws), a).to_dense();
    const auto via_shifts = polynomial_operator(space, ws, a).to_dense();
    EXPECT_LE(max_diff(via_action, via_shifts), 1e-12 * via_shifts.cwiseAbs().maxCoeff()) << ws.family_name();
  }
}

TEST(Algebra, ApplyFourierChecksDepth) {
  const auto mu = MuSystem::commutant(WeightSystem::unweighted(2));
  FourierElement a{2, {{Word{1, 2}, 1.0}}};
  EXPECT_NO_THROW(apply_fourier(mu, a, Word{1}, 3));
  EXPECT_THROW(apply_fourier(mu, a, Word{1, 1}, 3), DomainError);
  const auto out = apply_fourier(mu, a, Word{2}, 3);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.begin()->first, (Word{1, 2, 2}));
}

TEST(Algebra, CesaroSumMatchesDirectFejerWeights) {
  std::mt19937_64 rng(2);
  const TruncatedFock space(2, 4);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(space.dimension()), static_cast<Eigen::Index>(space.dimension()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = oracle::random_complex(rng);
  }
  const auto x = GradedOperator::from_dense(space, m);
  for (int k : {1, 2, 3, 5}) {
    Eigen::MatrixXcd expected = m;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const int j = std::abs(static_cast<int>(space.word(static_cast<std::size_t>(c)).length()) -
                               static_cast<int>(space.word(static_cast<std::size_t>(r)).length()));
        expected(r, c) *= j < k ? 1.0 - static_cast<double>(j) / k : 0.0;
      }
    }
    EXPECT_LE(max_diff(cesaro_sum(x, k).to_dense(), expected), 1e-15);
  }
  EXPECT_THROW(cesaro_sum(x, 0), DomainError);
  EXPECT_THROW(phi_band(x, 5), DomainError);
  EXPECT_NO_THROW(phi_band(x, -4));
}

TEST(Algebra, CesaroRecoversFejerPolynomials) {
  std::mt19937_64 rng(3);
  const auto ws = WeightSystem::periodic(2, 2, kPeriodic);
  const TruncatedFock space(2, 8);
  const auto a = random_element(rng, 2, 0, 3);
  const auto x = polynomial_operator(space, ws, a);
  for (int k : {2, 4, 8}) {
    const auto diff = cesaro_sum(x, k) - pk_polynomial(space, ws, a, k);
    for (std::size_t c = 0; c < space.levels_end(8 - k); ++c) {
      for (const auto& [row, value] : diff.column(c)) EXPECT_LE(std::abs(value), 1e-12);
    }
  }
  EXPECT_THROW(pk_polynomial(space, WeightSystem::two_letter_m(4.0, 1.0), a, 2), PreconditionError);
}

TEST(Algebra, ExtractRoundTripsCoefficients) {
  std::mt19937_64 rng(4);
  const auto ws = WeightSystem::periodic(2, 2, kPeriodic);
  const auto mu = MuSystem::commutant(ws);
  const TruncatedFock space(2, 7);
  const auto a = random_element(rng, 2, 0, 3);
  const auto r = commutant_extract(polynomial_operator(space, ws, a), mu);
  EXPECT_LE(r.precheck.max_defect, 1e-12);
  for (const auto& [w, value] : a.coeffs) EXPECT_LE(std::abs(r.element.at(w) - value), 1e-12);
  EXPECT_LE(r.residual, 1e-12);
}

TEST(Algebra, ExtractRejectsNonCommutingOperator) {
  const auto ws = WeightSystem::periodic(2, 2, kPeriodic);
  const TruncatedFock space(2, 5);
  const auto x = build_shift(space, ws, ShiftKind::LeftWeighted, 1).adjoint();
  try {
    commutant_extract(x, MuSystem::commutant(ws));
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("xi_"), std::string::npos);
  }
}

TEST(Algebra, InjectivityPairing) {
  std::mt19937_64 rng(5);
  const auto ws = WeightSystem::two_letter_m(0.81, 0.9);
  const auto mu = MuSystem::commutant(ws);
  FourierElement a{2, {{Word{2}, 1.5}, {Word{1, 2}, -0.5}, {Word{2, 2}, cplx(0, 1)}}};
  CoeffMap xi{{Word{1, 1}, cplx(0.3, 0.2)}, {Word{2, 1, 2}, 1.0}};
  const auto r = injectivity_pairing(mu, a, xi, Word{2}, Word{1, 1});
  EXPECT_NEAR(std::abs(r.via_action - r.closed_form), 0.0, 1e-14);
  EXPECT_GT(std::abs(r.via_action), 0.0);
  EXPECT_THROW(injectivity_pairing(mu, a, xi, Word{1, 2}, Word{1, 1}), DomainError);
  EXPECT_THROW(injectivity_pairing(mu, a, xi, Word{2}, Word{2, 1, 2}), DomainError);
}

TEST(Algebra, SpectralRadiusCoefficientMatchesMatrixPowers) {
  std::mt19937_64 rng(6);
  const auto mu = MuSystem::right_table(2, 1, {{{1, Word{1}}, 1.7}, {{2, Word{1}}, 0.6}, {{1, Word{2}}, 0.8}});
  const auto ws = lambda_from_mu(mu, 8);
  const TruncatedFock space(2, 8);
  for (int trial = 0; trial < 4; ++trial) {
    const int min_len = 1 + trial % 2;
    const auto a = random_element(rng, 2, min_len, 2);
    const Word v = *a.minimal_word();
    const int k_max = static_cast<int>(8 / v.length()) >= 4 ? 4 : static_cast<int>(8 / v.length());
    const auto rows = spectral_radius_lower(mu, a, v, k_max, 8);
    const auto dense = polynomial_operator(space, ws, a).to_dense();
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dimension()));
    x(0) = 1.0;
    for (const auto& row : rows) {
      x = dense * x;
      const cplx expected = x(static_cast<Eigen::Index>(space.index(v.power(static_cast<std::size_t>(row.k)))));
      EXPECT_LE(std::abs(row.coefficient - expected), 1e-10 * std::max(1.0, std::abs(expected)));
      EXPECT_LE(std::abs(row.leading_term - expected), 1e-10 * std::max(1.0, std::abs(expected)));
      EXPECT_TRUE(row.lengths_ok);
      EXPECT_NEAR(row.bound, std::pow(std::abs(expected), 1.0 / row.k), 1e-10);
    }
  }
}

TEST(Algebra, RightCommutationOfPolynomials) {
  std::mt19937_64 rng(7);
  const auto ws = WeightSystem::scaled({2.0, 3.0});
  const TruncatedFock space(2, 6);
  const auto r = right_commutation_defect(polynomial_operator(space, ws, random_element(rng, 2, 0, 2)),
                                          MuSystem::commutant(ws));
  EXPECT_LE(r.max_defect, 1e-12);
}

TEST(Algebra, MinimalWordAndLength) {
  FourierElement a{2, {{Word{2, 1}, 1.0}, {Word{1, 2}, 2.0}, {Word{1}, 0.0}, {Word{1, 1, 1}, 1.0}}};
  EXPECT_EQ(*a.minimal_word(), (Word{1, 2}));
  EXPECT_EQ(a.max_length(), 3u);
  EXPECT_FALSE(FourierElement{}.minimal_word());
  FourierElement bad{2, {{Word{3}, 1.0}}};
  EXPECT_THROW(bad.validate(), DomainError);
}

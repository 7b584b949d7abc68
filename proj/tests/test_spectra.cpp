#include <gtest/gtest.h>

#include <random>

#include "fockshift/spectra.hpp"
#include "support.hpp"

using namespace fockshift;

namespace {

std::vector<cplx> random_tuple(std::mt19937_64& rng, double norm) {
  std::vector<cplx> l{oracle::random_complex(rng), oracle::random_complex(rng)};
  const double s = std::sqrt(std::norm(l[0]) + std::norm(l[1]));
  for (auto& x : l) x *= norm / s;
  return l;
}

Eigen::MatrixXcd dense_l(int depth, int i) { return oracle::left_shift(oracle::constant(1.0), 2, depth, i); }

}  // namespace

TEST(Spectra, ResolventAgreesWithDenseInverse) {
  std::mt19937_64 rng(1);
  const int depth = 6;
  const auto l = random_tuple(rng, 0.7);
  const TruncatedFock space(2, depth);
  const Eigen::Index dim = static_cast<Eigen::Index>(space.dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  for (int i = 1; i <= 2; ++i) m -= std::conj(l[static_cast<std::size_t>(i - 1)]) * dense_l(depth, i);
  const Eigen::MatrixXcd inv = m.inverse();
  std::vector<cplx> beta{std::conj(l[0]), std::conj(l[1])};
  const auto b = geometric_series(space, beta, depth).to_dense();
  EXPECT_LE((b - inv).cwiseAbs().maxCoeff(), 1e-12);
  const auto r = resolvent_check(l, depth);
  EXPECT_LE(r.defect.low, 1e-12);
  EXPECT_NEAR(r.defect.top, std::pow(0.7, depth), 1e-12);
}

TEST(Spectra, ResolventSpecExamples) {
  const auto zero = resolvent_check(std::vector<cplx>{0.0, 0.0}, 5);
  EXPECT_EQ(zero.defect.low, 0.0);
  EXPECT_EQ(zero.defect.top, 0.0);
  const auto half = resolvent_check(std::vector<cplx>{0.5, 0.0}, 8);
  EXPECT_EQ(half.defect.low, 0.0);
  EXPECT_NEAR(half.defect.top, std::pow(0.5, 8), 1e-15);
  EXPECT_THROW(resolvent_check(std::vector<cplx>{0.8, 0.6}, 5), PreconditionError);
}

TEST(Spectra, ResolventTopDefectDecaysGeometrically) {
  const std::vector<cplx> l{cplx(0.3, 0.4), cplx(0.2, -0.1)};
  const double norm = std::sqrt(0.25 + 0.05);
  for (int depth = 4; depth <= 9; ++depth) {
    const auto r = resolvent_check(l, depth);
    EXPECT_NEAR(r.defect.top / std::pow(norm, depth), 1.0, 1e-10);
  }
}

TEST(Spectra, RightMembershipInsideBall) {
  std::mt19937_64 rng(2);
  const auto zero = right_membership(std::vector<cplx>{0.0, 0.0}, 6);
  EXPECT_EQ(zero.verdict, SpectrumVerdict::InSpectrum);
  EXPECT_EQ(zero.eigenvector->coeffs[0], cplx(1.0));
  for (std::size_t k = 1; k < zero.eigenvector->coeffs.size(); ++k) EXPECT_EQ(zero.eigenvector->coeffs[k], cplx(0.0));
  const auto r = right_membership(std::vector<cplx>{0.6, 0.3}, 8);
  EXPECT_EQ(r.verdict, SpectrumVerdict::InSpectrum);
  EXPECT_LE(*r.eigen_residual, 1e-12);
}

TEST(Spectra, RightInverseOutsideBall) {
  const int depth = 6;
  const std::vector<cplx> l{cplx(1.2, -0.5), cplx(0.4, 0.9)};
  const auto r = right_membership(l, depth);
  ASSERT_EQ(r.verdict, SpectrumVerdict::NotInSpectrum);
  ASSERT_EQ(r.inverse_factors.size(), 2u);
  const TruncatedFock space(2, depth);
  const Eigen::Index dim = static_cast<Eigen::Index>(space.dimension());
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 1; i <= 2; ++i) {
    total += (l[static_cast<std::size_t>(i - 1)] * Eigen::MatrixXcd::Identity(dim, dim) - dense_l(depth, i)) *
             r.inverse_factors[static_cast<std::size_t>(i - 1)].to_dense();
  }
  const Eigen::Index low = static_cast<Eigen::Index>(space.levels_end(depth - 1));
  const Eigen::MatrixXcd diff = total - Eigen::MatrixXcd::Identity(dim, dim);
  EXPECT_LE(diff.topRows(low).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(r.inverse_defect->low, 1e-12);
  const double norm = std::sqrt(std::norm(l[0]) + std::norm(l[1]));
  EXPECT_NEAR(r.inverse_defect->top, std::pow(1.0 / norm, depth), 1e-12);
}

TEST(Spectra, RightMembershipSpecExampleAndBoundary) {
  const auto r = right_membership(std::vector<cplx>{2.0, 0.0}, 8);
  EXPECT_EQ(r.verdict, SpectrumVerdict::NotInSpectrum);
  EXPECT_EQ(r.inverse_defect->low, 0.0);
  EXPECT_EQ(right_membership(std::vector<cplx>{0.6, 0.8}, 6).verdict, SpectrumVerdict::Inconclusive);
  EXPECT_EQ(to_string(SpectrumVerdict::NotInSpectrum), "not_in_spectrum");
}

TEST(Spectra, RightMembershipPartitionByNorm) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 40; ++t) {
    const double norm = u(rng);
    const auto r = right_membership(random_tuple(rng, norm), 5);
    if (norm <= 1.0 - 1e-9) {
      EXPECT_EQ(r.verdict, SpectrumVerdict::InSpectrum);
    } else if (norm >= 1.0 + 1e-9) {
      EXPECT_EQ(r.verdict, SpectrumVerdict::NotInSpectrum);
    }
  }
}

TEST(Spectra, LeftGrowthUnimodular) {
  const auto t = left_growth_certificate(std::vector<cplx>{std::polar(1.0, 0.7), 0.2}, 100, 0.0);
  EXPECT_EQ(t.rule, "unimodular");
  EXPECT_EQ(t.component, 1);
  EXPECT_NEAR(t.rows.back().bound, 10.0, 1e-12);
  for (const auto& row : t.rows) EXPECT_NEAR(row.bound, std::sqrt(row.k), 1e-12);
  const auto m5 = left_growth_certificate(std::vector<cplx>{cplx(0, 1), 0.2}, 30, 5.0);
  for (const auto& row : m5.rows) EXPECT_EQ(row.bound > 0.0, row.k >= 26) << row.k;
}

TEST(Spectra, LeftGrowthGeometric) {
  const auto t = left_growth_certificate(std::vector<cplx>{cplx(0, 2), 0.5}, 10, 1.0);
  EXPECT_EQ(t.rule, "geometric");
  EXPECT_EQ(t.component, 2);
  EXPECT_EQ(t.rows.back().bound, 1024.0);
  EXPECT_EQ(t.rows.back().word, Word::repeat(1, 10));
  const auto f = left_growth_certificate(std::vector<cplx>{2.0, 0.5}, 5, 0.0);
  EXPECT_EQ(f.rule, "geometric_fallback");
  EXPECT_EQ(f.rows.back().word, (Word{1, 1, 1, 1, 1, 2}));
  EXPECT_EQ(f.rows.back().bound, 32.0);
  const auto second = left_growth_certificate(std::vector<cplx>{0.5, -3.0}, 3, 2.0);
  EXPECT_EQ(second.component, 1);
  EXPECT_EQ(second.rows.back().bound, 54.0);
}

TEST(Spectra, LeftGrowthMonotoneAndErrors) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(1.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    const std::vector<cplx> l{std::polar(u(rng), 1.0 * t), cplx(0.1, 0.2)};
    const auto table = left_growth_certificate(l, 40, 0.5 * (t % 3));
    for (std::size_t k = 1; k < table.rows.size(); ++k) EXPECT_GE(table.rows[k].bound, table.rows[k - 1].bound);
    EXPECT_GT(table.rows.back().bound, table.rows.front().bound);
  }
  EXPECT_THROW(left_growth_certificate(std::vector<cplx>{0.5, 0.5}, 10, 0.0), PreconditionError);
  EXPECT_THROW(left_growth_certificate(std::vector<cplx>{1.0, 0.5, 0.1}, 10, 0.0), DomainError);
}

TEST(Spectra, ZeroLeftInverses) {
  const auto none = zero_left_inverses({}, {}, 5);
  EXPECT_EQ(none.relation_defect, 0.0);
  const auto eta = zero_left_inverses({{Word{2, 1}, 1.0}}, {{Word{1}, cplx(0.3, -0.2)}, {Word{}, 2.0}}, 6);
  EXPECT_EQ(eta.relation_defect, 0.0);
  EXPECT_LE(eta.reconstruction_residual, 1e-9);
  EXPECT_LE(eta.solve_residual, 1e-9);
  EXPECT_THROW(zero_left_inverses({{Word{1, 1, 1, 1}, 1.0}}, {}, 3), DomainError);
}

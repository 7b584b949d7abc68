#include <gtest/gtest.h>

#include <random>
#include <unordered_set>

#include "fockshift/words.hpp"
#include "support.hpp"

using namespace fockshift;

TEST(Words, StrParseRoundTrip) {
  EXPECT_EQ(Word{}.str(2), "e");
  EXPECT_EQ((Word{2, 1}).str(2), "21");
  EXPECT_EQ(Word::parse("e", 3), Word{});
  EXPECT_EQ(Word::parse("312", 3), (Word{3, 1, 2}));
  EXPECT_EQ((Word{10, 2}).str(12), "10.2");
  EXPECT_EQ(Word::parse("10.2", 12), (Word{10, 2}));
  for (const auto& w : oracle::words(3, 4)) EXPECT_EQ(Word::parse(w.str(3), 3), w);
}

TEST(Words, ParseRejectsBadInput) {
  EXPECT_THROW(Word::parse("", 2), DomainError);
  EXPECT_THROW(Word::parse("13", 2), DomainError);
  EXPECT_THROW(Word::parse("1a", 2), DomainError);
  EXPECT_THROW(Word::parse("0", 2), DomainError);
  EXPECT_THROW(Word::parse("1..2", 12), DomainError);
  EXPECT_THROW(Word{0}, DomainError);
}

TEST(Words, ConcatPrependAppendPower) {
  const Word u{1, 2};
  const Word w{2};
  EXPECT_EQ(concat(u, w), (Word{1, 2, 2}));
  EXPECT_EQ(w.prepend(1), (Word{1, 2}));
  EXPECT_EQ(w.append(1), (Word{2, 1}));
  EXPECT_EQ(u.power(3), (Word{1, 2, 1, 2, 1, 2}));
  EXPECT_EQ(u.power(0), Word{});
  EXPECT_EQ(Word::repeat(2, 3), (Word{2, 2, 2}));
  EXPECT_EQ((Word{1, 2, 3}).prefix(2), (Word{1, 2}));
  EXPECT_EQ((Word{1, 2, 3}).suffix(2), (Word{2, 3}));
  EXPECT_THROW(concat(u, Word{3}, 2), DomainError);
}

TEST(Words, GradedLexOrder) {
  EXPECT_LT(Word{}, Word{1});
  EXPECT_LT((Word{2}), (Word{1, 1}));
  EXPECT_LT((Word{1, 2}), (Word{2, 1}));
}

TEST(Words, EvalWordIsProductOfLetters) {
  const std::vector<cplx> lambda{cplx(0.5, 0.1), cplx(-0.3, 0.7)};
  EXPECT_EQ(eval_word(Word{}, lambda), cplx(1.0));
  const cplx expected = lambda[1] * lambda[0] * lambda[0];
  EXPECT_NEAR(std::abs(eval_word(Word{2, 1, 1}, lambda) - expected), 0.0, 1e-15);
}

class BasisTest : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(BasisTest, MatchesBruteForceEnumeration) {
  const auto [n, depth] = GetParam();
  const auto basis = enumerate_basis(n, depth);
  const auto words = oracle::words(n, depth);
  ASSERT_EQ(basis.dimension(), words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    EXPECT_EQ(basis.word(i), words[i]);
    EXPECT_EQ(basis.index(words[i]), i);
    EXPECT_EQ(basis.level_of(i), static_cast<int>(words[i].length()));
  }
  for (int k = 0; k <= depth; ++k) {
    EXPECT_EQ(basis.level_size(k), static_cast<std::size_t>(std::pow(n, k)));
    EXPECT_EQ(basis.word(basis.level_offset(k)).length(), static_cast<std::size_t>(k));
  }
}

TEST_P(BasisTest, PrependAndAppendIndices) {
  const auto [n, depth] = GetParam();
  const auto basis = enumerate_basis(n, depth);
  const auto idx = oracle::index_map(oracle::words(n, depth));
  for (std::size_t i = 0; i < basis.levels_end(depth - 1); ++i) {
    const Word w = basis.word(i);
    for (int a = 1; a <= n; ++a) {
      EXPECT_EQ(basis.prepend_index(a, i), idx.at(oracle::cat(oracle::single(a), w)));
      EXPECT_EQ(basis.append_index(i, a), idx.at(oracle::cat(w, oracle::single(a))));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, BasisTest,
                         ::testing::Values(std::pair{1, 5}, std::pair{2, 6}, std::pair{3, 4}, std::pair{4, 3}));

TEST(Words, BasisRejectsBadShapes) {
  EXPECT_THROW(enumerate_basis(0, 3), DomainError);
  EXPECT_THROW(enumerate_basis(2, -1), DomainError);
  const auto basis = enumerate_basis(2, 3);
  EXPECT_THROW(basis.index(Word{1, 1, 1, 1}), DomainError);
  EXPECT_THROW(basis.index(Word{3}), DomainError);
}

TEST(Words, HashIsConsistentWithEquality) {
  std::unordered_set<Word> set;
  for (const auto& w : oracle::words(2, 5)) set.insert(w);
  EXPECT_EQ(set.size(), oracle::words(2, 5).size());
  EXPECT_TRUE(set.count(Word{1, 2, 1}));
}

#pragma once

// Words of the free semigroup on letters {1..n} and the graded enumeration of
// the truncated Fock basis.
//
// A word is stored in its written order: the word i_k ... i_1 is the letter
// sequence (i_k, ..., i_1), so the first stored letter is the one applied
// last. Prepending a letter i gives the word i w, appending gives w i, and
// concatenation of words is concatenation of their letter sequences.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fockshift/common.hpp"

namespace fockshift {

using Letter = std::uint8_t;

inline constexpr int kMaxAlphabet = 255;

class Word {
 public:
  Word() = default;
  /// Throws DomainError on a zero letter.
  explicit Word(std::vector<Letter> letters);
  Word(std::initializer_list<int> letters);

  static Word unit() { return {}; }
  static Word letter(int i);
  /// i^k
  static Word repeat(int i, std::size_t k);

  std::size_t length() const { return letters_.size(); }
  bool is_unit() const { return letters_.empty(); }
  std::span<const Letter> letters() const { return letters_; }
  Letter operator[](std::size_t pos) const { return letters_[pos]; }
  /// The largest letter, 0 for the unit word.
  int max_letter() const;

  /// i w
  Word prepend(int i) const;
  /// w i
  Word append(int i) const;
  /// w w ... w (k copies); w^0 = e
  Word power(std::size_t k) const;
  /// First `count` letters in written order.
  Word prefix(std::size_t count) const;
  /// Last `count` letters in written order.
  Word suffix(std::size_t count) const;

  /// Canonical string: "e" for the unit word, digits when n <= 9, otherwise
  /// dot-separated decimal letters.
  std::string str(int n) const;
  /// Inverse of str(); throws DomainError on malformed input or letters > n.
  static Word parse(std::string_view text, int n);

  bool operator==(const Word&) const = default;
  /// Graded-lexicographic: shorter words first, then lexicographic by letter.
  std::strong_ordering operator<=>(const Word& other) const;

 private:
  std::vector<Letter> letters_;
};

/// The word u w.
Word concat(const Word& u, const Word& w);
/// As concat(u, w), also checking every letter lies in [1, n].
Word concat(const Word& u, const Word& w, int n);

/// Throws DomainError when some letter exceeds n or n is outside [1, 255].
void require_alphabet(const Word& w, int n);

/// w(lambda) = product of lambda_{i} over the letters of w; e(lambda) = 1.
cplx eval_word(const Word& w, std::span<const cplx> lambda);

/// Graded-lexicographic enumeration of all words of length <= depth.
/// Level k occupies indices [level_offset(k), level_offset(k) + n^k), and the
/// index of i w inside level k+1 is (i-1) n^k + (index of w inside level k),
/// so each left creation operator maps a level block onto a contiguous block.
class BasisEnumeration {
 public:
  BasisEnumeration(int n, int depth);

  int alphabet() const { return n_; }
  int depth() const { return depth_; }
  std::size_t dimension() const { return offsets_.back(); }
  std::size_t level_offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }
  std::size_t level_size(int k) const { return powers_[static_cast<std::size_t>(k)]; }
  /// Indices [0, levels_end(k)) hold the words of length <= k.
  std::size_t levels_end(int k) const { return offsets_[static_cast<std::size_t>(k) + 1]; }

  /// Throws DomainError when the word is longer than depth or uses letters > n.
  std::size_t index(const Word& w) const;
  Word word(std::size_t index) const;
  int level_of(std::size_t index) const;

  /// index(i w) for a word of level < depth.
  std::size_t prepend_index(int i, std::size_t index) const;
  /// index(w i) for a word of level < depth.
  std::size_t append_index(std::size_t index, int i) const;

 private:
  int n_;
  int depth_;
  std::vector<std::size_t> powers_;   // n^k
  std::vector<std::size_t> offsets_;  // sum_{j<k} n^j, one past the last level
};

/// Throws DomainError when n = 0 (or n > 255) or depth < 0.
BasisEnumeration enumerate_basis(int n, int depth);

}  // namespace fockshift

template <>
struct std::hash<fockshift::Word> {
  std::size_t operator()(const fockshift::Word& w) const noexcept;
};

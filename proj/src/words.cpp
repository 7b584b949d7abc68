#include "fockshift/words.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace fockshift {

namespace {

constexpr std::size_t kMaxDimension = std::size_t{1} << 26;

void check_alphabet_size(int n) {
  if (n < 1 || n > kMaxAlphabet) {
    throw DomainError("alphabet size must lie in [1, 255], got " + std::to_string(n));
  }
}

}  // namespace

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  if (std::find(letters_.begin(), letters_.end(), Letter{0}) != letters_.end()) {
    throw DomainError("word letters start at 1");
  }
}

Word::Word(std::initializer_list<int> letters) {
  letters_.reserve(letters.size());
  for (int a : letters) {
    if (a < 1 || a > kMaxAlphabet) throw DomainError("letter out of range: " + std::to_string(a));
    letters_.push_back(static_cast<Letter>(a));
  }
}

Word Word::letter(int i) { return Word{i}; }

Word Word::repeat(int i, std::size_t k) {
  if (i < 1 || i > kMaxAlphabet) throw DomainError("letter out of range: " + std::to_string(i));
  return Word(std::vector<Letter>(k, static_cast<Letter>(i)));
}

int Word::max_letter() const {
  return letters_.empty() ? 0 : *std::max_element(letters_.begin(), letters_.end());
}

Word Word::prepend(int i) const {
  if (i < 1 || i > kMaxAlphabet) throw DomainError("letter out of range: " + std::to_string(i));
  Word out;
  out.letters_.reserve(letters_.size() + 1);
  out.letters_.push_back(static_cast<Letter>(i));
  out.letters_.insert(out.letters_.end(), letters_.begin(), letters_.end());
  return out;
}

Word Word::append(int i) const {
  if (i < 1 || i > kMaxAlphabet) throw DomainError("letter out of range: " + std::to_string(i));
  Word out = *this;
  out.letters_.push_back(static_cast<Letter>(i));
  return out;
}

Word Word::power(std::size_t k) const {
  Word out;
  out.letters_.reserve(letters_.size() * k);
  for (std::size_t r = 0; r < k; ++r) out.letters_.insert(out.letters_.end(), letters_.begin(), letters_.end());
  return out;
}

Word Word::prefix(std::size_t count) const {
  Word out;
  count = std::min(count, letters_.size());
  out.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

Word Word::suffix(std::size_t count) const {
  Word out;
  count = std::min(count, letters_.size());
  out.letters_.assign(letters_.end() - static_cast<std::ptrdiff_t>(count), letters_.end());
  return out;
}

std::string Word::str(int n) const {
  if (letters_.empty()) return "e";
  std::string out;
  if (n <= 9) {
    out.reserve(letters_.size());
    for (Letter a : letters_) out.push_back(static_cast<char>('0' + a));
    return out;
  }
  for (std::size_t p = 0; p < letters_.size(); ++p) {
    if (p > 0) out.push_back('.');
    out += std::to_string(letters_[p]);
  }
  return out;
}

Word Word::parse(std::string_view text, int n) {
  check_alphabet_size(n);
  if (text == "e") return {};
  if (text.empty()) throw DomainError("empty word string (use \"e\" for the unit word)");
  std::vector<Letter> letters;
  auto push = [&](int a) {
    if (a < 1 || a > n) {
      throw DomainError("letter " + std::to_string(a) + " out of range [1, " + std::to_string(n) +
                        "] in word \"" + std::string(text) + "\"");
    }
    letters.push_back(static_cast<Letter>(a));
  };
  if (n <= 9) {
    for (char ch : text) {
      if (ch < '0' || ch > '9') throw DomainError("malformed word \"" + std::string(text) + "\"");
      push(ch - '0');
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t dot = std::min(text.find('.', pos), text.size());
      int value = 0;
      const auto token = text.substr(pos, dot - pos);
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw DomainError("malformed word \"" + std::string(text) + "\"");
      }
      push(value);
      pos = dot + 1;
    }
  }
  return Word(std::move(letters));
}

std::strong_ordering Word::operator<=>(const Word& other) const {
  if (auto c = letters_.size() <=> other.letters_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(letters_.begin(), letters_.end(), other.letters_.begin(),
                                                other.letters_.end());
}

Word concat(const Word& u, const Word& w) {
  std::vector<Letter> letters(u.letters().begin(), u.letters().end());
  letters.insert(letters.end(), w.letters().begin(), w.letters().end());
  return Word(std::move(letters));
}

Word concat(const Word& u, const Word& w, int n) {
  require_alphabet(u, n);
  require_alphabet(w, n);
  return concat(u, w);
}

void require_alphabet(const Word& w, int n) {
  check_alphabet_size(n);
  if (w.max_letter() > n) {
    throw DomainError("letter " + std::to_string(w.max_letter()) + " out of range [1, " + std::to_string(n) + "]");
  }
}

cplx eval_word(const Word& w, std::span<const cplx> lambda) {
  cplx value{1.0, 0.0};
  for (Letter a : w.letters()) {
    if (a > lambda.size()) {
      throw DomainError("word letter " + std::to_string(a) + " exceeds tuple length " + std::to_string(lambda.size()));
    }
    value *= lambda[a - 1];
  }
  return value;
}

BasisEnumeration::BasisEnumeration(int n, int depth) : n_(n), depth_(depth) {
  check_alphabet_size(n);
  if (depth < 0) throw DomainError("depth must be nonnegative");
  powers_.reserve(static_cast<std::size_t>(depth) + 1);
  offsets_.reserve(static_cast<std::size_t>(depth) + 2);
  std::size_t power = 1;
  std::size_t offset = 0;
  for (int k = 0; k <= depth; ++k) {
    powers_.push_back(power);
    offsets_.push_back(offset);
    offset += power;
    if (offset > kMaxDimension) {
      throw DomainError("truncated Fock space of n=" + std::to_string(n) + ", depth=" + std::to_string(depth) +
                        " exceeds the supported dimension");
    }
    if (k < depth) power *= static_cast<std::size_t>(n);
  }
  offsets_.push_back(offset);
}

std::size_t BasisEnumeration::index(const Word& w) const {
  if (w.length() > static_cast<std::size_t>(depth_)) {
    throw DomainError("word of length " + std::to_string(w.length()) + " exceeds depth " + std::to_string(depth_));
  }
  require_alphabet(w, n_);
  std::size_t within = 0;
  for (Letter a : w.letters()) within = within * static_cast<std::size_t>(n_) + (a - 1u);
  return offsets_[w.length()] + within;
}

int BasisEnumeration::level_of(std::size_t index) const {
  if (index >= dimension()) throw DomainError("basis index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  return static_cast<int>(it - offsets_.begin()) - 1;
}

Word BasisEnumeration::word(std::size_t index) const {
  const int k = level_of(index);
  std::size_t within = index - offsets_[static_cast<std::size_t>(k)];
  std::vector<Letter> letters(static_cast<std::size_t>(k));
  for (int p = k - 1; p >= 0; --p) {
    letters[static_cast<std::size_t>(p)] = static_cast<Letter>(within % static_cast<std::size_t>(n_) + 1);
    within /= static_cast<std::size_t>(n_);
  }
  return Word(std::move(letters));
}

std::size_t BasisEnumeration::prepend_index(int i, std::size_t index) const {
  const int k = level_of(index);
  if (k >= depth_) throw DomainError("prepend leaves the truncation");
  const std::size_t within = index - offsets_[static_cast<std::size_t>(k)];
  return offsets_[static_cast<std::size_t>(k) + 1] + static_cast<std::size_t>(i - 1) * powers_[static_cast<std::size_t>(k)] +
         within;
}

std::size_t BasisEnumeration::append_index(std::size_t index, int i) const {
  const int k = level_of(index);
  if (k >= depth_) throw DomainError("append leaves the truncation");
  const std::size_t within = index - offsets_[static_cast<std::size_t>(k)];
  return offsets_[static_cast<std::size_t>(k) + 1] + within * static_cast<std::size_t>(n_) +
         static_cast<std::size_t>(i - 1);
}

BasisEnumeration enumerate_basis(int n, int depth) { return BasisEnumeration(n, depth); }

}  // namespace fockshift

std::size_t std::hash<fockshift::Word>::operator()(const fockshift::Word& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto a : w.letters()) {
    h ^= a;
    h *= 1099511628211ull;
  }
  return h ^ w.length();
}

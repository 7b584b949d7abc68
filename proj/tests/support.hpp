#pragma once

// Independent oracles for the test suites: brute-force word lists, weights
// written straight from each family's definition, path products and dense
// shift matrices built from the word map rather than from the basis
// arithmetic used by the library.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "fockshift/weights.hpp"
#include "fockshift/words.hpp"

namespace oracle {

using fockshift::cplx;
using fockshift::Word;
using LambdaFn = std::function<double(int, const Word&)>;

/// All words of length <= depth, shortest first, then lexicographic.
inline std::vector<Word> words(int n, int depth) {
  std::vector<Word> out{Word{}};
  std::vector<Word> level{Word{}};
  for (int k = 1; k <= depth; ++k) {
    std::vector<Word> next;
    for (const Word& w : level) {
      for (int a = 1; a <= n; ++a) {
        std::vector<fockshift::Letter> letters(w.letters().begin(), w.letters().end());
        letters.push_back(static_cast<fockshift::Letter>(a));
        next.emplace_back(letters);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

inline std::map<Word, std::size_t> index_map(const std::vector<Word>& ws) {
  std::map<Word, std::size_t> out;
  for (std::size_t i = 0; i < ws.size(); ++i) out[ws[i]] = i;
  return out;
}

inline Word cat(const Word& a, const Word& b) {
  std::vector<fockshift::Letter> letters(a.letters().begin(), a.letters().end());
  letters.insert(letters.end(), b.letters().begin(), b.letters().end());
  return Word(letters);
}

inline Word single(int i) { return Word{i}; }

/// W(u, w): prepend the letters of w to u from the rightmost one.
inline double path_weight(const LambdaFn& lambda, const Word& u, const Word& w) {
  double out = 1.0;
  Word cur = u;
  for (std::size_t p = w.length(); p-- > 0;) {
    const int a = w[p];
    out *= lambda(a, cur);
    cur = cat(single(a), cur);
  }
  return out;
}

/// W_mu(v, w): append the letters of w to v from the leftmost one.
inline double right_path_weight(const LambdaFn& mu, const Word& v, const Word& w) {
  double out = 1.0;
  Word cur = v;
  for (std::size_t p = 0; p < w.length(); ++p) {
    const int a = w[p];
    out *= mu(a, cur);
    cur = cat(cur, single(a));
  }
  return out;
}

inline LambdaFn constant(double c) {
  return [c](int, const Word&) { return c; };
}

inline LambdaFn scaled(std::vector<double> s) {
  return [s](int i, const Word&) { return s[static_cast<std::size_t>(i - 1)]; };
}

inline LambdaFn periodic(int period, fockshift::WeightTable rem) {
  return [period, rem](int i, const Word& w) {
    const std::size_t r = w.length() % static_cast<std::size_t>(period);
    std::vector<fockshift::Letter> head(w.letters().begin(), w.letters().begin() + static_cast<long>(r));
    return rem.at({i, Word(head)});
  };
}

inline LambdaFn finite_perturbation(int cutoff, fockshift::WeightTable table, std::vector<double> tail) {
  return [cutoff, table, tail](int i, const Word& w) {
    if (static_cast<int>(w.length()) <= cutoff) {
      const auto it = table.find({i, w});
      if (it != table.end()) return it->second;
    }
    return tail[static_cast<std::size_t>(i - 1)];
  };
}

inline LambdaFn two_letter_m(double m, double c) {
  return [m, c](int i, const Word& w) {
    if (i != 1) return c;
    std::size_t ones = 0;
    while (ones < w.length() && w[ones] == 1) ++ones;
    if (ones == w.length()) return 1.0 / m;
    if (ones + 1 == w.length() && w[ones] == 2) return 1.0 / std::sqrt(m);
    return c;
  };
}

/// mu_{i,w} = W(i,w) / W(e,w).
inline LambdaFn commutant_mu(const LambdaFn& lambda) {
  return [lambda](int i, const Word& w) { return path_weight(lambda, single(i), w) / path_weight(lambda, Word{}, w); };
}

/// Dense compressed T_i on the oracle word list.
inline Eigen::MatrixXcd left_shift(const LambdaFn& lambda, int n, int depth, int i) {
  const auto ws = words(n, depth);
  const auto idx = index_map(ws);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(ws.size()), static_cast<Eigen::Index>(ws.size()));
  for (std::size_t c = 0; c < ws.size(); ++c) {
    if (static_cast<int>(ws[c].length()) >= depth) continue;
    m(static_cast<Eigen::Index>(idx.at(cat(single(i), ws[c]))), static_cast<Eigen::Index>(c)) = lambda(i, ws[c]);
  }
  return m;
}

/// Dense compressed S_i xi_w = mu_{i,w} xi_{wi}.
inline Eigen::MatrixXcd right_shift(const LambdaFn& mu, int n, int depth, int i) {
  const auto ws = words(n, depth);
  const auto idx = index_map(ws);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(ws.size()), static_cast<Eigen::Index>(ws.size()));
  for (std::size_t c = 0; c < ws.size(); ++c) {
    if (static_cast<int>(ws[c].length()) >= depth) continue;
    m(static_cast<Eigen::Index>(idx.at(cat(ws[c], single(i)))), static_cast<Eigen::Index>(c)) = mu(i, ws[c]);
  }
  return m;
}

inline fockshift::WeightTable periodic_table(double a, double b, double c, double d, double e, double f) {
  return {{{1, Word{}}, a}, {{2, Word{}}, b}, {{1, Word{1}}, c}, {{2, Word{1}}, d}, {{1, Word{2}}, e}, {{2, Word{2}}, f}};
}

inline cplx random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  return {normal(rng), normal(rng)};
}

}  // namespace oracle

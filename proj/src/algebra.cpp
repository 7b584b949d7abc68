#include "fockshift/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fockshift {

cplx FourierElement::at(const Word& w) const {
  const auto it = coeffs.find(w);
  return it == coeffs.end() ? cplx(0.0) : it->second;
}

std::size_t FourierElement::max_length() const {
  std::size_t best = 0;
  for (const auto& [w, a] : coeffs) {
    if (a != cplx(0.0)) best = std::max(best, w.length());
  }
  return best;
}

std::optional<Word> FourierElement::minimal_word() const {
  // std::map iterates in graded-lex order, so the first nonzero entry is minimal.
  for (const auto& [w, a] : coeffs) {
    if (a != cplx(0.0)) return w;
  }
  return std::nullopt;
}

void FourierElement::validate() const {
  for (const auto& [w, a] : coeffs) require_alphabet(w, n);
}

CoeffMap apply_fourier(const MuSystem& mu, const FourierElement& a, const Word& v, int depth) {
  require_alphabet(v, mu.alphabet());
  if (static_cast<int>(v.length() + a.max_length()) > depth) {
    throw DomainError("support of the element reaches beyond depth " + std::to_string(depth) + " from word " +
                      v.str(mu.alphabet()));
  }
  return apply_fourier_truncated(mu, a, CoeffMap{{v, 1.0}}, depth);
}

CoeffMap apply_fourier_truncated(const MuSystem& mu, const FourierElement& a, const CoeffMap& x, int depth) {
  CoeffMap out;
  for (const auto& [v, xv] : x) {
    if (xv == cplx(0.0)) continue;
    const double head = right_weight(mu, Word{}, v);
    for (const auto& [w, aw] : a.coeffs) {
      if (aw == cplx(0.0) || static_cast<int>(w.length() + v.length()) > depth) continue;
      out[concat(w, v)] += xv * aw * (right_weight(mu, w, v) / head);
    }
  }
  return out;
}

GradedOperator fourier_operator(const TruncatedFock& space, const MuSystem& mu, const FourierElement& a) {
  std::vector<Triplet> entries;
  for (std::size_t c = 0; c < space.dimension(); ++c) {
    const auto col = apply_fourier_truncated(mu, a, CoeffMap{{space.word(c), 1.0}}, space.depth());
    for (const auto& [w, value] : col) entries.push_back({space.index(w), c, value});
  }
  return GradedOperator::from_triplets(space, std::move(entries));
}

GradedOperator polynomial_operator(const TruncatedFock& space, const WeightSystem& ws, const FourierElement& a) {
  GradedOperator out(space);
  for (const auto& [w, aw] : a.coeffs) {
    if (aw == cplx(0.0) || static_cast<int>(w.length()) > space.depth()) continue;
    out = out + build_word_shift(space, ws, w).scaled(aw / left_weight(ws, Word{}, w));
  }
  return out;
}

GradedOperator phi_band(const GradedOperator& x, int j) {
  const int levels = x.space().depth() + 1;
  if (std::abs(j) >= levels) {
    throw DomainError("band index " + std::to_string(j) + " outside (-" + std::to_string(levels) + ", " +
                      std::to_string(levels) + ")");
  }
  return x.band(j);
}

GradedOperator cesaro_sum(const GradedOperator& x, int k) {
  if (k < 1) throw DomainError("Cesaro order must be at least 1");
  GradedOperator out(x.space());
  for (int j : x.bands()) {
    if (std::abs(j) >= k) continue;
    out = out + x.band(j).scaled(1.0 - static_cast<double>(std::abs(j)) / k);
  }
  return out;
}

GradedOperator pk_polynomial(const TruncatedFock& space, const WeightSystem& ws, const FourierElement& a, int k) {
  if (k < 1) throw DomainError("p_k needs k >= 1");
  const auto cond = condition6_sup(ws, std::max(1, space.depth()));
  if (cond.verdict == Verdict::Diverging) {
    throw PreconditionError("commutant weights are unbounded: " + describe(cond));
  }
  GradedOperator out(space);
  for (const auto& [w, aw] : a.coeffs) {
    const auto len = static_cast<int>(w.length());
    if (aw == cplx(0.0) || len >= k || len > space.depth()) continue;
    const double fejer = 1.0 - static_cast<double>(len) / k;
    out = out + build_word_shift(space, ws, w).scaled(fejer * aw / left_weight(ws, Word{}, w));
  }
  return out;
}

CommutationReport right_commutation_defect(const GradedOperator& x, const MuSystem& mu) {
  const auto& space = x.space();
  if (space.depth() < 2) throw DomainError("commutation pre-check needs depth >= 2");
  CommutationReport report;
  const std::size_t cols = space.levels_end(space.depth() - 2);
  bool first = true;
  for (int i = 1; i <= space.alphabet(); ++i) {
    const auto s = build_shift(space, mu, i);
    const auto diff = x * s - s * x;
    for (std::size_t c = 0; c < cols; ++c) {
      double total = 0.0;
      for (const auto& [row, value] : diff.column(c)) total += std::norm(value);
      const double d = std::sqrt(total);
      ++report.columns;
      if (first || d > report.max_defect) {
        first = false;
        report.max_defect = d;
        report.i = i;
        report.j = i;
        report.witness = space.word(c);
      }
    }
  }
  return report;
}

ExtractResult commutant_extract(const GradedOperator& x, const MuSystem& mu, double precheck_tol) {
  const auto& space = x.space();
  const int n = space.alphabet();
  ExtractResult out;
  out.precheck = right_commutation_defect(x, mu);
  if (out.precheck.max_defect > precheck_tol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", out.precheck.max_defect);
    throw PreconditionError("operator does not commute with the weighted right shifts: ||(X S_" +
                            std::to_string(out.precheck.i) + " - S_" + std::to_string(out.precheck.i) + " X) xi_" +
                            out.precheck.witness.str(n) + "|| = " + buf);
  }
  out.element.n = n;
  for (const auto& [row, value] : x.column(0)) out.element.coeffs[space.word(row)] = value;
  const auto support = static_cast<int>(out.element.max_length());
  const std::size_t cols = space.levels_end(space.depth() - support);
  bool first = true;
  for (std::size_t c = 0; c < cols; ++c) {
    const Word v = space.word(c);
    const auto expected = apply_fourier(mu, out.element, v, space.depth());
    double total = 0.0;
    for (const auto& [row, value] : x.column(c)) {
      const auto it = expected.find(space.word(row));
      total += std::norm(value - (it == expected.end() ? cplx(0.0) : it->second));
    }
    for (const auto& [w, value] : expected) {
      if (x.entry(space.index(w), c) == cplx(0.0)) total += std::norm(value);
    }
    const double d = std::sqrt(total);
    if (first || d > out.residual) {
      first = false;
      out.residual = d;
      out.residual_witness = v;
    }
  }
  return out;
}

namespace {

void require_minimal(const std::optional<Word>& minimal, const Word& given, const std::string& what, int n) {
  if (!minimal) throw DomainError(what + " is zero");
  if (given.length() != minimal->length()) {
    throw DomainError(given.str(n) + " is not a minimal-length support word of " + what + " (minimal length " +
                      std::to_string(minimal->length()) + ")");
  }
}

}  // namespace

PairingResult injectivity_pairing(const MuSystem& mu, const FourierElement& a, const CoeffMap& xi, const Word& v1,
                                  const Word& v2) {
  const int n = mu.alphabet();
  require_minimal(a.minimal_word(), v1, "the element", n);
  FourierElement b{n, xi};
  require_minimal(b.minimal_word(), v2, "the vector", n);
  if (a.at(v1) == cplx(0.0)) throw DomainError("a_" + v1.str(n) + " is zero");
  if (b.at(v2) == cplx(0.0)) throw DomainError("b_" + v2.str(n) + " is zero");
  const int depth = static_cast<int>(a.max_length() + b.max_length());
  const auto image = apply_fourier_truncated(mu, a, xi, depth);
  PairingResult out;
  const auto it = image.find(concat(v1, v2));
  out.via_action = it == image.end() ? cplx(0.0) : it->second;
  out.closed_form = a.at(v1) * b.at(v2) * (right_weight(mu, v1, v2) / right_weight(mu, Word{}, v2));
  return out;
}

std::vector<SpectralRadiusRow> spectral_radius_lower(const MuSystem& mu, const FourierElement& a, const Word& v,
                                                     int k_max, int depth) {
  const int n = mu.alphabet();
  require_minimal(a.minimal_word(), v, "the element", n);
  if (a.at(v) == cplx(0.0)) throw DomainError("a_" + v.str(n) + " is zero");
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  if (static_cast<std::size_t>(k_max) * v.length() > static_cast<std::size_t>(depth)) {
    throw DomainError("k_max * |v| exceeds depth " + std::to_string(depth));
  }
  const cplx av = a.at(v);
  const double head = right_weight(mu, Word{}, v);
  std::vector<SpectralRadiusRow> rows;
  CoeffMap power{{Word{}, 1.0}};
  for (int k = 1; k <= k_max; ++k) {
    power = apply_fourier_truncated(mu, a, power, depth);
    SpectralRadiusRow row;
    row.k = k;
    const Word vk = v.power(static_cast<std::size_t>(k));
    const auto it = power.find(vk);
    row.coefficient = it == power.end() ? cplx(0.0) : it->second;
    row.bound = std::pow(std::abs(row.coefficient), 1.0 / k);
    row.leading_term = std::pow(av, k) * std::pow(head, -(k - 1)) *
                       right_weight(mu, v, v.power(static_cast<std::size_t>(k - 1)));
    for (const auto& [w, value] : power) {
      if (value != cplx(0.0) && w.length() < vk.length()) row.lengths_ok = false;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fockshift

#include "fockshift/condition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <unordered_map>
#include <vector>

namespace fockshift {

namespace {

constexpr double kLogSlack = 1e-12;

struct ProductGraph {
  int n = 0;
  std::vector<std::size_t> state_e;
  std::vector<std::size_t> state_i;
  std::vector<int> target;   // target[node * n + a - 1], -1 when undefined
  std::vector<double> factor;
  std::vector<std::pair<int, int>> sources;  // (node, letter i)
};

// Reachable part of the product automaton from the sources (start, state(i)).
ProductGraph build_graph(const WeightAutomaton& a) {
  ProductGraph g;
  g.n = a.n;
  const auto un = static_cast<std::size_t>(a.n);
  std::unordered_map<std::size_t, int> id;
  std::deque<int> queue;
  auto intern = [&](std::size_t se, std::size_t si) {
    const std::size_t key = se * a.states + si;
    auto [it, inserted] = id.try_emplace(key, static_cast<int>(g.state_e.size()));
    if (inserted) {
      g.state_e.push_back(se);
      g.state_i.push_back(si);
      g.target.resize(g.state_e.size() * un, -1);
      g.factor.resize(g.state_e.size() * un, 0.0);
      queue.push_back(it->second);
    }
    return it->second;
  };
  for (int i = 1; i <= a.n; ++i) g.sources.emplace_back(intern(a.start, a.step(a.start, i)), i);
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop_front();
    const std::size_t se = g.state_e[static_cast<std::size_t>(node)];
    const std::size_t si = g.state_i[static_cast<std::size_t>(node)];
    for (int c = 1; c <= a.n; ++c) {
      const double num = a.at(si, c);
      const double den = a.at(se, c);
      if (std::isnan(num) || std::isnan(den)) continue;
      const int t = intern(a.step(se, c), a.step(si, c));
      g.target[static_cast<std::size_t>(node) * un + (c - 1)] = t;
      g.factor[static_cast<std::size_t>(node) * un + (c - 1)] = num / den;
    }
  }
  return g;
}

// Letters applied in order a_1, ..., a_p build the word a_p ... a_1.
Word word_from_applied(const std::vector<int>& applied) {
  std::vector<Letter> letters(applied.rbegin(), applied.rend());
  return Word(std::move(letters));
}

// Exact max over words of length <= depth, by dynamic programming over lengths.
void depth_limited_sup(const ProductGraph& g, int depth, Condition6Result& out) {
  const auto un = static_cast<std::size_t>(g.n);
  struct Entry {
    int node;
    double value;
    int prev;  // entry index in previous level, or the source letter at level 0
    int letter;
  };
  std::vector<std::vector<Entry>> levels(1);
  std::unordered_map<int, int> where;
  for (const auto& [node, i] : g.sources) {
    if (where.try_emplace(node, static_cast<int>(levels[0].size())).second) {
      levels[0].push_back({node, 1.0, i, 0});
    }
  }
  out.value = 1.0;
  out.argmax_letter = levels[0].front().prev;
  out.argmax_word = Word{};
  std::pair<int, int> best_at{0, 0};
  for (int len = 1; len <= depth; ++len) {
    std::vector<Entry> next;
    where.clear();
    const auto& cur = levels.back();
    for (std::size_t e = 0; e < cur.size(); ++e) {
      for (int c = 1; c <= g.n; ++c) {
        const std::size_t edge = static_cast<std::size_t>(cur[e].node) * un + (c - 1);
        const int t = g.target[edge];
        if (t < 0) continue;
        const double v = cur[e].value * g.factor[edge];
        auto [it, inserted] = where.try_emplace(t, static_cast<int>(next.size()));
        if (inserted) {
          next.push_back({t, v, static_cast<int>(e), c});
        } else if (v > next[static_cast<std::size_t>(it->second)].value) {
          next[static_cast<std::size_t>(it->second)] = {t, v, static_cast<int>(e), c};
        }
      }
    }
    if (next.empty()) break;
    levels.push_back(std::move(next));
    out.depth = len;
    const auto& lv = levels.back();
    for (std::size_t e = 0; e < lv.size(); ++e) {
      if (lv[e].value > out.value) {
        out.value = lv[e].value;
        best_at = {len, static_cast<int>(e)};
      }
    }
  }
  std::vector<int> applied;
  int e = best_at.second;
  for (int len = best_at.first; len > 0; --len) {
    const Entry& entry = levels[static_cast<std::size_t>(len)][static_cast<std::size_t>(e)];
    applied.push_back(entry.letter);
    e = entry.prev;
  }
  std::reverse(applied.begin(), applied.end());
  out.argmax_letter = levels[0][static_cast<std::size_t>(e)].prev;
  out.argmax_word = word_from_applied(applied);
}

// Log-domain Bellman-Ford for the max-product path problem.
void decide(const ProductGraph& g, Condition6Result& out) {
  const auto un = static_cast<std::size_t>(g.n);
  const std::size_t count = g.state_e.size();
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<double> logd(count, kNone);
  std::vector<double> lin(count, 0.0);
  std::vector<std::pair<int, int>> pred(count, {-1, 0});
  for (const auto& src : g.sources) {
    logd[static_cast<std::size_t>(src.first)] = 0.0;
    lin[static_cast<std::size_t>(src.first)] = 1.0;
  }
  auto relax_round = [&] {
    bool changed = false;
    for (std::size_t u = 0; u < count; ++u) {
      if (logd[u] == kNone) continue;
      for (int c = 1; c <= g.n; ++c) {
        const std::size_t edge = u * un + (c - 1);
        const int t = g.target[edge];
        if (t < 0) continue;
        const double cand = logd[u] + std::log(g.factor[edge]);
        auto& dt = logd[static_cast<std::size_t>(t)];
        if (dt == kNone || cand > dt + kLogSlack) {
          dt = cand;
          lin[static_cast<std::size_t>(t)] = lin[u] * g.factor[edge];
          pred[static_cast<std::size_t>(t)] = {static_cast<int>(u), c};
          changed = true;
        }
      }
    }
    return changed;
  };
  bool changed = true;
  for (std::size_t round = 0; round < count && changed; ++round) changed = relax_round();
  if (!changed) {
    out.verdict = Verdict::Bounded;
    double sup = 1.0;
    for (std::size_t v = 0; v < count; ++v) {
      if (logd[v] != kNone) sup = std::max(sup, lin[v]);
    }
    out.supremum = sup;
    return;
  }
  // Still improving after |V| rounds, so the predecessor graph carries a
  // cycle of product > 1. Each node has one predecessor: find the cycles.
  int y = -1;
  std::vector<int> cycle_written;  // collected backwards, i.e. already in written order
  double cycle_ratio = 1.0;
  for (int attempt = 0; attempt < 4 && y < 0; ++attempt) {
    std::vector<int> mark(count, -1);
    for (std::size_t start = 0; start < count && y < 0; ++start) {
      int v = static_cast<int>(start);
      while (v >= 0 && mark[static_cast<std::size_t>(v)] == -1) {
        mark[static_cast<std::size_t>(v)] = static_cast<int>(start);
        v = pred[static_cast<std::size_t>(v)].first;
      }
      if (v < 0 || mark[static_cast<std::size_t>(v)] != static_cast<int>(start)) continue;
      std::vector<int> letters;
      double ratio = 1.0;
      int cur = v;
      do {
        const auto [p, c] = pred[static_cast<std::size_t>(cur)];
        letters.push_back(c);
        ratio *= g.factor[static_cast<std::size_t>(p) * un + (c - 1)];
        cur = p;
      } while (cur != v);
      if (ratio > 1.0) {
        y = v;
        cycle_written = std::move(letters);
        cycle_ratio = ratio;
      }
    }
    for (std::size_t round = 0; round < count && y < 0; ++round) relax_round();
  }
  if (y < 0) {
    out.verdict = Verdict::BoundedSoFar;
    return;
  }
  int cur = y;

  // Shortest stem from a source to y.
  std::vector<std::pair<int, int>> from(count, {-2, 0});
  std::deque<int> queue;
  for (const auto& [node, i] : g.sources) {
    if (from[static_cast<std::size_t>(node)].first == -2) {
      from[static_cast<std::size_t>(node)] = {-1, i};
      queue.push_back(node);
    }
  }
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (u == y) break;
    for (int c = 1; c <= g.n; ++c) {
      const int t = g.target[static_cast<std::size_t>(u) * un + (c - 1)];
      if (t >= 0 && from[static_cast<std::size_t>(t)].first == -2) {
        from[static_cast<std::size_t>(t)] = {u, c};
        queue.push_back(t);
      }
    }
  }
  std::vector<int> stem_applied;
  double stem_ratio = 1.0;
  cur = y;
  while (from[static_cast<std::size_t>(cur)].first >= 0) {
    const auto [p, c] = from[static_cast<std::size_t>(cur)];
    stem_applied.push_back(c);
    stem_ratio *= g.factor[static_cast<std::size_t>(p) * un + (c - 1)];
    cur = p;
  }
  std::reverse(stem_applied.begin(), stem_applied.end());

  GrowthCertificate cert;
  cert.letter = from[static_cast<std::size_t>(cur)].second;
  cert.stem = word_from_applied(stem_applied);
  cert.cycle = Word(std::vector<Letter>(cycle_written.begin(), cycle_written.end()));
  cert.stem_ratio = stem_ratio;
  cert.cycle_ratio = cycle_ratio;
  out.verdict = Verdict::Diverging;
  out.certificate = cert;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Bounded: return "bounded";
    case Verdict::BoundedSoFar: return "bounded_so_far";
    case Verdict::Diverging: return "diverging";
  }
  return "unknown";
}

Condition6Result condition6_sup(const WeightSystem& ws, int depth) {
  if (depth < 1) throw DomainError("depth must be at least 1");
  const auto& a = ws.automaton();
  const ProductGraph g = build_graph(a);
  Condition6Result out;
  out.alphabet = ws.alphabet();
  out.automaton_states = g.state_e.size();
  int scan = depth;
  if (ws.is_tabulated()) scan = std::min(depth, std::get<TabulatedFamily>(ws.family()).depth);
  depth_limited_sup(g, scan, out);
  if (ws.is_tabulated()) {
    out.verdict = Verdict::BoundedSoFar;
    out.method = "exhaustive scan of the tabulated range";
    return out;
  }
  decide(g, out);
  out.method = "max-cycle-ratio test on the " + std::to_string(g.state_e.size()) + "-state product automaton";
  return out;
}

std::string describe(const Condition6Result& r) {
  const int width = r.alphabet;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.17g", r.value);
  std::string text = to_string(r.verdict) + "; max ratio " + buf + " at i=" + std::to_string(r.argmax_letter) +
                     ", w=" + r.argmax_word.str(width) + " (|w| <= " + std::to_string(r.depth) + ")";
  if (r.supremum) {
    std::snprintf(buf, sizeof buf, "%.17g", *r.supremum);
    text += std::string("; supremum ") + buf;
  }
  if (r.certificate) {
    const auto& c = *r.certificate;
    std::snprintf(buf, sizeof buf, "%.17g", c.cycle_ratio);
    text += "; ratio along (" + c.cycle.str(width) + ")^k " + c.stem.str(width) + " with i=" +
            std::to_string(c.letter) + " grows like " + buf + "^k";
  }
  return text;
}

}  // namespace fockshift

#pragma once

// Exhaustive ground truth at tiny scale: A_3(n, d, w) by maximum clique over
// all weight-w words, existence of balanced codes of size B(n)+n by exact
// cover, and maximum K_w-packings by include/exclude search.

#include <algorithm>
#include <bit>
#include <bitset>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tcwc/core.hpp"
#include "tcwc/error.hpp"
#include "tcwc/packing.hpp"
#include "tcwc/planner.hpp"

namespace tcwc {

// Largest number of candidate words the code oracle will enumerate. The
// compatibility graph is held as bitsets, so memory grows with its square.
inline constexpr std::size_t default_oracle_guard = 20000;

inline std::size_t oracle_guard() {
  if (const char* s = std::getenv("TCWC_ORACLE_GUARD")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return default_oracle_guard;
}

// trivial: |clique| + |candidates|. coloring: greedy colouring of the
// candidates. packing: colouring, and for d >= 2w-2 also the number of words
// the still reachable pairs and 2-positions can pay for.
enum class CliqueBound { trivial, coloring, packing };

struct OracleOptions {
  std::size_t guard = 0;        // 0: use oracle_guard()
  std::uint64_t seed = 0;       // 0 keeps the canonical order; otherwise shuffles it
  CliqueBound bound = CliqueBound::packing;
};

struct OracleResult {
  std::int64_t size = 0;
  TernaryCode witness;
  std::size_t candidates = 0;
  std::uint64_t nodes = 0;
};

// All length-n words of l1-weight w in lexicographic order of their vectors.
inline std::vector<Codeword> weight_w_words(int n, int w) {
  std::vector<Codeword> out;
  std::vector<std::uint8_t> v(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n) {
      if (left == 0) out.push_back(Codeword::from_vector(v));
      return;
    }
    if (left > 2 * (n - pos)) return;
    for (std::uint8_t s = 0; s <= 2; ++s) {
      if (s > left) break;
      v[static_cast<std::size_t>(pos)] = s;
      self(self, pos + 1, left - s);
    }
    v[static_cast<std::size_t>(pos)] = 0;
  };
  rec(rec, 0, w);
  return out;
}

inline std::size_t count_weight_w_words(int n, int w) {
  // Sum over b of C(n, b) C(n-b, w-2b).
  auto binom = [](std::int64_t a, std::int64_t b) -> double {
    if (b < 0 || b > a) return 0.0;
    double r = 1;
    for (std::int64_t i = 1; i <= b; ++i) r = r * static_cast<double>(a - b + i) / static_cast<double>(i);
    return r;
  };
  double total = 0;
  for (int b = 0; 2 * b <= w; ++b) total += binom(n, b) * binom(n - b, w - 2 * b);
  return static_cast<std::size_t>(total + 0.5);
}

namespace detail {

// Upper bound on how many more words fit when F pairs and P positions for a 2
// remain: the LP optimum over word types, which sits on one or two types.
inline std::int64_t resource_bound(const std::vector<std::pair<std::int64_t, std::int64_t>>& types, std::int64_t F,
                                   std::int64_t P) {
  double best = 0;
  for (auto [e, b] : types) {
    double x = e > 0 ? static_cast<double>(F) / static_cast<double>(e) : 1e18;
    if (b > 0) x = std::min(x, static_cast<double>(P) / static_cast<double>(b));
    best = std::max(best, x);
  }
  for (std::size_t i = 0; i < types.size(); ++i)
    for (std::size_t j = i + 1; j < types.size(); ++j) {
      const double e1 = static_cast<double>(types[i].first), b1 = static_cast<double>(types[i].second);
      const double e2 = static_cast<double>(types[j].first), b2 = static_cast<double>(types[j].second);
      const double det = e1 * b2 - e2 * b1;
      if (det == 0) continue;
      const double x1 = (static_cast<double>(F) * b2 - e2 * static_cast<double>(P)) / det;
      const double x2 = (e1 * static_cast<double>(P) - b1 * static_cast<double>(F)) / det;
      if (x1 >= 0 && x2 >= 0) best = std::max(best, x1 + x2);
    }
  return static_cast<std::int64_t>(best + 1e-9);
}

struct CliqueSearch {
  using PairMask = std::bitset<144>;  // pair (x, y) at x * n + y, n <= 12
  std::size_t V = 0;
  std::size_t W = 0;
  std::vector<std::uint64_t> adj;
  CliqueBound bound = CliqueBound::coloring;
  std::vector<std::uint32_t> cur, best;
  std::uint64_t nodes = 0;
  bool use_resources = false;
  std::vector<PairMask> pairs;                                  // per vertex
  std::vector<std::uint32_t> twos;                              // per vertex
  std::vector<std::pair<std::int64_t, std::int64_t>> types;     // (pairs, twos) per word type

  const std::uint64_t* row(std::size_t v) const { return adj.data() + v * W; }

  static std::size_t popcount(const std::vector<std::uint64_t>& s) {
    std::size_t c = 0;
    for (std::uint64_t x : s) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }

  // Greedy colouring of the candidate set: vertices in colour order with the
  // colour number of each, as an upper bound on the clique it can extend.
  void colour(const std::vector<std::uint64_t>& cand, std::vector<std::uint32_t>& order,
              std::vector<std::uint32_t>& colours) const {
    order.clear();
    colours.clear();
    std::vector<std::uint64_t> left = cand, q(W);
    std::uint32_t c = 0;
    while (std::any_of(left.begin(), left.end(), [](std::uint64_t x) { return x != 0; })) {
      ++c;
      q = left;
      for (std::size_t k = 0; k < W; ++k) {
        while (q[k]) {
          const std::size_t v = k * 64 + static_cast<std::size_t>(std::countr_zero(q[k]));
          q[k] &= q[k] - 1;
          left[k] &= ~(1ULL << (v % 64));
          const std::uint64_t* rv = row(v);
          for (std::size_t j = 0; j < W; ++j) q[j] &= ~rv[j];
          order.push_back(static_cast<std::uint32_t>(v));
          colours.push_back(c);
        }
      }
    }
  }

  void expand(std::vector<std::uint64_t> cand) {
    ++nodes;
    if (cur.size() > best.size()) best = cur;
    if (bound == CliqueBound::trivial) {
      std::vector<std::uint64_t> next(W);
      for (std::size_t k = 0; k < W; ++k) {
        while (cand[k]) {
          if (cur.size() + popcount(cand) <= best.size()) return;
          const std::size_t v = k * 64 + static_cast<std::size_t>(std::countr_zero(cand[k]));
          cand[k] &= cand[k] - 1;
          const std::uint64_t* rv = row(v);
          for (std::size_t j = 0; j < W; ++j) next[j] = cand[j] & rv[j];
          cur.push_back(static_cast<std::uint32_t>(v));
          expand(next);
          cur.pop_back();
        }
      }
      return;
    }
    if (use_resources) {
      PairMask f;
      std::uint32_t p = 0;
      for (std::size_t k = 0; k < W; ++k)
        for (std::uint64_t bits = cand[k]; bits; bits &= bits - 1) {
          const std::size_t v = k * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          f |= pairs[v];
          p |= twos[v];
        }
      const auto more = resource_bound(types, static_cast<std::int64_t>(f.count()), std::popcount(p));
      if (static_cast<std::int64_t>(cur.size()) + more <= static_cast<std::int64_t>(best.size())) return;
    }
    std::vector<std::uint32_t> order, colours;
    colour(cand, order, colours);
    std::vector<std::uint64_t> next(W);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (cur.size() + colours[i] <= best.size()) return;
      const std::size_t v = order[i];
      const std::uint64_t* rv = row(v);
      for (std::size_t j = 0; j < W; ++j) next[j] = cand[j] & rv[j];
      cur.push_back(static_cast<std::uint32_t>(v));
      expand(next);
      cur.pop_back();
      cand[v / 64] &= ~(1ULL << (v % 64));
    }
  }
};

}  // namespace detail

inline OracleResult max_code_bruteforce(int n, int d, int w, const OracleOptions& opt = {}) {
  if (n < 1 || w < 1 || d < 0) throw parameter_error("oracle needs n >= 1, w >= 1, d >= 0");
  const std::size_t guard = opt.guard ? opt.guard : oracle_guard();
  if (n > 12) throw guard_error("oracle refuses n = " + std::to_string(n) + " > 12");
  const std::size_t expected = count_weight_w_words(n, w);
  if (expected > guard)
    throw guard_error("oracle refuses " + std::to_string(expected) + " candidate words (guard " +
                      std::to_string(guard) + ")");

  std::vector<Codeword> words = weight_w_words(n, w);
  TCWC_ENSURE(words.size() == expected, "weight-w word count mismatch");
  OracleResult res;
  res.candidates = words.size();
  res.witness = TernaryCode(n, w, d);
  if (words.empty()) return res;

  // Vertex order: descending degree, ties in canonical order, optionally shuffled first.
  const std::size_t V = words.size();
  std::vector<std::vector<std::uint32_t>> nbr(V);
  for (std::size_t u = 0; u < V; ++u)
    for (std::size_t v = u + 1; v < V; ++v)
      if (l1_distance(words[u], words[v]) >= d) {
        nbr[u].push_back(static_cast<std::uint32_t>(v));
        nbr[v].push_back(static_cast<std::uint32_t>(u));
      }
  std::vector<std::uint32_t> order(V);
  std::iota(order.begin(), order.end(), 0);
  if (opt.seed != 0) {
    std::mt19937_64 rng(opt.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return nbr[a].size() > nbr[b].size(); });
  std::vector<std::uint32_t> pos(V);
  for (std::size_t i = 0; i < V; ++i) pos[order[i]] = static_cast<std::uint32_t>(i);

  detail::CliqueSearch cs;
  cs.V = V;
  cs.W = (V + 63) / 64;
  cs.bound = opt.bound;
  cs.adj.assign(cs.V * cs.W, 0);
  for (std::size_t u = 0; u < V; ++u)
    for (std::uint32_t v : nbr[u]) cs.adj[pos[u] * cs.W + pos[v] / 64] |= 1ULL << (pos[v] % 64);
  if (opt.bound == CliqueBound::packing) {
    cs.bound = CliqueBound::coloring;
    cs.use_resources = d >= 2 * w - 2;
    cs.pairs.resize(V);
    cs.twos.resize(V);
    for (std::size_t u = 0; u < V; ++u) {
      auto en = words[order[u]].entries();
      for (std::size_t x = 0; x < en.size(); ++x) {
        if (en[x].label == Label::two) cs.twos[u] |= 1u << en[x].position;
        for (std::size_t y = x + 1; y < en.size(); ++y)
          cs.pairs[u].set(static_cast<std::size_t>(en[x].position * n + en[y].position));
      }
    }
    for (int b = 0; 2 * b <= w; ++b) {
      const std::int64_t s = w - b;
      cs.types.emplace_back(s * (s - 1) / 2, b);
    }
  }
  std::vector<std::uint64_t> all(cs.W, ~0ULL);
  if (V % 64) all.back() = (1ULL << (V % 64)) - 1;
  cs.expand(all);

  res.size = static_cast<std::int64_t>(cs.best.size());
  res.nodes = cs.nodes;
  std::vector<std::uint32_t> picked;
  for (std::uint32_t p : cs.best) picked.push_back(order[p]);
  std::sort(picked.begin(), picked.end());
  for (std::uint32_t i : picked) res.witness.add(words[i]);
  return res;
}

struct BalancedSearchResult {
  bool exists = false;
  TernaryCode witness;
  std::uint64_t nodes = 0;
};

// Exact cover of the edges of K_n by support cliques of weight-w words with
// every position labelled 2 at most once and exactly B(n)+n words.
inline BalancedSearchResult balanced_search_bruteforce(int n, int w, std::uint64_t seed = 0) {
  if (n < 1 || w < 3) throw parameter_error("balanced search needs n >= 1 and w >= 3");
  if (n > 10) throw guard_error("balanced search refuses n = " + std::to_string(n) + " > 10");
  const std::int64_t target = upper_bound(n, w);
  BalancedSearchResult res;
  res.witness = TernaryCode(n, w, 2 * w - 2);
  const int E = n * (n - 1) / 2;
  if (target < 0) return res;

  using Mask = std::bitset<64>;
  std::vector<int> index(static_cast<std::size_t>(n * n), -1);
  for (int u = 0, e = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) index[static_cast<std::size_t>(u * n + v)] = e++;

  struct Cand {
    Mask edges;
    std::uint32_t twos = 0;  // bitmask of 2-labelled positions
    std::size_t word = 0;
  };
  const std::vector<Codeword> words = weight_w_words(n, w);
  std::vector<Cand> cands;
  std::vector<std::vector<std::size_t>> by_edge(static_cast<std::size_t>(E));
  std::size_t min_edges = static_cast<std::size_t>(E) + 1, max_edges = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    Cand c;
    c.word = i;
    auto en = words[i].entries();
    for (std::size_t x = 0; x < en.size(); ++x) {
      if (en[x].label == Label::two) c.twos |= 1u << en[x].position;
      for (std::size_t y = x + 1; y < en.size(); ++y)
        c.edges.set(static_cast<std::size_t>(index[static_cast<std::size_t>(en[x].position * n + en[y].position)]));
    }
    if (c.edges.none()) continue;  // covers nothing, so it cannot sit in a decomposition
    min_edges = std::min(min_edges, c.edges.count());
    max_edges = std::max(max_edges, c.edges.count());
    cands.push_back(c);
  }
  for (std::size_t c = 0; c < cands.size(); ++c)
    for (int e = 0; e < E; ++e)
      if (cands[c].edges[static_cast<std::size_t>(e)]) by_edge[static_cast<std::size_t>(e)].push_back(c);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    for (auto& l : by_edge) std::shuffle(l.begin(), l.end(), rng);
  }

  std::vector<std::size_t> chosen;
  auto rec = [&](auto&& self, Mask covered, std::uint32_t twos) -> bool {
    ++res.nodes;
    const auto count = static_cast<std::int64_t>(chosen.size());
    const auto rem = static_cast<std::int64_t>(E) - static_cast<std::int64_t>(covered.count());
    if (rem == 0) return count == target;
    const auto mx = static_cast<std::int64_t>(max_edges), mn = static_cast<std::int64_t>(min_edges);
    if (count + (rem + mx - 1) / mx > target) return false;
    if (count + rem / mn < target) return false;
    int e = 0;
    while (covered[static_cast<std::size_t>(e)]) ++e;
    for (std::size_t c : by_edge[static_cast<std::size_t>(e)]) {
      const Cand& k = cands[c];
      if ((k.edges & covered).any() || (k.twos & twos)) continue;
      chosen.push_back(c);
      if (self(self, covered | k.edges, twos | k.twos)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (E == 0) {
    res.exists = target == 0;
    return res;
  }
  if (cands.empty()) return res;
  res.exists = rec(rec, Mask{}, 0u);
  if (res.exists)
    for (std::size_t c : chosen) res.witness.add(words[cands[c].word]);
  return res;
}

// Maximum number of edge-disjoint K_w's in G by include/exclude over the
// list of all w-subsets that are cliques.
inline std::int64_t packing_max_bruteforce(const ResidualGraph& G, int w) {
  if (G.n() > 10) throw guard_error("packing oracle refuses n = " + std::to_string(G.n()) + " > 10");
  if (w < 2) throw parameter_error("packing oracle needs w >= 2");
  const int n = G.n();
  using Mask = std::bitset<64>;
  std::vector<int> index(static_cast<std::size_t>(n * n), -1);
  for (int u = 0, e = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) index[static_cast<std::size_t>(u * n + v)] = e++;

  std::vector<Mask> cl;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) != w) continue;
    Mask m;
    bool ok = true;
    for (int u = 0; u < n && ok; ++u)
      for (int v = u + 1; v < n && ok; ++v)
        if ((s >> u & 1u) && (s >> v & 1u)) {
          if (!G.has_edge(u, v)) ok = false;
          else m.set(static_cast<std::size_t>(index[static_cast<std::size_t>(u * n + v)]));
        }
    if (ok) cl.push_back(m);
  }
  const std::size_t per = static_cast<std::size_t>(w) * (w - 1) / 2;
  std::int64_t best = 0;
  auto rec = [&](auto&& self, std::size_t i, Mask used, std::int64_t count) -> void {
    best = std::max(best, count);
    if (i == cl.size()) return;
    Mask reach;
    for (std::size_t j = i; j < cl.size(); ++j)
      if ((cl[j] & used).none()) reach |= cl[j];
    if (count + static_cast<std::int64_t>(reach.count() / per) <= best) return;
    if ((cl[i] & used).none()) self(self, i + 1, used | cl[i], count + 1);
    self(self, i + 1, used, count);
  };
  rec(rec, 0, Mask{}, 0);
  return best;
}

inline std::string oracle_csv_header() { return "n,d,w,A3,runtime_s"; }

inline std::string oracle_csv_row(int n, int d, int w, std::int64_t a3, double seconds) {
  std::ostringstream os;
  os << n << ',' << d << ',' << w << ',' << a3 << ',' << seconds;
  return os.str();
}

}  // namespace tcwc

#pragma once

// Edge bookkeeping for K_n, the residual graph G_n = K_n - S, the
// divisibility audit that a K_w-decomposition needs, and explicit K_w-packings
// used to complete S into a full code.

#include <algorithm>
#include <bit>
#include <bitset>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tcwc/builder.hpp"
#include "tcwc/core.hpp"
#include "tcwc/error.hpp"

namespace tcwc {

// Which word covers each pair, and how often each vertex is labelled 2.
class EdgeLedger {
 public:
  EdgeLedger() = default;
  explicit EdgeLedger(int n) : n_(n), two_used_(static_cast<std::size_t>(n), 0) {}

  int n() const { return n_; }

  // Returns the first pair already owned by another word, leaving the ledger
  // unchanged in that case.
  std::optional<Edge> add(const Codeword& c, std::uint32_t id) {
    if (c.length() != n_) throw code_error("word length does not match the ledger");
    auto e = c.entries();
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t j = i + 1; j < e.size(); ++j)
        if (covered_.count(pair_key(e[i].position, e[j].position))) return Edge{e[i].position, e[j].position};
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i].label == Label::two) ++two_used_[static_cast<std::size_t>(e[i].position)];
      for (std::size_t j = i + 1; j < e.size(); ++j) covered_.emplace(pair_key(e[i].position, e[j].position), id);
    }
    return std::nullopt;
  }

  std::optional<std::uint32_t> owner(Vertex u, Vertex v) const {
    auto it = covered_.find(pair_key(u, v));
    if (it == covered_.end()) return std::nullopt;
    return it->second;
  }

  bool covered(Vertex u, Vertex v) const { return covered_.count(pair_key(u, v)) != 0; }
  int two_used(Vertex v) const { return two_used_[static_cast<std::size_t>(v)]; }
  std::size_t covered_count() const { return covered_.size(); }
  const std::unordered_map<std::uint64_t, std::uint32_t>& pairs() const { return covered_; }

 private:
  int n_ = 0;
  std::unordered_map<std::uint64_t, std::uint32_t> covered_;
  std::vector<int> two_used_;
};

// K_n minus a sparse set of removed pairs.
class ResidualGraph {
 public:
  ResidualGraph() = default;
  explicit ResidualGraph(int n) : n_(n), degree_(static_cast<std::size_t>(n), n - 1) {}

  // The graph on [0, n) with exactly the given edges.
  static ResidualGraph from_edges(int n, const std::vector<Edge>& edges) {
    ResidualGraph g(n);
    std::unordered_set<std::uint64_t> keep;
    for (auto [u, v] : edges) {
      if (u == v || u < 0 || v < 0 || u >= n || v >= n) throw parameter_error("edge outside [0, n)");
      keep.insert(pair_key(u, v));
    }
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (!keep.count(pair_key(u, v))) g.remove(u, v);
    return g;
  }

  int n() const { return n_; }
  bool has_edge(Vertex u, Vertex v) const { return u != v && !removed_.count(pair_key(u, v)); }

  bool remove(Vertex u, Vertex v) {
    if (u == v || !removed_.insert(pair_key(u, v)).second) return false;
    --degree_[static_cast<std::size_t>(u)];
    --degree_[static_cast<std::size_t>(v)];
    return true;
  }

  std::int64_t degree(Vertex v) const { return degree_[static_cast<std::size_t>(v)]; }
  const std::vector<std::int64_t>& degrees() const { return degree_; }
  std::int64_t edge_count() const {
    const auto nn = static_cast<std::int64_t>(n_);
    return nn * (nn - 1) / 2 - static_cast<std::int64_t>(removed_.size());
  }
  const std::unordered_set<std::uint64_t>& removed() const { return removed_; }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v = u + 1; v < n_; ++v)
        if (has_edge(u, v)) out.emplace_back(u, v);
    return out;
  }

 private:
  int n_ = 0;
  std::unordered_set<std::uint64_t> removed_;
  std::vector<std::int64_t> degree_;
};

// G_n = K_n minus every support clique of S and the leave E.
inline ResidualGraph residual_graph(int n, const TernaryCode& S, const std::vector<Edge>& E = {}) {
  if (S.n() != n) throw code_error("code length " + std::to_string(S.n()) + " differs from n = " + std::to_string(n));
  EdgeLedger ledger(n);
  for (std::size_t i = 0; i < S.size(); ++i)
    if (auto clash = ledger.add(S[i], static_cast<std::uint32_t>(i)))
      throw code_error("word " + std::to_string(i) + " covers pair " + std::to_string(clash->first) + "-" +
                       std::to_string(clash->second) + " a second time");
  ResidualGraph g(n);
  for (const auto& [key, id] : ledger.pairs()) {
    auto [u, v] = unpack_pair(key);
    g.remove(u, v);
  }
  for (auto [u, v] : E) {
    if (u == v || u < 0 || v < 0 || u >= n || v >= n) throw code_error("leave edge outside [0, n)");
    if (!g.remove(u, v))
      throw code_error("leave edge " + std::to_string(u) + "-" + std::to_string(v) + " is not in K_n - S");
  }
  return g;
}

struct DivisibilityReport {
  int n = 0;
  int w = 0;
  bool degrees_divisible = true;
  std::vector<Vertex> bad_vertices;   // first few vertices with (w-1) not dividing the degree
  std::int64_t min_degree = 0;
  std::int64_t degree_threshold = 0;  // n - 1 - 2w^2
  bool min_degree_ok = true;
  std::int64_t edges = 0;
  bool edges_divisible = true;
  std::int64_t quotient = 0;          // e(G) / C(w,2) when divisible

  bool ok() const { return degrees_divisible && min_degree_ok && edges_divisible; }
};

inline DivisibilityReport check_divisibility(const ResidualGraph& g, int w) {
  if (w < 2) throw parameter_error("check_divisibility needs w >= 2");
  DivisibilityReport r;
  r.n = g.n();
  r.w = w;
  r.degree_threshold = static_cast<std::int64_t>(g.n()) - 1 - 2LL * w * w;
  r.min_degree = g.n() > 0 ? *std::min_element(g.degrees().begin(), g.degrees().end()) : 0;
  for (Vertex v = 0; v < g.n(); ++v)
    if (g.degree(v) % (w - 1) != 0) {
      r.degrees_divisible = false;
      if (r.bad_vertices.size() < 16) r.bad_vertices.push_back(v);
    }
  r.min_degree_ok = r.min_degree >= r.degree_threshold;
  r.edges = g.edge_count();
  const std::int64_t kw = static_cast<std::int64_t>(w) * (w - 1) / 2;
  r.edges_divisible = r.edges % kw == 0;
  r.quotient = r.edges / kw;
  return r;
}

// Adjacency rows as bitsets.
class BitGraph {
 public:
  explicit BitGraph(int n) : n_(n), words_((static_cast<std::size_t>(n) + 63) / 64), bits_(words_ * n, 0) {}

  explicit BitGraph(const ResidualGraph& g) : BitGraph(g.n()) {
    for (Vertex u = 0; u < n_; ++u) {
      std::uint64_t* r = row(u);
      for (std::size_t k = 0; k < words_; ++k) r[k] = ~0ULL;
      if (n_ % 64) r[words_ - 1] = (1ULL << (n_ % 64)) - 1;
      r[static_cast<std::size_t>(u) / 64] &= ~(1ULL << (u % 64));
    }
    for (std::uint64_t key : g.removed()) {
      auto [u, v] = unpack_pair(key);
      clear(u, v);
    }
  }

  int n() const { return n_; }
  std::size_t words() const { return words_; }
  std::uint64_t* row(Vertex v) { return bits_.data() + static_cast<std::size_t>(v) * words_; }
  const std::uint64_t* row(Vertex v) const { return bits_.data() + static_cast<std::size_t>(v) * words_; }
  bool has(Vertex u, Vertex v) const { return (row(u)[static_cast<std::size_t>(v) / 64] >> (v % 64)) & 1ULL; }
  void clear(Vertex u, Vertex v) {
    row(u)[static_cast<std::size_t>(v) / 64] &= ~(1ULL << (v % 64));
    row(v)[static_cast<std::size_t>(u) / 64] &= ~(1ULL << (u % 64));
  }

 private:
  int n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

enum class PackingMode { greedy, exact };

struct PackingResult {
  std::vector<std::vector<Vertex>> cliques;
  std::int64_t leave_edges = 0;  // edges of G left uncovered
  bool exact = false;
};

namespace detail {

// Lexicographically first set of `need` vertices, all above the previous pick,
// that together with the vertices chosen so far forms a clique.
inline bool first_clique(const BitGraph& g, std::vector<std::uint64_t>& cand, int need, std::vector<Vertex>& out) {
  if (need == 0) return true;
  const std::size_t W = g.words();
  // Peel vertices with fewer than need-1 neighbours in cand; none of them can
  // sit in a clique of size need inside cand, so the first clique is unchanged.
  std::size_t avail = 0;
  for (bool changed = need >= 2; changed;) {
    changed = false;
    avail = 0;
    for (std::size_t k = 0; k < W; ++k)
      for (std::uint64_t bits = cand[k]; bits; bits &= bits - 1) {
        const Vertex u = static_cast<Vertex>(k * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        const std::uint64_t* ru = g.row(u);
        int deg = 0;
        for (std::size_t q = 0; q < W && deg < need - 1; ++q) deg += std::popcount(cand[q] & ru[q]);
        if (deg < need - 1) {
          cand[k] &= ~(1ULL << (u % 64));
          changed = true;
        } else {
          ++avail;
        }
      }
  }
  if (need < 2)
    for (std::uint64_t x : cand) avail += static_cast<std::size_t>(std::popcount(x));
  if (avail < static_cast<std::size_t>(need)) return false;
  std::vector<std::uint64_t> next(W);
  for (std::size_t k = 0; k < W; ++k) {
    std::uint64_t bits = cand[k];
    while (bits) {
      const int b = std::countr_zero(bits);
      bits &= bits - 1;
      const Vertex u = static_cast<Vertex>(k * 64 + static_cast<std::size_t>(b));
      const std::uint64_t* ru = g.row(u);
      for (std::size_t q = 0; q < W; ++q) next[q] = q < k ? 0 : cand[q] & ru[q];
      next[k] &= bits;  // strictly above u
      out.push_back(u);
      if (first_clique(g, next, need - 1, out)) return true;
      out.pop_back();
    }
  }
  return false;
}

inline std::vector<std::vector<Vertex>> greedy_cliques(BitGraph& g, int w, std::vector<std::int64_t> deg) {
  std::vector<std::vector<Vertex>> cliques;
  std::set<std::pair<std::int64_t, Vertex>> live;
  for (Vertex v = 0; v < g.n(); ++v)
    if (deg[static_cast<std::size_t>(v)] >= w - 1) live.emplace(deg[static_cast<std::size_t>(v)], v);
  std::vector<std::uint64_t> cand(g.words());
  std::vector<Vertex> pick;
  while (!live.empty()) {
    const Vertex v = live.begin()->second;
    live.erase(live.begin());
    const std::uint64_t* rv = g.row(v);
    std::copy(rv, rv + g.words(), cand.begin());
    pick.clear();
    if (!first_clique(g, cand, w - 1, pick)) continue;  // v lies in no further K_w
    pick.push_back(v);
    std::sort(pick.begin(), pick.end());
    for (std::size_t x = 0; x < pick.size(); ++x)
      for (std::size_t y = x + 1; y < pick.size(); ++y) g.clear(pick[x], pick[y]);
    for (Vertex u : pick) {
      auto& d = deg[static_cast<std::size_t>(u)];
      if (u != v) live.erase({d, u});
      d -= w - 1;
      if (d >= w - 1) live.emplace(d, u);
    }
    cliques.push_back(pick);
  }
  return cliques;
}

struct ExactPacker {
  using Mask = std::bitset<128>;
  int w = 0;
  std::vector<std::vector<Vertex>> cliques;
  std::vector<Mask> masks;
  std::vector<std::vector<std::size_t>> by_edge;  // edge -> cliques containing it
  int edge_total = 0;
  std::size_t per_clique = 0;
  std::vector<std::size_t> chosen, best;

  std::size_t bound(const Mask& blocked) const {
    Mask reach;
    for (std::size_t c = 0; c < masks.size(); ++c)
      if ((masks[c] & blocked).none()) reach |= masks[c];
    return reach.count() / per_clique;
  }

  void search(Mask blocked) {
    if (chosen.size() > best.size()) best = chosen;
    if (chosen.size() + bound(blocked) <= best.size()) return;
    int e = -1;
    for (int x = 0; x < edge_total; ++x) {
      if (blocked[static_cast<std::size_t>(x)]) continue;
      for (std::size_t c : by_edge[static_cast<std::size_t>(x)])
        if ((masks[c] & blocked).none()) {
          e = x;
          break;
        }
      if (e >= 0) break;
    }
    if (e < 0) return;
    for (std::size_t c : by_edge[static_cast<std::size_t>(e)]) {
      if ((masks[c] & blocked).any()) continue;
      chosen.push_back(c);
      search(blocked | masks[c]);
      chosen.pop_back();
    }
    Mask skip = blocked;
    skip.set(static_cast<std::size_t>(e));
    search(skip);
  }
};

}  // namespace detail

// All w-cliques of a graph on at most 64 vertices, each sorted, in lexicographic order.
inline std::vector<std::vector<Vertex>> enumerate_cliques(const BitGraph& g, int w) {
  if (g.n() > 64) throw parameter_error("enumerate_cliques is limited to 64 vertices");
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> cur;
  auto rec = [&](auto&& self, std::uint64_t cand) -> void {
    if (static_cast<int>(cur.size()) == w) {
      out.push_back(cur);
      return;
    }
    while (cand) {
      const Vertex u = static_cast<Vertex>(std::countr_zero(cand));
      cand &= cand - 1;
      cur.push_back(u);
      self(self, cand & g.row(u)[0]);
      cur.pop_back();
    }
  };
  const std::uint64_t all = g.n() == 64 ? ~0ULL : ((1ULL << g.n()) - 1);
  if (w >= 1) rec(rec, all);
  return out;
}

// Edge-disjoint K_w's inside G. Greedy seeds at a vertex of minimum residual
// degree (lowest index on ties) and takes the lexicographically first clique
// through it; exact mode (n <= 14) maximises the number of cliques.
inline PackingResult greedy_kw_packing(const ResidualGraph& G, int w, PackingMode mode = PackingMode::greedy) {
  if (w < 2) throw parameter_error("packing needs w >= 2");
  PackingResult res;
  BitGraph g(G);
  if (mode == PackingMode::greedy) {
    res.cliques = detail::greedy_cliques(g, w, G.degrees());
  } else {
    if (G.n() > 14) throw guard_error("exact packing is limited to n <= 14");
    res.exact = true;
    detail::ExactPacker ex;
    ex.w = w;
    ex.per_clique = static_cast<std::size_t>(w) * (w - 1) / 2;
    std::vector<int> index(static_cast<std::size_t>(G.n() * G.n()), -1);
    for (Vertex u = 0; u < G.n(); ++u)
      for (Vertex v = u + 1; v < G.n(); ++v)
        if (G.has_edge(u, v)) index[static_cast<std::size_t>(u * G.n() + v)] = ex.edge_total++;
    ex.by_edge.assign(static_cast<std::size_t>(ex.edge_total), {});
    ex.cliques = enumerate_cliques(g, w);
    for (std::size_t c = 0; c < ex.cliques.size(); ++c) {
      const auto& q = ex.cliques[c];
      detail::ExactPacker::Mask m;
      for (std::size_t x = 0; x < q.size(); ++x)
        for (std::size_t y = x + 1; y < q.size(); ++y) {
          const int e = index[static_cast<std::size_t>(q[x] * G.n() + q[y])];
          m.set(static_cast<std::size_t>(e));
          ex.by_edge[static_cast<std::size_t>(e)].push_back(c);
        }
      ex.masks.push_back(m);
    }
    if (w >= 2 && ex.per_clique > 0) ex.search({});
    for (std::size_t c : ex.best) res.cliques.push_back(ex.cliques[c]);
  }

  // Edge-disjointness and containment in G.
  std::unordered_set<std::uint64_t> used;
  for (const auto& q : res.cliques) {
    TCWC_ENSURE(static_cast<int>(q.size()) == w, "packing clique of the wrong size");
    for (std::size_t x = 0; x < q.size(); ++x)
      for (std::size_t y = x + 1; y < q.size(); ++y) {
        TCWC_ENSURE(G.has_edge(q[x], q[y]), "packing uses an edge outside G");
        TCWC_ENSURE(used.insert(pair_key(q[x], q[y])).second, "packing cliques share an edge");
      }
  }
  res.leave_edges = G.edge_count() - static_cast<std::int64_t>(used.size());
  return res;
}

// S followed by one word of type 1^w per clique.
inline TernaryCode complete_code(const TernaryCode& S, const std::vector<std::vector<Vertex>>& cliques) {
  TernaryCode out(S.n(), S.w(), S.d(), S.words());
  EdgeLedger ledger(S.n());
  for (std::size_t i = 0; i < S.size(); ++i)
    if (auto clash = ledger.add(S[i], static_cast<std::uint32_t>(i)))
      throw code_error("S covers pair " + std::to_string(clash->first) + "-" + std::to_string(clash->second) + " twice");
  for (const auto& q : cliques) {
    if (static_cast<int>(q.size()) != S.w()) throw code_error("clique size differs from the weight");
    std::vector<Entry> e;
    for (Vertex v : q) e.push_back({v, Label::one});
    Codeword c(S.n(), std::move(e));
    if (auto clash = ledger.add(c, static_cast<std::uint32_t>(out.size())))
      throw code_error("clique covers pair " + std::to_string(clash->first) + "-" + std::to_string(clash->second) +
                       " already covered");
    out.add(std::move(c));
  }
  return out;
}

struct LeaveRow {
  std::int64_t n = 0;
  std::int64_t w = 0;
  std::string branch;
  std::int64_t x_target = 0;
  std::int64_t x_achieved = 0;
  std::int64_t leave_edges = 0;
};

inline std::string leave_table(const std::vector<LeaveRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "n" << std::setw(4) << "w" << std::setw(11) << "branch" << std::setw(11)
     << "x_target" << std::setw(12) << "x_achieved" << "leave_edges\n";
  for (const auto& r : rows)
    os << std::left << std::setw(8) << r.n << std::setw(4) << r.w << std::setw(11) << r.branch << std::setw(11)
       << r.x_target << std::setw(12) << r.x_achieved << r.leave_edges << '\n';
  return os.str();
}

}  // namespace tcwc

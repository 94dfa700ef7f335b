#pragma once

// The sub-code S for every branch of the planner: ruler translates, the
// interval words, the six word classes of the t = 0 case, the spliced words of the non-balanced case,
// the double Golomb family H and the exchange over the array M.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tcwc/core.hpp"
#include "tcwc/error.hpp"
#include "tcwc/golomb.hpp"
#include "tcwc/planner.hpp"

namespace tcwc {

using Edge = std::pair<Vertex, Vertex>;

struct VertexGroup {
  std::string name;
  Vertex start = 0;
  Vertex count = 0;
};

// Named vertex groups laid out in order over [0, n), plus landmark integers.
struct VertexLayout {
  int n = 0;
  std::vector<VertexGroup> groups;
  std::map<std::string, std::int64_t> landmarks;

  Vertex add(const std::string& name, std::int64_t count) {
    if (count < 0) throw internal_error("negative size for vertex group " + name);
    const Vertex start = groups.empty() ? 0 : groups.back().start + groups.back().count;
    groups.push_back({name, start, static_cast<Vertex>(count)});
    return start;
  }

  const VertexGroup& group(const std::string& name) const {
    for (const auto& g : groups)
      if (g.name == name) return g;
    throw internal_error("no vertex group " + name);
  }

  // 1-based index into a group, as in b_1, b_2, ...
  Vertex at(const std::string& name, std::int64_t index) const {
    const VertexGroup& g = group(name);
    TCWC_ENSURE(index >= 1 && index <= g.count, name + " index " + std::to_string(index) + " out of range");
    return g.start + static_cast<Vertex>(index - 1);
  }

  bool partitions() const {
    Vertex next = 0;
    for (const auto& g : groups) {
      if (g.start != next || g.count < 0) return false;
      next += g.count;
    }
    return next == n;
  }
};

inline std::string to_text(const VertexLayout& l) {
  std::ostringstream os;
  os << "n " << l.n << '\n';
  for (const auto& g : l.groups) os << "group " << g.name << ' ' << g.start << ' ' << g.count << '\n';
  for (const auto& [k, v] : l.landmarks) os << "landmark " << k << ' ' << v << '\n';
  return os.str();
}

struct ExchangeStats {
  std::int64_t m = 0;          // rows of M
  std::int64_t steps = 0;      // entries of M-bar processed
  std::int64_t swaps = 0;
  std::int64_t max_blocked = 0;  // largest |N| seen
  bool profile_preserved = true;
};

struct BuildResult {
  BuildPlan plan;
  TernaryCode code;
  std::vector<Edge> leave_edges;  // E, only on T1_NONDIV
  VertexLayout layout;
  ExchangeStats exchange;
};

namespace detail {

inline Codeword make_word(int n, const std::vector<Vertex>& ones, const std::vector<Vertex>& twos) {
  std::vector<Entry> e;
  e.reserve(ones.size() + twos.size());
  for (Vertex v : ones) e.push_back({v, Label::one});
  for (Vertex v : twos) e.push_back({v, Label::two});
  return Codeword(n, std::move(e));
}

// A row whose first entry is 2-labelled and all others 1-labelled.
inline Codeword row_word(int n, const std::vector<Vertex>& row) {
  return make_word(n, std::vector<Vertex>(row.begin() + 1, row.end()), {row.front()});
}

inline std::vector<Vertex> interval(std::int64_t lo, std::int64_t hi) {
  std::vector<Vertex> v;
  for (std::int64_t x = lo; x <= hi; ++x) v.push_back(static_cast<Vertex>(x));
  return v;
}

inline std::vector<std::int64_t> first_integers(std::int64_t k) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(k));
  std::iota(v.begin(), v.end(), 1);
  return v;
}

inline std::int64_t cube(std::int64_t w) { return w * w * w; }

inline void append(std::vector<Vertex>& a, const std::vector<Vertex>& b) { a.insert(a.end(), b.begin(), b.end()); }

}  // namespace detail

// Explicit preconditions per branch; nullopt when the builder accepts the plan.
inline std::optional<std::string> regime_violation(const BuildPlan& p) {
  const std::int64_t w = p.w, k = p.a;
  if (p.below_regime) return "below asymptotic regime: n - 1 - (w-1)(w-2) <= 0";
  switch (p.branch) {
    case Branch::t1_div:
      if (p.n - k < detail::cube(w)) return "requires n - k >= w^3 = " + std::to_string(detail::cube(w));
      break;
    case Branch::t0_div: {
      const std::int64_t bound = w * (2 * (w - 1) + w * w);
      if (p.n - p.h - k < bound) return "requires n' = n - h - k >= w(2(w-1)+w^2) = " + std::to_string(bound);
      break;
    }
    case Branch::t0_nondiv:
      if (p.h < k + detail::cube(w)) return "requires h >= k + w^3 = " + std::to_string(k + detail::cube(w));
      break;
    case Branch::t1_nondiv: {
      const std::int64_t m = 2 * detail::cube(w) + 1;
      if (p.h <= 5 * m) return "requires h > 5m = " + std::to_string(5 * m);
      break;
    }
    case Branch::general_t: {
      const std::int64_t ht = p.h - w * (w + 2);
      if (ht <= 2 * detail::cube(w))
        return "requires h~ = h - w(w+2) > 2w^3 = " + std::to_string(2 * detail::cube(w));
      break;
    }
  }
  return std::nullopt;
}

inline void require_regime(const BuildPlan& p, Branch expected) {
  if (p.branch != expected)
    throw parameter_error(std::string("plan is ") + to_string(p.branch) + ", builder expects " + to_string(expected));
  if (auto why = regime_violation(p))
    throw regime_error(to_string(p.branch) + std::string(" at n = ") + std::to_string(p.n) + ", w = " +
                       std::to_string(p.w) + " " + *why);
}

// ---------------------------------------------------------------------------
// n = 1 mod (w-1), (w-1) | ell

inline BuildResult build_t1_divisible(const BuildPlan& p) {
  require_regime(p, Branch::t1_div);
  const int n = static_cast<int>(p.n);
  BuildResult res{p, TernaryCode(n, static_cast<int>(p.w), static_cast<int>(2 * p.w - 2)), {}, {}, {}};
  res.layout.n = n;
  res.layout.add("Z", p.n - p.a);
  res.layout.add("b", p.a);
  const GolombRuler r = greedy_ruler(p.n - p.a, static_cast<std::size_t>(p.w - 1));
  for (auto& c : translates(r, n)) res.code.add(std::move(c));
  return res;
}

// ---------------------------------------------------------------------------
// n = 0 mod (w-1), (w-1) | ell

inline BuildResult build_t0_divisible(const BuildPlan& p) {
  require_regime(p, Branch::t0_div);
  const int n = static_cast<int>(p.n);
  const std::int64_t w = p.w, h = p.h, k = p.a;
  const std::int64_t np = p.n - h - k;
  BuildResult res{p, TernaryCode(n, static_cast<int>(w), static_cast<int>(2 * w - 2)), {}, {}, {}};
  VertexLayout& L = res.layout;
  L.n = n;
  L.add("Z", np);
  L.add("b", h);
  L.add("c", k);
  TCWC_ENSURE(L.partitions(), "layout does not partition [0, n)");

  std::vector<std::int64_t> free_diffs = detail::first_integers(w - 1);
  const GolombRuler r = greedy_ruler(np, static_cast<std::size_t>(w - 1), free_diffs);
  for (auto& c : translates(r, n)) res.code.add(std::move(c));

  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (std::int64_t i = 1; i <= h; ++i) {
    std::vector<Vertex> ones;
    if (i <= k) {
      ones = detail::interval((w - 3) * (i - 1), (w - 3) * i - 1);
      ones.push_back(L.at("c", i));
    } else {
      ones = detail::interval((w - 2) * (i - 1) - k, (w - 2) * i - k - 1);
    }
    const Vertex two = L.at("b", i);
    for (Vertex v : ones) {
      TCWC_ENSURE(v >= 0 && v < n && !seen[static_cast<std::size_t>(v)], "interval words overlap");
      seen[static_cast<std::size_t>(v)] = 1;
    }
    seen[static_cast<std::size_t>(two)] = 1;
    res.code.add(detail::make_word(n, ones, {two}));
  }
  TCWC_ENSURE(std::all_of(seen.begin(), seen.end(), [](char s) { return s == 1; }),
              "supports of the words s_i do not cover every vertex");
  return res;
}

// ---------------------------------------------------------------------------
// n = 0 mod (w-1), (w-1) does not divide ell: six classes of words

inline BuildResult build_t0_nondivisible(const BuildPlan& p) {
  require_regime(p, Branch::t0_nondiv);
  const int n = static_cast<int>(p.n);
  const std::int64_t w = p.w, h = p.h, k = p.a;
  const std::int64_t nb_bar = w - 1, nb = (w - 1) * (w - 4) / 2;
  const std::int64_t np = p.n - (w - 1) * (w - 2) / 2 - (h + k + 1);
  BuildResult res{p, TernaryCode(n, static_cast<int>(w), static_cast<int>(2 * w - 2)), {}, {}, {}};
  VertexLayout& L = res.layout;
  L.n = n;
  L.add("Z", np);
  L.add("bbar", nb_bar);
  L.add("b", nb);
  L.add("cbar", h + 1);
  L.add("c", k);
  TCWC_ENSURE(L.partitions(), "layout does not partition [0, n)");

  const std::int64_t n0 = (w - 1) * (w - 2) * (w - 4) / 2;
  const std::int64_t alpha = (w - 2) * (w - 1) + (w - 3) * (w - 4) * (w - 1) / 2;
  const std::int64_t beta = n0 + (w - 3) * alpha;
  const std::int64_t gamma = beta + (w - 2) * (h - k - alpha + 1);
  L.landmarks = {{"n0", n0}, {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"n_prime", np}};
  TCWC_ENSURE(h - k - alpha + 1 > 0, "h - k - alpha + 1 must be positive");
  TCWC_ENSURE(gamma + (w - 3) * k == np, "intervals do not end at n'");

  auto& code = res.code;
  // Z: pairs of bbar 2-labelled, blocks of b 1-labelled
  for (std::int64_t i = 1; i <= (w - 1) / 2; ++i) {
    std::vector<Vertex> ones;
    for (std::int64_t j = (w - 4) * (i - 1) + 1; j <= (w - 4) * i; ++j) ones.push_back(L.at("b", j));
    code.add(detail::make_word(n, ones, {L.at("bbar", 2 * i - 1), L.at("bbar", 2 * i)}));
  }
  // Y1: translates of a [w-1]-free ruler
  const GolombRuler r = greedy_ruler(np, static_cast<std::size_t>(w - 1), detail::first_integers(w - 1));
  for (auto& c : translates(r, n)) code.add(std::move(c));
  // Y2
  for (std::int64_t i = 1; i <= nb; ++i)
    code.add(detail::make_word(n, detail::interval((w - 2) * (i - 1), (w - 2) * i - 1), {L.at("b", i)}));
  // Y3: r_i runs through each bbar w-2 times, then each b w-3 times
  for (std::int64_t i = 1; i <= alpha; ++i) {
    const Vertex ri = i <= (w - 2) * (w - 1)
                          ? L.at("bbar", (i + w - 3) / (w - 2))
                          : L.at("b", (i - (w - 1) * (w - 2) + w - 4) / (w - 3));
    std::vector<Vertex> ones = detail::interval(n0 + (i - 1) * (w - 3), n0 + i * (w - 3) - 1);
    ones.push_back(ri);
    code.add(detail::make_word(n, ones, {L.at("cbar", i)}));
  }
  // Y4
  for (std::int64_t t = 1; t <= h - k - alpha + 1; ++t)
    code.add(detail::make_word(n, detail::interval(beta + (w - 2) * (t - 1), beta + (w - 2) * t - 1),
                               {L.at("cbar", alpha + t)}));
  // Y5
  for (std::int64_t i = 1; i <= k; ++i) {
    std::vector<Vertex> ones = detail::interval(gamma + (w - 3) * (i - 1), gamma + (w - 3) * i - 1);
    ones.push_back(L.at("c", i));
    code.add(detail::make_word(n, ones, {L.at("cbar", h - k + 1 + i)}));
  }
  const std::int64_t total = (w - 1) / 2 + np + nb + alpha + (h - k - alpha + 1) + k;
  TCWC_ENSURE(total == p.y + p.z, "class sizes do not add up to y + z");
  TCWC_ENSURE(static_cast<std::int64_t>(code.size()) == total, "word count mismatch");
  return res;
}

// ---------------------------------------------------------------------------
// n = 1 mod (w-1), (w-1) does not divide ell: spliced translates and leave E

inline BuildResult build_t1_nondivisible(const BuildPlan& p) {
  require_regime(p, Branch::t1_nondiv);
  const int n = static_cast<int>(p.n);
  const std::int64_t w = p.w, k = p.a;
  const std::int64_t N = p.n - k - 1;
  const std::int64_t m = 2 * detail::cube(w) + 1;
  BuildResult res{p, TernaryCode(n, static_cast<int>(w), static_cast<int>(2 * w - 2)), {}, {}, {}};
  VertexLayout& L = res.layout;
  L.n = n;
  L.add("Z", N);
  L.add("inf", 1);
  L.add("c", k);
  L.landmarks = {{"m", m}, {"splice", 2 * m}};
  TCWC_ENSURE(L.partitions(), "layout does not partition [0, n)");

  GolombRuler small = greedy_ruler(m, static_cast<std::size_t>(w - 1), detail::first_integers(w - 1));
  std::sort(small.marks.begin(), small.marks.end());
  GolombRuler A{N, small.marks, small.forbidden};
  const RulerCheck embedded = verify_ruler(A);
  TCWC_ENSURE(embedded.ok, "embedded ruler is not [w-1]-free: " + embedded.violation);

  // r_1 .. r_{w-1}, stored 0-based
  std::vector<Vertex> rs;
  for (std::int64_t i = 1; i <= w - 1; ++i) {
    if (i <= w - k - 2) rs.push_back(static_cast<Vertex>(i - 1));
    else if (i == w - k - 1) rs.push_back(L.at("inf", 1));
    else rs.push_back(L.at("c", w - i));
  }
  auto shifted = [&](std::int64_t j) { return static_cast<Vertex>(mod(A.marks[static_cast<std::size_t>(j - 1)] + 2 * m, N)); };
  const std::int64_t half = (w - 1) / 2;

  for (std::int64_t i = 0; i < N; ++i) {
    if (i == 2 * m) continue;
    const auto s = translate_support(A, i);
    res.code.add(detail::make_word(n, std::vector<Vertex>(s.begin() + 1, s.end()), {static_cast<Vertex>(s[0])}));
  }
  std::vector<Vertex> s1_ones, s2_ones;
  for (std::int64_t j = 2; j <= half; ++j) s1_ones.push_back(shifted(j));
  for (std::int64_t i = 1; i <= half; ++i) s1_ones.push_back(rs[static_cast<std::size_t>(i - 1)]);
  for (std::int64_t i = half + 1; i <= w - 2; ++i) s2_ones.push_back(rs[static_cast<std::size_t>(i - 1)]);
  for (std::int64_t j = half + 1; j <= w - 1; ++j) s2_ones.push_back(shifted(j));

  std::vector<Vertex> all = s1_ones;
  detail::append(all, s2_ones);
  all.push_back(shifted(1));
  all.push_back(rs.back());
  std::sort(all.begin(), all.end());
  TCWC_ENSURE(std::adjacent_find(all.begin(), all.end()) == all.end() &&
                  all.size() == static_cast<std::size_t>(2 * (w - 1)),
              "the 2(w-1) vertices of s1 and s2 are not distinct");
  res.code.add(detail::make_word(n, s1_ones, {shifted(1)}));
  res.code.add(detail::make_word(n, s2_ones, {rs.back()}));

  for (std::int64_t i = 1; i <= half; ++i)
    res.leave_edges.emplace_back(rs[static_cast<std::size_t>(i - 1)], rs[static_cast<std::size_t>(w - i - 1)]);
  TCWC_ENSURE(static_cast<std::int64_t>(res.code.size()) == p.n - k, "word count is not n - k");
  return res;
}

// ---------------------------------------------------------------------------
// n = t mod (w-1), t in [2, w-2]

// Rows of the double Golomb family: column 0 holds the 2-labelled vertex.
struct HFamily {
  std::int64_t h_tilde = 0;
  std::int64_t w = 0;
  std::int64_t t = 0;
  GolombRuler ruler;
  std::vector<std::vector<Vertex>> rows;
  // (family, i, j): family 0 for a_{i,j}, 1 for b_{i,j}
  std::vector<std::array<std::int64_t, 3>> origin;
};

inline HFamily build_h_family(std::int64_t n_prime, std::int64_t w, std::int64_t t) {
  if (w < 5) throw parameter_error("build_H needs w >= 5");
  if (t < 2 || t > w - 2) throw parameter_error("build_H needs t in [2, w-2]");
  if (n_prime % (w - 1) != 0) throw parameter_error("build_H needs (w-1) | n'");
  const std::int64_t ht = n_prime / (w - 1);
  if (ht <= 2 * detail::cube(w))
    throw regime_error("build_H requires h~ > 2w^3 = " + std::to_string(2 * detail::cube(w)));
  // Case 4 of the packing argument needs every product (s2-s1)(i2-i1) below h~.
  TCWC_ENSURE((w - 2) * (w - t - 1) < 2 * w * w && 2 * w * w < ht, "h~ too small for the stride argument");

  HFamily H{ht, w, t, greedy_ruler(ht, static_cast<std::size_t>(w - 1)), {}, {}};
  const auto& a = H.ruler.marks;
  auto vtx = [&](std::int64_t q, std::int64_t res) { return static_cast<Vertex>(mod(q, ht) * (w - 1) + res); };
  for (std::int64_t i = 0; i <= t - 2; ++i) {
    for (std::int64_t j = 0; j < ht; ++j) {
      std::vector<Vertex> row{vtx(a[static_cast<std::size_t>(w - 2)] + j, i)};
      for (std::int64_t s = 0; s <= w - 3; ++s) row.push_back(vtx(a[static_cast<std::size_t>(s)] + j, i));
      H.rows.push_back(std::move(row));
      H.origin.push_back({0, i, j});
    }
  }
  for (std::int64_t i = 0; i <= w - t - 1; ++i) {
    for (std::int64_t j = 0; j < ht; ++j) {
      const std::int64_t s2 = t + i;
      std::vector<Vertex> row{vtx(s2 * i + j, s2 - 1)};
      for (std::int64_t s = 1; s <= w - 1; ++s)
        if (s != s2) row.push_back(vtx(s * i + j, s - 1));
      H.rows.push_back(std::move(row));
      H.origin.push_back({1, i, j});
    }
  }
  TCWC_ENSURE(static_cast<std::int64_t>(H.rows.size()) == n_prime, "H must have n' rows");
  return H;
}

// Violations of the five packing cases for H, indexed 0..4 (cases 1..5).
inline std::array<std::int64_t, 5> h_case_violations(const HFamily& H) {
  std::array<std::int64_t, 5> bad{};
  std::unordered_map<std::uint64_t, std::uint32_t> owner;
  for (std::uint32_t id = 0; id < H.rows.size(); ++id) {
    const auto& row = H.rows[id];
    for (std::size_t x = 0; x < row.size(); ++x)
      for (std::size_t y = x + 1; y < row.size(); ++y) {
        auto [it, fresh] = owner.emplace(pair_key(row[x], row[y]), id);
        if (fresh) continue;
        const auto& o1 = H.origin[it->second];
        const auto& o2 = H.origin[id];
        int c;
        if (o1[0] == 0 && o2[0] == 0) c = o1[1] == o2[1] ? 0 : 1;
        else if (o1[0] == 1 && o2[0] == 1) c = o1[1] == o2[1] ? 2 : 3;
        else c = 4;
        ++bad[static_cast<std::size_t>(c)];
      }
  }
  return bad;
}

inline TernaryCode build_H(std::int64_t n_prime, std::int64_t w, std::int64_t t) {
  const HFamily H = build_h_family(n_prime, w, t);
  const auto bad = h_case_violations(H);
  for (std::size_t c = 0; c < bad.size(); ++c)
    TCWC_ENSURE(bad[c] == 0, "H violates packing case " + std::to_string(c + 1));
  TernaryCode code(static_cast<int>(n_prime), static_cast<int>(w), static_cast<int>(2 * w - 2));
  for (const auto& row : H.rows) code.add(detail::row_word(static_cast<int>(n_prime), row));
  return code;
}

// State of the exchange over M-bar and H-bar. Member ids: H rows first, then
// Z, then M.
struct ExchangeState {
  int n = 0;
  int w = 0;
  std::vector<std::vector<Vertex>> H;
  std::vector<std::vector<Vertex>> Z;
  std::vector<std::vector<Vertex>> M;
  std::unordered_map<std::uint64_t, std::int32_t> ledger;  // pair -> covering count, processed part only
  std::vector<std::vector<std::uint32_t>> members;         // vertex -> member ids, with multiplicity
  std::size_t row = 0;
  std::size_t col = 1;
  ExchangeStats stats;

  bool done() const { return row >= M.size(); }
  std::uint32_t h_id(std::size_t a) const { return static_cast<std::uint32_t>(a); }
  std::uint32_t m_id(std::size_t i) const { return static_cast<std::uint32_t>(H.size() + Z.size() + i); }

  const std::vector<Vertex>& member(std::uint32_t id) const {
    if (id < H.size()) return H[id];
    if (id < H.size() + Z.size()) return Z[id - H.size()];
    return M[id - H.size() - Z.size()];
  }

  std::int32_t covered(Vertex u, Vertex v) const {
    auto it = ledger.find(pair_key(u, v));
    return it == ledger.end() ? 0 : it->second;
  }
};

namespace detail {

inline void cover_row(ExchangeState& s, const std::vector<Vertex>& row) {
  for (std::size_t x = 0; x < row.size(); ++x)
    for (std::size_t y = x + 1; y < row.size(); ++y) ++s.ledger[pair_key(row[x], row[y])];
}

inline void uncover(ExchangeState& s, Vertex u, Vertex v) {
  auto it = s.ledger.find(pair_key(u, v));
  TCWC_ENSURE(it != s.ledger.end() && it->second > 0, "ledger underflow");
  if (--it->second == 0) s.ledger.erase(it);
}

inline void move_member(std::vector<std::uint32_t>& list, std::uint32_t from, std::uint32_t to) {
  auto it = std::find(list.begin(), list.end(), from);
  TCWC_ENSURE(it != list.end(), "membership list out of sync");
  *it = to;
}

inline bool entry_fits(const ExchangeState& s, Vertex v) {
  const auto& r = s.M[s.row];
  for (std::size_t j = 0; j < s.col; ++j)
    if (r[j] == v || s.covered(v, r[j]) != 0) return false;
  return true;
}

inline void accept_entry(ExchangeState& s) {
  const auto& r = s.M[s.row];
  for (std::size_t j = 0; j < s.col; ++j) ++s.ledger[pair_key(r[s.col], r[j])];
  ++s.stats.steps;
  if (++s.col == r.size()) {
    ++s.row;
    s.col = 1;
  }
}

}  // namespace detail

inline ExchangeState make_exchange_state(int n, int w, std::vector<std::vector<Vertex>> H,
                                         std::vector<std::vector<Vertex>> Z, std::vector<std::vector<Vertex>> M) {
  ExchangeState s;
  s.n = n;
  s.w = w;
  s.H = std::move(H);
  s.Z = std::move(Z);
  s.M = std::move(M);
  s.members.assign(static_cast<std::size_t>(n), {});
  const std::size_t total = s.H.size() + s.Z.size() + s.M.size();
  for (std::uint32_t id = 0; id < total; ++id)
    for (Vertex v : s.member(id)) s.members[static_cast<std::size_t>(v)].push_back(id);
  for (const auto& r : s.H) detail::cover_row(s, r);
  for (const auto& r : s.Z) detail::cover_row(s, r);
  for (const auto& [key, cnt] : s.ledger) TCWC_ENSURE(cnt == 1, "H and Z do not form a packing");
  s.stats.m = static_cast<std::int64_t>(s.M.size());
  return s;
}

// Settles the entry under the cursor, swapping it with a 1-labelled entry of
// an H row that shares no vertex with N when it conflicts.
inline void exchange_step(ExchangeState& s) {
  if (s.done()) return;
  const Vertex v = s.M[s.row][s.col];
  if (detail::entry_fits(s, v)) {
    detail::accept_entry(s);
    return;
  }

  std::vector<char> in_t(static_cast<std::size_t>(s.n), 0);
  for (const auto& r : s.M)
    for (Vertex x : r) in_t[static_cast<std::size_t>(x)] = 1;
  std::vector<char> blocked(static_cast<std::size_t>(s.n), 0);
  std::int64_t blocked_count = 0;
  for (std::size_t x = 0; x < in_t.size(); ++x) {
    if (!in_t[x]) continue;
    for (std::uint32_t id : s.members[x])
      for (Vertex y : s.member(id))
        if (!blocked[static_cast<std::size_t>(y)]) {
          blocked[static_cast<std::size_t>(y)] = 1;
          ++blocked_count;
        }
  }
  s.stats.max_blocked = std::max(s.stats.max_blocked, blocked_count);

  std::size_t a = 0;
  for (; a < s.H.size(); ++a) {
    const auto& r = s.H[a];
    if (std::none_of(r.begin(), r.end(), [&](Vertex y) { return blocked[static_cast<std::size_t>(y)] != 0; })) break;
  }
  if (a == s.H.size())
    throw exchange_error("n too small for exchange: no row of H avoids N at M entry (" + std::to_string(s.row + 1) +
                         ", " + std::to_string(s.col + 1) + "); |N| = " + std::to_string(blocked_count) +
                         ", |H| = " + std::to_string(s.H.size()) + ", swaps so far = " +
                         std::to_string(s.stats.swaps));

  auto& hrow = s.H[a];
  const std::size_t hc = hrow.size() - 1;
  const Vertex hbar = hrow[hc];
  const std::size_t before_v = s.members[static_cast<std::size_t>(v)].size();
  const std::size_t before_h = s.members[static_cast<std::size_t>(hbar)].size();
  for (std::size_t x = 0; x < hrow.size(); ++x)
    if (x != hc) {
      detail::uncover(s, hbar, hrow[x]);
      ++s.ledger[pair_key(v, hrow[x])];
    }
  hrow[hc] = v;
  s.M[s.row][s.col] = hbar;
  detail::move_member(s.members[static_cast<std::size_t>(v)], s.m_id(s.row), s.h_id(a));
  detail::move_member(s.members[static_cast<std::size_t>(hbar)], s.h_id(a), s.m_id(s.row));
  ++s.stats.swaps;

  // The H row stays free of repeats and its new pairs are covered once
  for (std::size_t x = 0; x < hrow.size(); ++x)
    for (std::size_t y = x + 1; y < hrow.size(); ++y) {
      TCWC_ENSURE(hrow[x] != hrow[y], "swap repeats a vertex in an H row");
      TCWC_ENSURE(s.covered(hrow[x], hrow[y]) == 1, "swap covers a pair twice inside the updated H row");
    }
  // The new entry is distinct within its row and covers no pair twice
  TCWC_ENSURE(detail::entry_fits(s, hbar), "swapped-in entry repeats a vertex or covers a pair twice");
  TCWC_ENSURE(s.members[static_cast<std::size_t>(v)].size() == before_v &&
                  s.members[static_cast<std::size_t>(hbar)].size() == before_h,
              "swap changed an occurrence count");
  detail::accept_entry(s);
}

inline std::vector<std::int64_t> occurrence_profile(const ExchangeState& s) {
  std::vector<std::int64_t> occ(static_cast<std::size_t>(s.n), 0);
  for (const auto& r : s.H)
    for (Vertex v : r) ++occ[static_cast<std::size_t>(v)];
  for (const auto& r : s.M)
    for (Vertex v : r) ++occ[static_cast<std::size_t>(v)];
  return occ;
}

inline void run_exchange(ExchangeState& s) {
  const auto before = occurrence_profile(s);
  while (!s.done()) exchange_step(s);
  s.stats.profile_preserved = occurrence_profile(s) == before;
  TCWC_ENSURE(s.stats.profile_preserved, "exchange changed the R-profile");
  for (const auto& [key, cnt] : s.ledger) TCWC_ENSURE(cnt == 1, "exchange left a pair covered twice");
  const std::int64_t cells = static_cast<std::int64_t>(s.M.size()) * (s.w - 2);
  TCWC_ENSURE(s.stats.steps == cells, "exchange did not visit every entry of M-bar");
}

// Initial M: the first column lists each b_j, each cbar_i and each c_j except
// the last k; the other cells take the residual occurrences row by row.
inline std::vector<std::vector<Vertex>> initial_m(const BuildPlan& p, const VertexLayout& L) {
  const std::int64_t w = p.w, t = p.t, k = p.a;
  const std::int64_t r_low = w - t, r_high = 2 * w - t - 1;
  const auto& gb = L.group("b");
  const auto& gbb = L.group("bbar");
  const auto& gcb = L.group("cbar");
  const auto& gc = L.group("c");

  std::vector<Vertex> first;
  for (Vertex v = gb.start; v < gb.start + gb.count; ++v) first.push_back(v);
  for (Vertex v = gcb.start; v < gcb.start + gcb.count; ++v) first.push_back(v);
  for (Vertex v = gc.start; v < gc.start + gc.count - static_cast<Vertex>(k); ++v) first.push_back(v);

  std::vector<Vertex> rest;
  auto repeat = [&](std::int64_t times, Vertex from, Vertex to) {
    for (Vertex v = from; v < to; ++v)
      for (std::int64_t q = 0; q < times; ++q) rest.push_back(v);
  };
  const Vertex excluded = gc.start + gc.count - static_cast<Vertex>(k);
  repeat(r_high - 2, gbb.start, gbb.start + gbb.count);
  repeat(r_high - 3, gb.start, gb.start + gb.count);
  repeat(r_low - 1, gcb.start, gcb.start + gcb.count);
  repeat(r_high - 1, gc.start, excluded);
  repeat(r_high, excluded, gc.start + gc.count);

  const std::int64_t m = static_cast<std::int64_t>(first.size());
  TCWC_ENSURE(m == p.n - L.group("Z").count - 2 * p.b - k, "first column of M has the wrong length");
  TCWC_ENSURE(static_cast<std::int64_t>(rest.size()) == m * (w - 2), "occupancy identity m(w-1) fails");
  std::vector<std::vector<Vertex>> M(static_cast<std::size_t>(m));
  std::size_t cur = 0;
  for (std::size_t i = 0; i < M.size(); ++i) {
    M[i].push_back(first[i]);
    for (std::int64_t j = 1; j < w - 1; ++j) M[i].push_back(rest[cur++]);
  }
  return M;
}

// Vertex groups Z_{n'}, bbar, b, cbar, c in that order, with h~, n', kappa and m.
inline VertexLayout general_t_layout(const BuildPlan& p) {
  require_regime(p, Branch::general_t);
  const std::int64_t w = p.w, t = p.t, k = p.a, r = p.b;
  const std::int64_t ht = p.h - w * (w + 2);
  const std::int64_t np = ht * (w - 1);
  const std::int64_t nc_bar = p.c - ht * (w - t);
  const std::int64_t kappa = p.n - p.c - ht * (t - 1) - r * (w - 2);
  TCWC_ENSURE(nc_bar >= 0, "negative number of cbar vertices");
  TCWC_ENSURE(kappa > k, "kappa must exceed k");

  VertexLayout L;
  L.n = static_cast<int>(p.n);
  L.add("Z", np);
  L.add("bbar", 2 * r);
  L.add("b", r * (w - 4));
  L.add("cbar", nc_bar);
  L.add("c", kappa);
  TCWC_ENSURE(L.partitions(), "layout does not partition [0, n)");
  L.landmarks = {{"h_tilde", ht}, {"n_prime", np}, {"kappa", kappa}, {"m", p.n - np - 2 * r - k}};
  return L;
}

inline BuildResult build_general_t(const BuildPlan& p) {
  const int n = static_cast<int>(p.n);
  const std::int64_t w = p.w, t = p.t, r = p.b;
  BuildResult res{p, TernaryCode(n, static_cast<int>(w), static_cast<int>(2 * w - 2)), {}, general_t_layout(p), {}};
  const VertexLayout& L = res.layout;
  const std::int64_t np = L.landmarks.at("n_prime");

  HFamily H = build_h_family(np, w, t);
  const auto bad = h_case_violations(H);
  for (std::size_t c = 0; c < bad.size(); ++c)
    TCWC_ENSURE(bad[c] == 0, "H violates packing case " + std::to_string(c + 1));

  std::vector<std::vector<Vertex>> Z;
  for (std::int64_t i = 1; i <= r; ++i) {
    std::vector<Vertex> row{L.at("bbar", 2 * i - 1), L.at("bbar", 2 * i)};
    for (std::int64_t j = (w - 4) * (i - 1) + 1; j <= (w - 4) * i; ++j) row.push_back(L.at("b", j));
    Z.push_back(std::move(row));
  }
  auto M = initial_m(p, L);
  TCWC_ENSURE(static_cast<std::int64_t>(M.size()) == L.landmarks.at("m"), "M has the wrong number of rows");

  ExchangeState s = make_exchange_state(n, static_cast<int>(w), std::move(H.rows), Z, std::move(M));
  run_exchange(s);
  res.exchange = s.stats;

  for (const auto& row : s.H) res.code.add(detail::row_word(n, row));
  for (const auto& row : s.Z)
    res.code.add(detail::make_word(n, std::vector<Vertex>(row.begin() + 2, row.end()), {row[0], row[1]}));
  for (const auto& row : s.M) res.code.add(detail::row_word(n, row));
  return res;
}

// ---------------------------------------------------------------------------

inline BuildResult build_S(const BuildPlan& p) {
  switch (p.branch) {
    case Branch::t1_div: return build_t1_divisible(p);
    case Branch::t0_div: return build_t0_divisible(p);
    case Branch::t0_nondiv: return build_t0_nondivisible(p);
    case Branch::t1_nondiv: return build_t1_nondivisible(p);
    case Branch::general_t: return build_general_t(p);
  }
  throw internal_error("unknown branch");
}

inline BuildResult build_S(std::int64_t n, std::int64_t w) { return build_S(plan(n, w)); }

struct Lemma3Report {
  bool ok = true;
  std::vector<std::string> failures;
  std::int64_t words_one_two = 0;  // type 1^{w-2} 2^1
  std::int64_t words_two_two = 0;  // type 1^{w-4} 2^2
  std::int64_t other_words = 0;
  std::int64_t at_r_min = 0;
  std::int64_t expected_at_r_min = 0;
  std::int64_t elsewhere = 0;       // vertices at neither R_m nor R_m + w - 1
  std::int64_t never_two = 0;       // vertices never 2-labelled

  void fail(std::string why) {
    ok = false;
    failures.push_back(std::move(why));
  }
};

// Sufficient conditions for S to extend to a code of size B(n)+n under plan p. With a leave E, R(v) is reduced by
// the E-degree of v and c grows by 2|E|/(w-1).
inline Lemma3Report lemma3_check(const TernaryCode& S, const BuildPlan& p, const std::vector<Edge>& E = {}) {
  Lemma3Report rep;
  const std::int64_t w = p.w;
  if (S.n() != p.n || S.w() != p.w) {
    rep.fail("code parameters do not match the plan");
    return rep;
  }
  VerificationReport v;
  try {
    v = verify_code(S);
  } catch (const code_error& e) {
    rep.fail(e.what());
    return rep;
  }
  if (!v.valid) rep.fail("not a valid (n, 2w-2, w) code");

  std::vector<std::vector<Vertex>> quads;
  for (const Codeword& c : S.words()) {
    const int twos = c.type().twos;
    if (twos == 1) ++rep.words_one_two;
    else if (twos == 2 && w >= 4) {
      ++rep.words_two_two;
      quads.push_back(c.support());
    } else ++rep.other_words;
  }
  if (rep.words_one_two != p.n - p.a - 2 * p.b)
    rep.fail("expected " + std::to_string(p.n - p.a - 2 * p.b) + " words of type 1^{w-2}2^1, found " +
             std::to_string(rep.words_one_two));
  if (rep.words_two_two != p.b)
    rep.fail("expected " + std::to_string(p.b) + " words of type 1^{w-4}2^2, found " + std::to_string(rep.words_two_two));
  if (rep.other_words != 0) rep.fail(std::to_string(rep.other_words) + " words of another type");

  std::vector<char> in_quad(static_cast<std::size_t>(p.n), 0);
  for (const auto& q : quads)
    for (Vertex x : q) {
      if (in_quad[static_cast<std::size_t>(x)]) rep.fail("supports of 1^{w-4}2^2 words intersect at " + std::to_string(x));
      in_quad[static_cast<std::size_t>(x)] = 1;
    }

  std::vector<std::int64_t> r(v.r_profile.begin(), v.r_profile.end());
  for (auto [a, b] : E) {
    if (a < 0 || b < 0 || a >= p.n || b >= p.n || a == b) {
      rep.fail("leave edge outside the vertex set");
      continue;
    }
    --r[static_cast<std::size_t>(a)];
    --r[static_cast<std::size_t>(b)];
  }
  rep.expected_at_r_min = p.c + (E.empty() ? 0 : 2 * static_cast<std::int64_t>(E.size()) / (w - 1));
  for (std::int64_t x : r) {
    if (x == p.r_min) ++rep.at_r_min;
    else if (x != p.r_min + w - 1) ++rep.elsewhere;
  }
  if (rep.at_r_min != rep.expected_at_r_min)
    rep.fail("expected " + std::to_string(rep.expected_at_r_min) + " vertices with R = R_m, found " +
             std::to_string(rep.at_r_min));
  if (rep.elsewhere != 0) rep.fail(std::to_string(rep.elsewhere) + " vertices with R outside {R_m, R_m + w - 1}");

  std::vector<char> two(static_cast<std::size_t>(p.n), 0);
  for (const Codeword& c : S.words())
    for (const Entry& e : c.entries())
      if (e.label == Label::two) two[static_cast<std::size_t>(e.position)] = 1;
  rep.never_two = std::count(two.begin(), two.end(), 0);

  if (!E.empty()) {
    std::unordered_map<std::uint64_t, char> covered;
    for (const Codeword& c : S.words()) {
      auto e = c.entries();
      for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) covered[pair_key(e[i].position, e[j].position)] = 1;
    }
    for (auto [a, b] : E)
      if (covered.count(pair_key(a, b))) rep.fail("leave edge " + std::to_string(a) + "-" + std::to_string(b) + " is covered by S");
  }
  return rep;
}

}  // namespace tcwc

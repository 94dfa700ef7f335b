#pragma once

// Ternary words, constant-weight codes in the l1 metric, and exact verification
// of the pairwise conditions that characterise distance 2w-2.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tcwc/error.hpp"

namespace tcwc {

using Vertex = std::int32_t;

enum class Label : std::uint8_t { one = 1, two = 2 };

struct Entry {
  Vertex position = 0;
  Label label = Label::one;

  friend bool operator==(const Entry&, const Entry&) = default;
};

// Type 1^ones 2^twos.
struct CodewordType {
  int ones = 0;
  int twos = 0;

  int weight() const { return ones + 2 * twos; }
  int support_size() const { return ones + twos; }

  friend bool operator==(const CodewordType&, const CodewordType&) = default;
};

inline std::uint64_t pair_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

inline std::pair<Vertex, Vertex> unpack_pair(std::uint64_t key) {
  return {static_cast<Vertex>(key >> 32), static_cast<Vertex>(key & 0xffffffffu)};
}

// A word of length n stored as its labeled support, sorted by position.
class Codeword {
 public:
  Codeword() = default;

  Codeword(int length, std::vector<Entry> entries) : length_(length), entries_(std::move(entries)) {
    if (length_ < 0) throw code_error("codeword length must be nonnegative");
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.position < b.position; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const Entry& e = entries_[i];
      if (e.position < 0 || e.position >= length_)
        throw code_error("position " + std::to_string(e.position) + " outside [0, " +
                         std::to_string(length_) + ")");
      if (e.label != Label::one && e.label != Label::two) throw code_error("label must be 1 or 2");
      if (i > 0 && entries_[i - 1].position == e.position)
        throw code_error("position " + std::to_string(e.position) + " listed twice");
    }
  }

  static Codeword from_string(std::string_view digits) {
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      switch (digits[i]) {
        case '0': break;
        case '1': entries.push_back({static_cast<Vertex>(i), Label::one}); break;
        case '2': entries.push_back({static_cast<Vertex>(i), Label::two}); break;
        default:
          throw code_error(std::string("invalid ternary digit '") + digits[i] + "'");
      }
    }
    return Codeword(static_cast<int>(digits.size()), std::move(entries));
  }

  static Codeword from_vector(std::span<const std::uint8_t> symbols) {
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (symbols[i] > 2) throw code_error("ternary symbol out of range");
      if (symbols[i] != 0) entries.push_back({static_cast<Vertex>(i), static_cast<Label>(symbols[i])});
    }
    return Codeword(static_cast<int>(symbols.size()), std::move(entries));
  }

  int length() const { return length_; }
  std::span<const Entry> entries() const { return entries_; }
  int support_size() const { return static_cast<int>(entries_.size()); }

  CodewordType type() const {
    CodewordType t;
    for (const Entry& e : entries_) (e.label == Label::two ? t.twos : t.ones) += 1;
    return t;
  }

  int weight() const { return type().weight(); }

  int at(Vertex p) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                               [](const Entry& e, Vertex q) { return e.position < q; });
    return (it != entries_.end() && it->position == p) ? static_cast<int>(it->label) : 0;
  }

  std::vector<std::uint8_t> to_vector() const {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(length_), 0);
    for (const Entry& e : entries_) v[static_cast<std::size_t>(e.position)] = static_cast<std::uint8_t>(e.label);
    return v;
  }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(length_), '0');
    for (const Entry& e : entries_)
      s[static_cast<std::size_t>(e.position)] = e.label == Label::two ? '2' : '1';
    return s;
  }

  std::vector<Vertex> support() const {
    std::vector<Vertex> s;
    s.reserve(entries_.size());
    for (const Entry& e : entries_) s.push_back(e.position);
    return s;
  }

  friend bool operator==(const Codeword&, const Codeword&) = default;

 private:
  int length_ = 0;
  std::vector<Entry> entries_;
};

inline int l1_distance(const Codeword& u, const Codeword& v) {
  if (u.length() != v.length())
    throw code_error("l1_distance: lengths " + std::to_string(u.length()) + " and " +
                     std::to_string(v.length()) + " differ");
  auto a = u.entries();
  auto b = v.entries();
  std::size_t i = 0, j = 0;
  int d = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].position < b[j].position)) {
      d += static_cast<int>(a[i++].label);
    } else if (i == a.size() || b[j].position < a[i].position) {
      d += static_cast<int>(b[j++].label);
    } else {
      d += std::abs(static_cast<int>(a[i++].label) - static_cast<int>(b[j++].label));
    }
  }
  return d;
}

inline int weight(const Codeword& u) { return u.weight(); }
inline CodewordType codeword_type(const Codeword& u) { return u.type(); }

// An (n, d, w)_3 code candidate. Word lengths are enforced on insertion; weights
// and distinctness are what verify_code checks.
class TernaryCode {
 public:
  TernaryCode() = default;
  TernaryCode(int n, int w, int d) : n_(n), w_(w), d_(d) {
    if (n < 0 || w < 0 || d < 0) throw parameter_error("code parameters must be nonnegative");
  }
  TernaryCode(int n, int w, int d, std::vector<Codeword> words) : TernaryCode(n, w, d) {
    words_.reserve(words.size());
    for (auto& c : words) add(std::move(c));
  }

  void add(Codeword c) {
    if (c.length() != n_)
      throw code_error("word of length " + std::to_string(c.length()) + " in a code of length " +
                       std::to_string(n_));
    words_.push_back(std::move(c));
  }

  int n() const { return n_; }
  int w() const { return w_; }
  int d() const { return d_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<Codeword>& words() const { return words_; }
  const Codeword& operator[](std::size_t i) const { return words_[i]; }

 private:
  int n_ = 0;
  int w_ = 0;
  int d_ = 0;
  std::vector<Codeword> words_;
};

// Quantities from the double-counting argument on words that carry a 2.
struct ColoringAudit {
  std::int64_t s = 0;                  // non-isolated vertices of the union of cliques with b > 0
  std::vector<std::int64_t> y;         // y[i] = number of words of type 1^{w-2i} 2^i
  std::int64_t weighted_twos = 0;      // sum_{i>0} i * y(i)
  bool twos_within_s = true;           // sum_{i>0} i * y(i) <= s
  bool double_count_ok = true;         // sum_v sum_i i y_v(i) == sum_i i y(i) (w - i)
  bool balanced = false;
  bool kv_integral = true;             // checked only when balanced
  std::vector<std::int64_t> k;         // per-vertex R(v)/(w-1), filled when balanced and integral
};

struct VerificationReport {
  int n = 0;
  int w = 0;
  int d = 0;
  std::size_t size = 0;
  bool valid = false;
  std::optional<int> min_distance;     // empty for codes with fewer than two words
  bool min_distance_exact = true;
  std::size_t pairs_checked = 0;
  std::size_t condition_a_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> condition_a_violations;
  std::size_t condition_b_count = 0;
  std::vector<Vertex> condition_b_violations;
  std::vector<std::pair<std::size_t, std::size_t>> duplicates;
  std::vector<std::size_t> type_counts;  // indexed by number of 2s
  bool balanced = false;
  std::int64_t covered_edges = 0;
  std::int64_t uncovered_edges = 0;
  std::vector<int> r_profile;
  ColoringAudit audit;

  bool meets_declared_distance() const { return !min_distance || *min_distance >= d; }
};

struct VerifyOptions {
  std::size_t exact_limit = 5000;
  std::size_t sampled_pairs = 1'000'000;
  std::uint64_t seed = 0x5eed;
  std::size_t max_listed = 256;
};

namespace detail {

inline void check_weights(const TernaryCode& code) {
  for (std::size_t i = 0; i < code.size(); ++i)
    if (code[i].weight() != code.w())
      throw code_error("word " + std::to_string(i) + " (" + code[i].to_string() + ") has weight " +
                       std::to_string(code[i].weight()) + ", expected " + std::to_string(code.w()));
}

inline std::vector<int> r_profile(const TernaryCode& code) {
  std::vector<int> r(static_cast<std::size_t>(code.n()), 0);
  for (const Codeword& c : code.words()) {
    const int twos = c.type().twos;
    if (twos == 0) continue;
    for (const Entry& e : c.entries()) r[static_cast<std::size_t>(e.position)] += twos;
  }
  return r;
}

}  // namespace detail

inline ColoringAudit two_coloring_audit(const TernaryCode& code, int w) {
  ColoringAudit a;
  const auto n = static_cast<std::size_t>(code.n());
  a.y.assign(static_cast<std::size_t>(std::max(w, 0) / 2 + 1), 0);
  std::vector<char> touched(n, 0);
  std::vector<std::int64_t> vertex_sum(n, 0);
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  for (const Codeword& c : code.words()) {
    const CodewordType t = c.type();
    if (static_cast<std::size_t>(t.twos) >= a.y.size()) a.y.resize(static_cast<std::size_t>(t.twos) + 1, 0);
    a.y[static_cast<std::size_t>(t.twos)] += 1;
    if (t.twos == 0) continue;
    rhs += static_cast<std::int64_t>(t.twos) * t.support_size();
    for (const Entry& e : c.entries()) {
      vertex_sum[static_cast<std::size_t>(e.position)] += t.twos;
      lhs += t.twos;
      if (c.support_size() >= 2) touched[static_cast<std::size_t>(e.position)] = 1;
    }
  }
  a.s = std::count(touched.begin(), touched.end(), 1);
  for (std::size_t i = 1; i < a.y.size(); ++i) a.weighted_twos += static_cast<std::int64_t>(i) * a.y[i];
  a.twos_within_s = a.weighted_twos <= a.s;
  a.double_count_ok = lhs == rhs;

  std::int64_t clique_edges = 0;
  for (const Codeword& c : code.words())
    clique_edges += static_cast<std::int64_t>(c.support_size()) * (c.support_size() - 1) / 2;
  const auto nn = static_cast<std::int64_t>(n);
  // Equal totals only mean a decomposition when no edge is covered twice; callers
  // that need the exact statement use verify_code, which has the pairwise check.
  a.balanced = clique_edges == nn * (nn - 1) / 2;
  if (a.balanced && w > 1) {
    a.k.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (vertex_sum[v] % (w - 1) != 0) {
        a.kv_integral = false;
        a.k.clear();
        break;
      }
      a.k.push_back(vertex_sum[v] / (w - 1));
    }
  }
  return a;
}

// Checks (a) pairwise support intersections of size <= 1 and (b) each position
// carries label 2 in at most one word, recomputes the minimum l1 distance
// independently and enforces that the two agree.
inline VerificationReport verify_code(const TernaryCode& code, const VerifyOptions& opt = {}) {
  detail::check_weights(code);
  const std::size_t count = code.size();
  const auto n = static_cast<std::size_t>(code.n());
  VerificationReport rep;
  rep.n = code.n();
  rep.w = code.w();
  rep.d = code.d();
  rep.size = count;

  std::vector<std::vector<std::uint32_t>> by_position(n);
  std::vector<std::vector<std::uint32_t>> twos_at(n);
  for (std::size_t i = 0; i < count; ++i) {
    const CodewordType t = code[i].type();
    if (static_cast<std::size_t>(t.twos) >= rep.type_counts.size()) rep.type_counts.resize(t.twos + 1, 0);
    rep.type_counts[static_cast<std::size_t>(t.twos)] += 1;
    for (const Entry& e : code[i].entries()) {
      by_position[static_cast<std::size_t>(e.position)].push_back(static_cast<std::uint32_t>(i));
      if (e.label == Label::two) twos_at[static_cast<std::size_t>(e.position)].push_back(static_cast<std::uint32_t>(i));
    }
  }

  // Witness pairs that must appear in the distance recomputation.
  std::vector<std::pair<std::size_t, std::size_t>> witnesses;

  std::vector<std::uint32_t> shared(count, 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t u = 0; u < count; ++u) {
    touched.clear();
    for (const Entry& e : code[u].entries())
      for (std::uint32_t v : by_position[static_cast<std::size_t>(e.position)])
        if (v > u && shared[v]++ == 0) touched.push_back(v);
    for (std::uint32_t v : touched) {
      if (shared[v] >= 2) {
        ++rep.condition_a_count;
        if (rep.condition_a_violations.size() < opt.max_listed) rep.condition_a_violations.emplace_back(u, v);
        if (witnesses.size() < opt.max_listed) witnesses.emplace_back(u, v);
      }
      if (static_cast<int>(shared[v]) == code[u].support_size() && code[u] == code[v] &&
          rep.duplicates.size() < opt.max_listed)
        rep.duplicates.emplace_back(u, v);
      shared[v] = 0;
    }
  }
  // A duplicate of a support-1 word (w <= 2) shares no edge; it still needs a witness.
  for (auto [u, v] : rep.duplicates) witnesses.emplace_back(u, v);

  for (std::size_t p = 0; p < n; ++p) {
    if (twos_at[p].size() >= 2) {
      ++rep.condition_b_count;
      if (rep.condition_b_violations.size() < opt.max_listed)
        rep.condition_b_violations.push_back(static_cast<Vertex>(p));
      if (witnesses.size() < 2 * opt.max_listed) witnesses.emplace_back(twos_at[p][0], twos_at[p][1]);
    }
  }
  rep.valid = rep.condition_a_count == 0 && rep.condition_b_count == 0 && rep.duplicates.empty();

  if (count >= 2) {
    int best = std::numeric_limits<int>::max();
    if (count <= opt.exact_limit) {
      for (std::size_t u = 0; u < count; ++u)
        for (std::size_t v = u + 1; v < count; ++v) best = std::min(best, l1_distance(code[u], code[v]));
      rep.pairs_checked = count * (count - 1) / 2;
    } else {
      rep.min_distance_exact = false;
      std::mt19937_64 rng(opt.seed);
      std::uniform_int_distribution<std::size_t> pick(0, count - 1);
      for (std::size_t s = 0; s < opt.sampled_pairs; ++s) {
        std::size_t u = pick(rng), v = pick(rng);
        if (u == v) continue;
        best = std::min(best, l1_distance(code[u], code[v]));
        ++rep.pairs_checked;
      }
      for (auto [u, v] : witnesses) {
        best = std::min(best, l1_distance(code[u], code[v]));
        ++rep.pairs_checked;
      }
    }
    if (best != std::numeric_limits<int>::max()) rep.min_distance = best;
    const bool distance_ok = rep.min_distance && *rep.min_distance >= 2 * code.w() - 2;
    if (rep.min_distance && distance_ok != rep.valid)
      throw internal_error("pairwise conditions (" + std::string(rep.valid ? "hold" : "fail") +
                           ") disagree with minimum distance " + std::to_string(*rep.min_distance));
  }

  rep.r_profile = detail::r_profile(code);

  std::int64_t clique_edges = 0;
  for (const Codeword& c : code.words())
    clique_edges += static_cast<std::int64_t>(c.support_size()) * (c.support_size() - 1) / 2;
  if (rep.condition_a_count == 0) {
    rep.covered_edges = clique_edges;
  } else {
    std::unordered_set<std::uint64_t> pairs;
    for (const Codeword& c : code.words()) {
      auto e = c.entries();
      for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) pairs.insert(pair_key(e[i].position, e[j].position));
    }
    rep.covered_edges = static_cast<std::int64_t>(pairs.size());
  }
  const auto nn = static_cast<std::int64_t>(n);
  rep.uncovered_edges = nn * (nn - 1) / 2 - rep.covered_edges;
  rep.balanced = rep.condition_a_count == 0 && rep.uncovered_edges == 0;

  rep.audit = two_coloring_audit(code, code.w());
  rep.audit.balanced = rep.balanced;
  if (!rep.balanced) {
    rep.audit.kv_integral = true;
    rep.audit.k.clear();
  }
  return rep;
}

}  // namespace tcwc

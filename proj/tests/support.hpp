#pragma once

// Independent recomputations and small random generators shared by the tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tcwc/core.hpp"
#include "tcwc/packing.hpp"

namespace tcwc_test {

// l1 distance straight from the digit strings.
inline int string_distance(const std::string& a, const std::string& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs((a[i] - '0') - (b[i] - '0'));
  return d;
}

inline int min_distance_bruteforce(const tcwc::TernaryCode& c) {
  int best = 1 << 30;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      best = std::min(best, string_distance(c[i].to_string(), c[j].to_string()));
  return best;
}

// Conditions (a) and (b) from the digit strings.
inline bool packing_conditions_bruteforce(const tcwc::TernaryCode& c) {
  const int n = c.n();
  std::vector<int> twos(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::string s = c[i].to_string();
    for (int p = 0; p < n; ++p)
      if (s[static_cast<std::size_t>(p)] == '2' && ++twos[static_cast<std::size_t>(p)] > 1) return false;
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      const std::string t = c[j].to_string();
      int common = 0;
      for (int p = 0; p < n; ++p) common += s[static_cast<std::size_t>(p)] != '0' && t[static_cast<std::size_t>(p)] != '0';
      if (common > 1) return false;
    }
  }
  return true;
}

// Uniform random word of length n and l1-weight w (n >= ceil(w/2)).
inline tcwc::Codeword random_word(std::mt19937_64& rng, int n, int w) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(n), 0);
  int left = w;
  while (left > 0) {
    const auto p = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, n - 1)(rng));
    const int room = 2 - v[p];
    if (room == 0) continue;
    const int add = std::min({room, left, std::uniform_int_distribution<int>(1, 2)(rng)});
    v[p] = static_cast<std::uint8_t>(v[p] + add);
    left -= add;
  }
  return tcwc::Codeword::from_vector(v);
}

// Random code with distinct words; with probability 1/2 words that break
// (a) or (b) are rejected so valid codes show up often enough.
inline tcwc::TernaryCode random_code(std::mt19937_64& rng, int n, int w, int size) {
  tcwc::TernaryCode c(n, w, 2 * w - 2);
  const bool tame = rng() % 2 == 0;
  std::set<std::string> seen;
  for (int tries = 0; static_cast<int>(c.size()) < size && tries < 200; ++tries) {
    tcwc::Codeword x = random_word(rng, n, w);
    if (!seen.insert(x.to_string()).second) continue;
    if (tame) {
      tcwc::TernaryCode probe(n, w, 2 * w - 2, c.words());
      probe.add(x);
      if (!packing_conditions_bruteforce(probe)) continue;
    }
    c.add(x);
  }
  return c;
}

// Random graph on n vertices with edge probability p.
inline tcwc::ResidualGraph random_graph(std::mt19937_64& rng, int n, double p) {
  std::vector<tcwc::Edge> e;
  std::bernoulli_distribution coin(p);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) e.emplace_back(u, v);
  return tcwc::ResidualGraph::from_edges(n, e);
}

}  // namespace tcwc_test

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "tcwc/builder.hpp"
#include "tcwc/packing.hpp"

using namespace tcwc;

namespace {

std::map<int, std::int64_t> profile_histogram(const TernaryCode& c) {
  std::map<int, std::int64_t> h;
  for (int r : verify_code(c).r_profile) ++h[r];
  return h;
}

std::int64_t never_two_labelled(const TernaryCode& c) {
  std::vector<char> two(static_cast<std::size_t>(c.n()), 0);
  for (const Codeword& x : c.words())
    for (const Entry& e : x.entries())
      if (e.label == Label::two) two[static_cast<std::size_t>(e.position)] = 1;
  return std::count(two.begin(), two.end(), 0);
}

void expect_common_invariants(const BuildResult& r) {
  const BuildPlan& p = r.plan;
  const auto l3 = lemma3_check(r.code, p, r.leave_edges);
  EXPECT_TRUE(l3.ok) << (l3.failures.empty() ? "" : l3.failures.front());
  EXPECT_TRUE(r.layout.partitions());
  // Sum of R(v) over v is y(w-1) + 2z(w-2).
  const auto v = verify_code(r.code);
  std::int64_t sum = 0;
  for (int x : v.r_profile) sum += x;
  EXPECT_EQ(sum, p.y * (p.w - 1) + 2 * p.z * (p.w - 2));
  // Every vertex is 2-labelled at most once; k never.
  EXPECT_EQ(v.condition_b_count, 0u);
  EXPECT_EQ(never_two_labelled(r.code), p.a);
  const auto audit = two_coloring_audit(r.code, static_cast<int>(p.w));
  EXPECT_TRUE(audit.twos_within_s);
}

}  // namespace

TEST(Regime, Violations) {
  EXPECT_TRUE(regime_violation(plan(25, 5)).has_value());
  EXPECT_THROW(build_S(25, 5), regime_error);
  const auto why = regime_violation(plan(29, 5));
  ASSERT_TRUE(why);
  EXPECT_NE(why->find("requires h > 5m = 1255"), std::string::npos);
  EXPECT_THROW(build_S(29, 5), regime_error);
  EXPECT_FALSE(regime_violation(plan(5029, 5)).has_value());
}

TEST(Regime, BuilderRefusesForeignBranch) { EXPECT_THROW(build_t0_divisible(plan(125, 5)), parameter_error); }

TEST(T1Div, N125) {
  const auto r = build_S(125, 5);
  EXPECT_EQ(r.plan.branch, Branch::t1_div);
  EXPECT_EQ(r.code.size(), 125u);
  EXPECT_EQ(profile_histogram(r.code), (std::map<int, std::int64_t>{{4, 125}}));
  EXPECT_EQ(r.plan.c, 0);
  EXPECT_TRUE(r.leave_edges.empty());
  expect_common_invariants(r);
}

TEST(T0Div, N360) {
  const auto r = build_S(360, 5);
  EXPECT_EQ(r.plan.branch, Branch::t0_div);
  EXPECT_EQ(r.plan.h, 90);
  EXPECT_EQ(r.code.size(), 360u);
  for (const Codeword& c : r.code.words()) EXPECT_EQ(c.type(), (CodewordType{3, 1}));
  EXPECT_EQ(profile_histogram(r.code), (std::map<int, std::int64_t>{{1, 90}, {5, 270}}));
  EXPECT_EQ(r.layout.group("Z").count, 270);
  expect_common_invariants(r);
}

// The h words s_i have pairwise disjoint supports covering all n vertices.
TEST(T0Div, PartitionWords) {
  const auto r = build_S(360, 5);
  std::vector<int> hits(360, 0);
  for (std::size_t i = 270; i < r.code.size(); ++i)
    for (Vertex v : r.code[i].support()) ++hits[static_cast<std::size_t>(v)];
  EXPECT_EQ(hits, std::vector<int>(360, 1));
}

TEST(T0Div, WithK) {
  // Find an in-regime T0_DIV point with k > 0 at w = 6.
  for (std::int64_t n = 600; n < 3000; n += 5) {
    const auto p = plan(n, 6);
    if (p.branch != Branch::t0_div || p.a == 0 || regime_violation(p)) continue;
    expect_common_invariants(build_S(p));
    return;
  }
  FAIL() << "no T0_DIV point with k > 0";
}

TEST(T0NonDiv, N504) {
  const auto r = build_S(504, 5);
  EXPECT_EQ(r.plan.branch, Branch::t0_nondiv);
  const auto v = verify_code(r.code);
  EXPECT_TRUE(v.valid);
  ASSERT_GE(v.type_counts.size(), 3u);
  EXPECT_EQ(v.type_counts[1], 500u);
  EXPECT_EQ(v.type_counts[2], 2u);
  auto h = profile_histogram(r.code);
  EXPECT_EQ(h[1], 127);
  EXPECT_EQ(h[5], 504 - 127);
  for (const char* k : {"n0", "alpha", "beta", "gamma", "n_prime"}) EXPECT_TRUE(r.layout.landmarks.count(k)) << k;
  expect_common_invariants(r);
}

// Each bbar is 2-labelled once (in Z) and 1-labelled w-2 times.
TEST(T0NonDiv, BbarOccurrences) {
  const auto r = build_S(504, 5);
  const auto& g = r.layout.group("bbar");
  for (Vertex v = g.start; v < g.start + g.count; ++v) {
    int ones = 0, twos = 0;
    for (const Codeword& c : r.code.words()) {
      const int s = c.at(v);
      ones += s == 1;
      twos += s == 2;
    }
    EXPECT_EQ(twos, 1);
    EXPECT_EQ(ones, 3);
  }
}

TEST(T0NonDiv, W7WithK) {
  for (std::int64_t n = 2100; n < 6000; n += 6) {
    const auto p = plan(n, 7);
    if (p.branch != Branch::t0_nondiv || p.a == 0 || regime_violation(p)) continue;
    expect_common_invariants(build_S(p));
    return;
  }
  FAIL() << "no T0_NONDIV point with k > 0";
}

TEST(T1NonDiv, N5029) {
  const auto r = build_S(5029, 5);
  EXPECT_EQ(r.plan.branch, Branch::t1_nondiv);
  EXPECT_EQ(r.code.size(), 5029u);
  ASSERT_EQ(r.leave_edges.size(), 2u);
  EXPECT_TRUE(verify_code(r.code).valid);
  std::set<Vertex> touch;
  for (auto [u, v] : r.leave_edges) touch.insert({u, v});
  const Vertex inf = r.layout.at("inf", 1);
  EXPECT_EQ(touch, (std::set<Vertex>{0, 1, 2, inf}));
  expect_common_invariants(r);
}

TEST(T1NonDiv, SplicedWordsDisjoint) {
  const auto r = build_S(5029, 5);
  const auto& s1 = r.code[r.code.size() - 2];
  const auto& s2 = r.code[r.code.size() - 1];
  std::set<Vertex> all;
  for (Vertex v : s1.support()) all.insert(v);
  for (Vertex v : s2.support()) all.insert(v);
  EXPECT_EQ(all.size(), 8u);
}

TEST(T1NonDiv, ResidualDegreesOfSplicePoints) {
  const auto r = build_S(5029, 5);
  const auto G = residual_graph(5029, r.code, r.leave_edges);
  for (Vertex v : {0, 1, 2}) {
    EXPECT_EQ(G.degree(v), 5029 - 1 - 5 * 3 - 1);
    EXPECT_EQ(G.degree(v) % 4, 0);
  }
}

TEST(HFamily, W5T2) {
  const std::int64_t ht = 265, np = ht * 4;
  const TernaryCode H = build_H(np, 5, 2);
  EXPECT_EQ(H.size(), 1060u);
  EXPECT_TRUE(verify_code(H).valid);
  auto h = profile_histogram(H);
  EXPECT_EQ(h[3], 795);
  EXPECT_EQ(h[7], 265);
  const auto fam = build_h_family(np, 5, 2);
  EXPECT_EQ(h_case_violations(fam), (std::array<std::int64_t, 5>{}));
  EXPECT_LT((5 - 2) * (5 - 2 - 1), 2 * 25);
}

// Each vertex lies in w-t words b_{i,j}, plus w-1 words a_{i,j} at residue <= t-2.
TEST(HFamily, DegreeCounts) {
  for (std::int64_t w : {5, 6, 7})
    for (std::int64_t t = 2; t <= w - 2; ++t) {
      const std::int64_t ht = 2 * w * w * w + 1, np = ht * (w - 1);
      const auto fam = build_h_family(np, w, t);
      std::vector<std::int64_t> a_deg(static_cast<std::size_t>(np), 0), b_deg(static_cast<std::size_t>(np), 0);
      for (std::size_t i = 0; i < fam.rows.size(); ++i)
        for (Vertex v : fam.rows[i]) ++(fam.origin[i][0] == 0 ? a_deg : b_deg)[static_cast<std::size_t>(v)];
      for (std::int64_t v = 0; v < np; ++v) {
        EXPECT_EQ(b_deg[static_cast<std::size_t>(v)], w - t);
        EXPECT_EQ(a_deg[static_cast<std::size_t>(v)], v % (w - 1) <= t - 2 ? w - 1 : 0);
      }
      EXPECT_EQ(h_case_violations(fam), (std::array<std::int64_t, 5>{}));
    }
}

TEST(HFamily, Preconditions) {
  EXPECT_THROW(build_H(100 * 4, 5, 2), regime_error);
  EXPECT_THROW(build_H(300 * 4, 5, 1), parameter_error);
  EXPECT_THROW(build_H(1201, 5, 2), parameter_error);
}

TEST(GeneralT, N1202LayoutAndHonestExchangeFailure) {
  const auto p = plan(1202, 5);
  const auto L = general_t_layout(p);
  EXPECT_EQ(L.landmarks.at("m"), 138);
  EXPECT_EQ(L.landmarks.at("h_tilde"), 265);
  const auto M = initial_m(p, L);
  EXPECT_EQ(M.size(), 138u);
  // m(w-1) = sum over B of (R-2) plus sum over C of R.
  std::int64_t occ = 0;
  for (const auto& row : M) occ += static_cast<std::int64_t>(row.size());
  EXPECT_EQ(occ, 552);
  try {
    build_S(p);
    FAIL() << "exchange unexpectedly succeeded";
  } catch (const exchange_error& e) {
    EXPECT_NE(std::string(e.what()).find("n too small for exchange"), std::string::npos);
  }
}

TEST(GeneralT, SucceedsAtMeasuredPoints) {
  for (std::int64_t n : {4179, 7874}) {
    const auto r = build_S(n, 5);
    EXPECT_EQ(r.plan.branch, Branch::general_t);
    EXPECT_TRUE(r.exchange.profile_preserved);
    EXPECT_EQ(r.exchange.steps, r.exchange.m * (5 - 2));
    EXPECT_GT(r.exchange.swaps, 0);
    expect_common_invariants(r);
  }
}

TEST(Exchange, NonConflictingEntryOnlyAdvancesCursor) {
  ExchangeState s = make_exchange_state(6, 4, {}, {}, {{0, 1, 2}, {3, 4, 5}});
  exchange_step(s);
  EXPECT_EQ(s.row, 0u);
  EXPECT_EQ(s.col, 2u);
  EXPECT_EQ(s.stats.swaps, 0);
  EXPECT_EQ(s.M[0], (std::vector<Vertex>{0, 1, 2}));
}

TEST(Exchange, ConflictSwapsWithDisjointHRow) {
  // M row repeats vertex 1; H row {6,7,8} is far from everything in M.
  ExchangeState s = make_exchange_state(9, 4, {{6, 7, 8}}, {}, {{0, 1, 1}});
  run_exchange(s);
  EXPECT_EQ(s.stats.swaps, 1);
  EXPECT_EQ(s.M[0], (std::vector<Vertex>{0, 1, 8}));
  EXPECT_EQ(s.H[0], (std::vector<Vertex>{6, 7, 1}));
  EXPECT_TRUE(s.stats.profile_preserved);
}

TEST(Exchange, NoDisjointRowFails) {
  ExchangeState s = make_exchange_state(3, 4, {}, {}, {{0, 1, 1}});
  EXPECT_THROW(run_exchange(s), exchange_error);
}

TEST(ExtensionCheck, DetectsTampering) {
  const auto r = build_S(125, 5);
  TernaryCode dropped(125, 5, 8, std::vector<Codeword>(r.code.words().begin() + 1, r.code.words().end()));
  EXPECT_FALSE(lemma3_check(dropped, r.plan).ok);

  std::vector<Codeword> words = r.code.words();
  std::string s = words[0].to_string();
  s[s.find('2')] = '1';
  words[0] = Codeword::from_string(s);
  const TernaryCode relabelled(125, 5, 8, words);
  EXPECT_FALSE(lemma3_check(relabelled, r.plan).ok);
}

TEST(Layout, TextListsGroupsAndLandmarks) {
  const auto r = build_S(504, 5);
  const std::string t = to_text(r.layout);
  EXPECT_NE(t.find("group Z 0 "), std::string::npos);
  EXPECT_NE(t.find("landmark alpha "), std::string::npos);
}

#include <gtest/gtest.h>

#include <cstdlib>
#include <set>

#include "support.hpp"
#include "tcwc/oracle.hpp"

using namespace tcwc;

TEST(Words, EnumerationMatchesCount) {
  for (int n = 1; n <= 8; ++n)
    for (int w = 1; w <= 6; ++w) {
      const auto words = weight_w_words(n, w);
      EXPECT_EQ(words.size(), count_weight_w_words(n, w));
      std::set<std::string> distinct;
      for (const auto& c : words) {
        EXPECT_EQ(c.weight(), w);
        distinct.insert(c.to_string());
      }
      EXPECT_EQ(distinct.size(), words.size());
      // Lexicographic in vector form.
      for (std::size_t i = 1; i < words.size(); ++i) EXPECT_LT(words[i - 1].to_string(), words[i].to_string());
    }
}

TEST(Oracle, Examples) {
  EXPECT_EQ(max_code_bruteforce(3, 8, 5).size, 1);
  EXPECT_EQ(max_code_bruteforce(2, 4, 3).size, 1);
  EXPECT_EQ(max_code_bruteforce(2, 4, 3).candidates, 2u);
}

// Exact A3 via plain subset enumeration on instances small enough for it.
TEST(Oracle, AgreesWithSubsetEnumeration) {
  for (auto [n, w, d] : {std::tuple{3, 3, 4}, std::tuple{4, 3, 4}, std::tuple{4, 4, 6}, std::tuple{3, 2, 2},
                         std::tuple{4, 3, 2}, std::tuple{4, 2, 3}}) {
    const auto words = weight_w_words(n, w);
    ASSERT_LE(words.size(), 20u);
    std::int64_t best = 0;
    for (std::uint32_t s = 0; s < (1u << words.size()); ++s) {
      bool ok = true;
      for (std::size_t i = 0; i < words.size() && ok; ++i)
        for (std::size_t j = i + 1; j < words.size() && ok; ++j)
          if ((s >> i & 1u) && (s >> j & 1u) && l1_distance(words[i], words[j]) < d) ok = false;
      if (ok) best = std::max<std::int64_t>(best, std::popcount(s));
    }
    EXPECT_EQ(max_code_bruteforce(n, d, w).size, best) << n << " " << w << " " << d;
  }
}

TEST(Oracle, BoundedByUpperBoundWithValidWitness) {
  for (int w = 3; w <= 5; ++w)
    for (int n = 1; n <= 8; ++n) {
      const auto r = max_code_bruteforce(n, 2 * w - 2, w);
      EXPECT_LE(r.size, upper_bound(n, w)) << n << " " << w;
      EXPECT_EQ(static_cast<std::int64_t>(r.witness.size()), r.size);
      if (r.witness.size() >= 2) {
        const auto v = verify_code(r.witness);
        EXPECT_TRUE(v.valid);
        EXPECT_GE(*v.min_distance, 2 * w - 2);
      }
    }
}

TEST(Oracle, IndependentOfOrderAndBound) {
  for (auto [n, w] : {std::pair{7, 3}, std::pair{7, 4}, std::pair{8, 5}}) {
    const auto base = max_code_bruteforce(n, 2 * w - 2, w).size;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      OracleOptions o;
      o.seed = seed;
      EXPECT_EQ(max_code_bruteforce(n, 2 * w - 2, w, o).size, base);
      o.bound = CliqueBound::coloring;
      EXPECT_EQ(max_code_bruteforce(n, 2 * w - 2, w, o).size, base);
    }
    OracleOptions t;
    t.bound = CliqueBound::trivial;
    if (n <= 7) {
      EXPECT_EQ(max_code_bruteforce(n, 2 * w - 2, w, t).size, base);
    }
  }
}

TEST(Oracle, OtherDistances) {
  // d above 2w-2 only removes edges; d below it is the plain clique search.
  const auto tight = max_code_bruteforce(6, 4, 3).size;
  EXPECT_LE(max_code_bruteforce(6, 6, 3).size, tight);
  EXPECT_GE(max_code_bruteforce(6, 2, 3).size, tight);
  const auto r = max_code_bruteforce(6, 2, 3);
  EXPECT_GE(tcwc_test::min_distance_bruteforce(r.witness), 2);
}

TEST(Oracle, Guards) {
  EXPECT_THROW(max_code_bruteforce(13, 4, 3), guard_error);
  OracleOptions o;
  o.guard = 10;
  EXPECT_THROW(max_code_bruteforce(6, 4, 3, o), guard_error);
  EXPECT_THROW(max_code_bruteforce(0, 4, 3), parameter_error);
}

TEST(Oracle, GuardFromEnvironment) {
  ::setenv("TCWC_ORACLE_GUARD", "7", 1);
  EXPECT_EQ(oracle_guard(), 7u);
  EXPECT_THROW(max_code_bruteforce(5, 4, 3), guard_error);
  ::setenv("TCWC_ORACLE_GUARD", "junk", 1);
  EXPECT_EQ(oracle_guard(), default_oracle_guard);
  ::unsetenv("TCWC_ORACLE_GUARD");
}

TEST(ResourceBound, LpVertices) {
  // w = 3: types (3 pairs, 0 twos) and (1 pair, 1 two).
  const std::vector<std::pair<std::int64_t, std::int64_t>> t3{{3, 0}, {1, 1}};
  EXPECT_EQ(detail::resource_bound(t3, 36, 9), 18);
  EXPECT_EQ(detail::resource_bound(t3, 10, 0), 3);
  EXPECT_EQ(detail::resource_bound(t3, 10, 20), 10);
}

TEST(Balanced, InfeasibleCasesAreNeverFound) {
  for (int w : {3, 5, 7})
    for (int n = 1; n <= 9; ++n) {
      if (balanced_feasibility(n, w).feasible) continue;
      EXPECT_FALSE(balanced_search_bruteforce(n, w).exists) << n << " " << w;
    }
  EXPECT_FALSE(balanced_feasibility(9, 5).feasible);
}

TEST(Balanced, KnownInstances) {
  EXPECT_TRUE(balanced_search_bruteforce(7, 3).exists);
  EXPECT_TRUE(balanced_search_bruteforce(7, 4).exists);
  EXPECT_TRUE(balanced_search_bruteforce(3, 5).exists);
  EXPECT_FALSE(balanced_search_bruteforce(2, 5).exists);
  EXPECT_FALSE(balanced_search_bruteforce(8, 5).exists);
  EXPECT_THROW(balanced_search_bruteforce(11, 5), guard_error);
}

TEST(Balanced, WitnessesAreBalancedCodes) {
  for (int w = 3; w <= 5; ++w)
    for (int n = 2; n <= 9; ++n) {
      const auto r = balanced_search_bruteforce(n, w);
      if (!r.exists) continue;
      const auto v = verify_code(r.witness);
      EXPECT_TRUE(v.valid && v.balanced) << n << " " << w;
      EXPECT_EQ(static_cast<std::int64_t>(r.witness.size()), upper_bound(n, w));
      EXPECT_TRUE(balanced_search_bruteforce(n, w, 42).exists);
    }
}

TEST(PackingOracle, Examples) {
  EXPECT_EQ(packing_max_bruteforce(ResidualGraph(5), 5), 1);
  EXPECT_EQ(packing_max_bruteforce(ResidualGraph(6), 5), 1);
  EXPECT_EQ(packing_max_bruteforce(ResidualGraph(4), 5), 0);
  EXPECT_EQ(packing_max_bruteforce(ResidualGraph(7), 3), 7);  // Fano plane
  EXPECT_EQ(packing_max_bruteforce(ResidualGraph(9), 3), 12);  // affine plane of order 3
  EXPECT_THROW(packing_max_bruteforce(ResidualGraph(11), 3), guard_error);
}

TEST(Csv, Row) {
  EXPECT_EQ(oracle_csv_header(), "n,d,w,A3,runtime_s");
  EXPECT_EQ(oracle_csv_row(3, 8, 5, 1, 0.5), "3,8,5,1,0.5");
}

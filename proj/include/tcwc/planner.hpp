#pragma once

// Parameter arithmetic for a sub-code S that extends to a code of size B(n)+n:
// the edge excess ell, the two kinds of replacement counts, the R-profile target
// and the construction branch.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include "tcwc/error.hpp"

namespace tcwc {

enum class Branch { t1_div, t0_div, t0_nondiv, t1_nondiv, general_t };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::t1_div: return "T1_DIV";
    case Branch::t0_div: return "T0_DIV";
    case Branch::t0_nondiv: return "T0_NONDIV";
    case Branch::t1_nondiv: return "T1_NONDIV";
    case Branch::general_t: return "GENERAL_T";
  }
  return "?";
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

// B(n) = floor(n(n-1-(w-1)(w-2)) / (w(w-1))), evaluated literally for every n.
inline std::int64_t clique_term(std::int64_t n, std::int64_t w) {
  return floor_div(n * (n - 1 - (w - 1) * (w - 2)), w * (w - 1));
}

inline std::int64_t upper_bound(std::int64_t n, std::int64_t w) {
  if (n < 1 || w < 3) throw parameter_error("upper_bound needs n >= 1 and w >= 3");
  return clique_term(n, w) + n;
}

struct BuildPlan {
  std::int64_t n = 0;
  std::int64_t w = 0;
  std::int64_t t = 0;     // n mod (w-1)
  std::int64_t h = 0;     // (n-t)/(w-1)
  std::int64_t ell = 0;   // edge excess modulo C(w,2)
  std::int64_t a = 0;     // 1^w -> 1^{w-2}2^1 replacements, also called k
  std::int64_t b = 0;     // replacements by a 1^{w-4}2^2 word, also called r
  std::int64_t c = 0;     // vertices with R(v) = R_m
  std::int64_t r_min = 0;
  std::int64_t x = 0;     // words of type 1^w
  std::int64_t y = 0;     // words of type 1^{w-2} 2^1
  std::int64_t z = 0;     // words of type 1^{w-4} 2^2
  Branch branch = Branch::general_t;
  bool balanced_feasible = true;
  std::int64_t clique_count = 0;  // B(n)
  std::int64_t upper_bound = 0;   // B(n) + n
  std::int64_t leftover_edges = 0;
  bool below_regime = false;      // numerator of B(n) not positive

  std::int64_t k() const { return a; }
  std::int64_t r() const { return b; }
  std::int64_t r_max() const { return r_min + w - 1; }
};

struct BalancedVerdict {
  bool feasible = true;
  std::string reason;
  std::optional<std::int64_t> k;       // the k of the congruence, when infeasible
  std::optional<std::int64_t> y_twice; // 2y from the type-count system, when infeasible

  // y as text, e.g. "28.5".
  std::string y_text() const {
    if (!y_twice) return {};
    const std::int64_t yt = *y_twice;
    std::string s = std::to_string(floor_div(yt, 2));
    if (floor_mod(yt, 2) != 0) s += ".5";
    return s;
  }
};

// Infeasible exactly when w is odd, n = 1 mod (w-1) and
// n(n-1) - n(w-1)(w-2) = (2k+1)(w-1) mod w(w-1) for some k in [0, (w-3)/2].
inline BalancedVerdict balanced_feasibility(std::int64_t n, std::int64_t w) {
  if (n < 1 || w < 3) throw parameter_error("balanced_feasibility needs n >= 1 and w >= 3");
  BalancedVerdict v;
  if (w % 2 == 0) {
    v.reason = "w even: (w-1) divides ell";
    return v;
  }
  if (floor_mod(n, w - 1) != 1) {
    v.reason = "n not congruent to 1 mod (w-1)";
    return v;
  }
  const std::int64_t lhs = floor_mod(n * (n - 1) - n * (w - 1) * (w - 2), w * (w - 1));
  for (std::int64_t k = 0; k <= (w - 3) / 2; ++k) {
    if (lhs == (2 * k + 1) * (w - 1)) {
      v.feasible = false;
      v.k = k;
      // x + y = B(n) + n and x C(w,2) + y C(w-1,2) = C(n,2) give
      // 2y = w B(n) + n (w - (n-1)/(w-1)).
      v.y_twice = w * clique_term(n, w) + n * (w - (n - 1) / (w - 1));
      v.reason = "y = " + v.y_text() + " is not an integer (k = " + std::to_string(k) + ")";
      return v;
    }
  }
  v.reason = "edge excess divisible by w-1";
  return v;
}

inline BuildPlan plan(std::int64_t n, std::int64_t w) {
  if (w < 5) throw parameter_error("plan needs w >= 5 (got " + std::to_string(w) + ")");
  if (n < 1) throw parameter_error("plan needs n >= 1 (got " + std::to_string(n) + ")");
  BuildPlan p;
  p.n = n;
  p.w = w;
  p.t = n % (w - 1);
  p.h = (n - p.t) / (w - 1);
  const std::int64_t pairs_w = w * (w - 1) / 2;
  p.ell = floor_mod(n * (n - 1) / 2 - n * ((w - 1) * (w - 2) / 2), pairs_w);
  p.clique_count = clique_term(n, w);
  p.upper_bound = p.clique_count + n;
  p.below_regime = n - 1 - (w - 1) * (w - 2) <= 0;

  if (p.t == 0 || p.t == 1) {
    TCWC_ENSURE((2 * p.ell) % (w - 1) == 0, "(w-1) must divide 2*ell when n = 0,1 mod (w-1)");
    if (p.ell % (w - 1) == 0) {
      p.branch = p.t == 1 ? Branch::t1_div : Branch::t0_div;
      p.a = p.ell / (w - 1);
      p.b = 0;
      TCWC_ENSURE(p.a >= 0 && p.a <= (w + 1) / 2 - 1, "k outside [0, ceil(w/2)-1]");
    } else {
      const std::int64_t odd = 2 * p.ell / (w - 1);
      TCWC_ENSURE(odd % 2 == 1 && w % 2 == 1, "non-divisible excess needs odd w and odd 2*ell/(w-1)");
      p.a = (odd - 1) / 2;
      TCWC_ENSURE(p.a >= 0 && p.a <= (w - 3) / 2, "k outside [0, (w-3)/2]");
      if (p.t == 0) {
        p.branch = Branch::t0_nondiv;
        p.b = (w - 1) / 2;
      } else {
        p.branch = Branch::t1_nondiv;
        p.b = 0;
        p.leftover_edges = (w - 1) / 2;
        p.balanced_feasible = false;
      }
    }
  } else {
    p.branch = Branch::general_t;
    p.a = p.ell / (w - 1);
    p.b = p.ell % (w - 1);
    TCWC_ENSURE(p.a < w && p.b < w - 1, "k or r out of range");
  }

  p.r_min = p.t == 0 ? 1 : (p.t == 1 ? 0 : w - p.t);
  const std::int64_t c_num = n * p.r_min + p.a * (w - 1) + 2 * p.b;
  TCWC_ENSURE(c_num % (w - 1) == 0, "c(w-1) = n R_m + a(w-1) + 2b has no integral solution");
  p.c = c_num / (w - 1);
  TCWC_ENSURE(p.c >= 0, "c negative");

  p.x = p.clique_count + p.a + p.b;
  p.y = n - p.a - 2 * p.b;
  p.z = p.b;

  TCWC_ENSURE(p.a * (w - 1) + p.b + p.leftover_edges == p.ell, "a(w-1) + b (+ leave) != ell");
  TCWC_ENSURE(p.x + p.y + p.z == p.upper_bound, "x + y + z != B(n) + n");
  TCWC_ENSURE(p.b == p.ell % (w - 1) || p.branch == Branch::t1_nondiv, "b is not the least admissible value");
  TCWC_ENSURE((p.leftover_edges > 0) == (p.branch == Branch::t1_nondiv), "leave only on T1_NONDIV");
  TCWC_ENSURE(p.balanced_feasible == balanced_feasibility(n, w).feasible, "branch and balance verdict disagree");
  return p;
}

inline std::string to_text(const BuildPlan& p) {
  std::ostringstream os;
  os << "n = " << p.n << '\n'
     << "w = " << p.w << '\n'
     << "t = " << p.t << '\n'
     << "h = " << p.h << '\n'
     << "ell = " << p.ell << '\n'
     << "a (k) = " << p.a << '\n'
     << "b (r) = " << p.b << '\n'
     << "R_m = " << p.r_min << '\n'
     << "c = " << p.c << '\n'
     << "x = " << p.x << '\n'
     << "y = " << p.y << '\n'
     << "z = " << p.z << '\n'
     << "B(n) = " << p.clique_count << '\n'
     << "upper_bound = " << p.upper_bound << '\n'
     << "branch = " << to_string(p.branch) << '\n'
     << "leftover_edges = " << p.leftover_edges << '\n';
  const BalancedVerdict v = balanced_feasibility(p.n, p.w);
  os << "balanced: " << (v.feasible ? "possible" : "impossible (" + std::string("y = ") + v.y_text() + ")") << '\n';
  if (p.below_regime) os << "below asymptotic regime: B(n) numerator is not positive\n";
  return os.str();
}

}  // namespace tcwc

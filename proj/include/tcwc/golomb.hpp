#pragma once

// B-free modular Golomb rulers and the codes formed by their translates.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tcwc/core.hpp"
#include "tcwc/error.hpp"

namespace tcwc {

struct GolombRuler {
  std::int64_t modulus = 1;
  std::vector<std::int64_t> marks;      // in construction order; marks[0] carries the 2 in translates
  std::vector<std::int64_t> forbidden;  // B, integers in [1, modulus-1]

  std::size_t size() const { return marks.size(); }
};

struct RulerCheck {
  bool ok = true;
  std::string violation;  // first violation found, empty when ok

  explicit operator bool() const { return ok; }
};

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

inline RulerCheck verify_ruler(const GolombRuler& r) {
  const std::int64_t n = r.modulus;
  if (n < 1) return {false, "modulus must be positive"};
  for (std::int64_t a : r.marks)
    if (a < 0 || a >= n) return {false, "mark " + std::to_string(a) + " outside [0, " + std::to_string(n) + ")"};
  std::unordered_map<std::int64_t, std::pair<std::int64_t, std::int64_t>> seen;
  for (std::size_t i = 0; i < r.marks.size(); ++i) {
    for (std::size_t j = 0; j < r.marks.size(); ++j) {
      if (i == j) continue;
      const std::int64_t d = mod(r.marks[i] - r.marks[j], n);
      const auto here = std::make_pair(r.marks[i], r.marks[j]);
      if (d == 0) return {false, "marks " + std::to_string(here.first) + " and " + std::to_string(here.second) + " coincide"};
      auto [it, fresh] = seen.emplace(d, here);
      if (!fresh)
        return {false, "difference " + std::to_string(d) + " occurs as " + std::to_string(it->second.first) + "-" +
                           std::to_string(it->second.second) + " and " + std::to_string(here.first) + "-" +
                           std::to_string(here.second)};
    }
  }
  for (std::int64_t b : r.forbidden) {
    auto it = seen.find(mod(b, n));
    if (it != seen.end())
      return {false, "forbidden " + std::to_string(b) + " occurs as " + std::to_string(it->second.first) + "-" +
                         std::to_string(it->second.second)};
  }
  return {};
}

// Greedy construction with a_1 = 0: each further mark is the smallest integer v
// in [1, n-1] whose addition keeps the whole ruler valid and B-free. Succeeds
// whenever n >= w(2 max(B) + w^2) with size = w-1.
inline GolombRuler greedy_ruler(std::int64_t n, std::size_t size, std::vector<std::int64_t> forbidden = {}) {
  if (n < 1) throw parameter_error("greedy_ruler: modulus must be positive");
  if (size < 1) throw parameter_error("greedy_ruler: size must be at least 1");
  for (std::int64_t b : forbidden)
    if (b < 1 || b > n - 1)
      throw parameter_error("greedy_ruler: forbidden value " + std::to_string(b) + " outside [1, n-1]");

  GolombRuler r{n, {0}, std::move(forbidden)};
  const auto un = static_cast<std::size_t>(n);
  std::vector<char> used(un, 0);     // differences present, both signs
  std::vector<char> banned(un, 0);   // forbidden residues, both signs
  std::vector<char> is_mark(un, 0);
  is_mark[0] = 1;
  for (std::int64_t b : r.forbidden) {
    banned[static_cast<std::size_t>(mod(b, n))] = 1;
    banned[static_cast<std::size_t>(mod(-b, n))] = 1;
  }

  std::vector<std::int64_t> fresh;
  while (r.marks.size() < size) {
    bool placed = false;
    for (std::int64_t v = 1; v < n && !placed; ++v) {
      if (is_mark[static_cast<std::size_t>(v)]) continue;
      fresh.clear();
      bool ok = true;
      for (std::int64_t a : r.marks) {
        const std::int64_t d1 = mod(v - a, n);
        const std::int64_t d2 = mod(a - v, n);
        for (std::int64_t d : {d1, d2}) {
          if (d == 0 || used[static_cast<std::size_t>(d)] || banned[static_cast<std::size_t>(d)] ||
              std::find(fresh.begin(), fresh.end(), d) != fresh.end()) {
            ok = false;
            break;
          }
          fresh.push_back(d);
        }
        if (!ok) break;
      }
      if (!ok) continue;
      for (std::int64_t d : fresh) used[static_cast<std::size_t>(d)] = 1;
      is_mark[static_cast<std::size_t>(v)] = 1;
      r.marks.push_back(v);
      placed = true;
    }
    if (!placed)
      throw ruler_error("greedy_ruler: no admissible mark " + std::to_string(r.marks.size() + 1) + " of " +
                        std::to_string(size) + " modulo " + std::to_string(n));
  }
  const RulerCheck check = verify_ruler(r);
  TCWC_ENSURE(check.ok, "greedy ruler failed verification: " + check.violation);
  return r;
}

// Support of the i-th translate, with the 2-labelled vertex first.
inline std::vector<std::int64_t> translate_support(const GolombRuler& r, std::int64_t shift) {
  std::vector<std::int64_t> s;
  s.reserve(r.marks.size());
  for (std::int64_t a : r.marks) s.push_back(mod(a + shift, r.modulus));
  return s;
}

// The n words {(a_1+i)_2, (a_2+i)_1, ..., (a_m+i)_1}, i in Z_n, placed in
// positions [offset, offset + n) of words of the given length.
inline std::vector<Codeword> translates(const GolombRuler& r, int length = -1, int offset = 0) {
  if (length < 0) length = static_cast<int>(r.modulus);
  std::vector<Codeword> out;
  out.reserve(static_cast<std::size_t>(r.modulus));
  for (std::int64_t i = 0; i < r.modulus; ++i) {
    std::vector<Entry> e;
    const auto s = translate_support(r, i);
    for (std::size_t j = 0; j < s.size(); ++j)
      e.push_back({static_cast<Vertex>(s[j] + offset), j == 0 ? Label::two : Label::one});
    out.emplace_back(length, std::move(e));
  }
  return out;
}

inline std::string to_string(const GolombRuler& r) {
  std::ostringstream os;
  os << r.modulus << " |";
  for (std::int64_t a : r.marks) os << ' ' << a;
  os << " | B:";
  for (std::int64_t b : r.forbidden) os << ' ' << b;
  return os.str();
}

inline GolombRuler parse_ruler(const std::string& text) {
  const auto p1 = text.find('|');
  const auto p2 = p1 == std::string::npos ? std::string::npos : text.find('|', p1 + 1);
  if (p2 == std::string::npos) throw parse_error(1, "ruler text needs 'n | marks | B: ...'");
  GolombRuler r;
  std::istringstream ns(text.substr(0, p1));
  if (!(ns >> r.modulus)) throw parse_error(1, "ruler modulus missing");
  std::istringstream ms(text.substr(p1 + 1, p2 - p1 - 1));
  for (std::int64_t a; ms >> a;) r.marks.push_back(a);
  if (!ms.eof()) throw parse_error(1, "bad mark list");
  std::string rest = text.substr(p2 + 1);
  const auto colon = rest.find("B:");
  if (colon == std::string::npos) throw parse_error(1, "forbidden set must start with 'B:'");
  std::istringstream bs(rest.substr(colon + 2));
  for (std::int64_t b; bs >> b;) r.forbidden.push_back(b);
  if (!bs.eof()) throw parse_error(1, "bad forbidden list");
  return r;
}

}  // namespace tcwc

#pragma once

// Text renderings of a VerificationReport: a flat key=value block and JSON.

#include <map>
#include <sstream>
#include <string>

#include "json.hpp"

#include "tcwc/core.hpp"

namespace tcwc {

inline nlohmann::json to_json(const ColoringAudit& a) {
  return {{"s", a.s},
          {"y", a.y},
          {"weighted_twos", a.weighted_twos},
          {"twos_within_s", a.twos_within_s},
          {"double_count_ok", a.double_count_ok},
          {"balanced", a.balanced},
          {"kv_integral", a.kv_integral},
          {"k", a.k}};
}

inline nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["w"] = r.w;
  j["d"] = r.d;
  j["size"] = r.size;
  j["valid"] = r.valid;
  j["min_distance"] = r.min_distance ? nlohmann::json(*r.min_distance) : nlohmann::json("empty/singleton");
  j["min_distance_exact"] = r.min_distance_exact;
  j["pairs_checked"] = r.pairs_checked;
  j["condition_a_count"] = r.condition_a_count;
  j["condition_a_violations"] = r.condition_a_violations;
  j["condition_b_count"] = r.condition_b_count;
  j["condition_b_violations"] = r.condition_b_violations;
  j["duplicates"] = r.duplicates;
  j["type_counts"] = r.type_counts;
  j["balanced"] = r.balanced;
  j["covered_edges"] = r.covered_edges;
  j["uncovered_edges"] = r.uncovered_edges;
  j["r_profile"] = r.r_profile;
  j["audit"] = to_json(r.audit);
  return j;
}

namespace detail {

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

inline std::string join_pairs(const std::vector<std::pair<std::size_t, std::size_t>>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].first << '-' << v[i].second;
  return os.str();
}

}  // namespace detail

// The R-profile is summarised as a histogram "R:count" to keep the block flat.
inline std::string to_key_value(const VerificationReport& r) {
  std::ostringstream os;
  os << "n=" << r.n << '\n'
     << "w=" << r.w << '\n'
     << "d=" << r.d << '\n'
     << "size=" << r.size << '\n'
     << "valid=" << (r.valid ? "true" : "false") << '\n'
     << "min_distance=" << (r.min_distance ? std::to_string(*r.min_distance) : "empty/singleton") << '\n'
     << "min_distance_exact=" << (r.min_distance_exact ? "true" : "false") << '\n'
     << "pairs_checked=" << r.pairs_checked << '\n'
     << "condition_a_count=" << r.condition_a_count << '\n'
     << "condition_a_violations=" << detail::join_pairs(r.condition_a_violations) << '\n'
     << "condition_b_count=" << r.condition_b_count << '\n'
     << "condition_b_violations=" << detail::join(r.condition_b_violations) << '\n'
     << "duplicates=" << detail::join_pairs(r.duplicates) << '\n'
     << "type_counts=" << detail::join(r.type_counts) << '\n'
     << "balanced=" << (r.balanced ? "true" : "false") << '\n'
     << "covered_edges=" << r.covered_edges << '\n'
     << "uncovered_edges=" << r.uncovered_edges << '\n';
  std::map<int, std::size_t> hist;
  for (int v : r.r_profile) ++hist[v];
  os << "r_profile=";
  bool first = true;
  for (auto [value, cnt] : hist) {
    os << (first ? "" : ",") << value << ':' << cnt;
    first = false;
  }
  os << '\n'
     << "audit.s=" << r.audit.s << '\n'
     << "audit.y=" << detail::join(r.audit.y) << '\n'
     << "audit.weighted_twos=" << r.audit.weighted_twos << '\n'
     << "audit.twos_within_s=" << (r.audit.twos_within_s ? "true" : "false") << '\n'
     << "audit.double_count_ok=" << (r.audit.double_count_ok ? "true" : "false") << '\n'
     << "audit.kv_integral=" << (r.audit.kv_integral ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace tcwc

#pragma once

// CWC1 code files: a header line "n w d" followed by one ternary digit string
// per word. '#' starts a comment that runs to the end of the line.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tcwc/core.hpp"

namespace tcwc {

namespace detail {

inline std::string strip_comment(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

inline TernaryCode read_cwc1(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  TernaryCode code;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = detail::strip_comment(line);
    if (body.empty()) continue;
    if (!have_header) {
      std::istringstream hs(body);
      long long n = -1, w = -1, d = -1;
      std::string extra;
      if (!(hs >> n >> w >> d) || (hs >> extra) || n < 0 || w < 0 || d < 0 || n > (1LL << 30))
        throw parse_error(lineno, "expected header 'n w d' with nonnegative integers");
      code = TernaryCode(static_cast<int>(n), static_cast<int>(w), static_cast<int>(d));
      have_header = true;
      continue;
    }
    if (body.size() != static_cast<std::size_t>(code.n()))
      throw parse_error(lineno, "word has " + std::to_string(body.size()) + " symbols, expected " +
                                    std::to_string(code.n()));
    for (char ch : body)
      if (ch != '0' && ch != '1' && ch != '2')
        throw parse_error(lineno, std::string("invalid symbol '") + ch + "'");
    code.add(Codeword::from_string(body));
  }
  if (!have_header) throw parse_error(lineno, "missing header 'n w d'");
  return code;
}

inline void write_cwc1(std::ostream& out, const TernaryCode& code, const std::string& comment = {}) {
  out << "# CWC1\n";
  if (!comment.empty()) {
    std::istringstream cs(comment);
    std::string l;
    while (std::getline(cs, l)) out << "# " << l << '\n';
  }
  out << code.n() << ' ' << code.w() << ' ' << code.d() << '\n';
  for (const Codeword& c : code.words()) out << c.to_string() << '\n';
}

}  // namespace tcwc

// tcwc: plan, build, verify, pack, oracle and report from the command line.
//
// Exit codes: 0 ok, 1 invalid code, 2 parameter or regime error, 3 I/O or
// parse error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tcwc/tcwc.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_param = 2;
constexpr int exit_io = 3;

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write " + path);
  return f;
}

tcwc::TernaryCode load_code(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot read " + path);
  return tcwc::read_cwc1(f);
}

// "E u v" lines of a layout sidecar.
std::vector<tcwc::Edge> load_leave(const std::string& path) {
  std::vector<tcwc::Edge> out;
  std::ifstream f(path);
  if (!f) return out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::istringstream is(line);
    std::string tag;
    if (!(is >> tag) || tag != "E") continue;
    long long u = 0, v = 0;
    if (!(is >> u >> v)) throw tcwc::parse_error(lineno, "leave line needs two vertices");
    out.emplace_back(static_cast<tcwc::Vertex>(u), static_cast<tcwc::Vertex>(v));
  }
  return out;
}

void print_divisibility(std::ostream& os, const tcwc::DivisibilityReport& d) {
  os << "divisibility: " << (d.ok() ? "pass" : "FAIL") << '\n'
     << "  (w-1) | d(v): " << (d.degrees_divisible ? "yes" : "no") << '\n'
     << "  min degree = " << d.min_degree << " (threshold " << d.degree_threshold << ")\n"
     << "  e(G) = " << d.edges << ", e(K_w) | e(G): " << (d.edges_divisible ? "yes" : "no") << ", quotient "
     << d.quotient << '\n';
}

struct Args {
  std::int64_t n = 0, w = 0, d = -1;
  std::string out, path, format = "kv", mode = "greedy", witness, csv, leave;
  bool with_packing = false;
  std::int64_t from = 0, to = 0;
  std::uint64_t seed = 0;
};

tcwc::PackingMode packing_mode(const std::string& m) {
  return m == "exact" ? tcwc::PackingMode::exact : tcwc::PackingMode::greedy;
}

int cmd_plan(const Args& a) {
  std::cout << tcwc::to_text(tcwc::plan(a.n, a.w));
  return exit_ok;
}

int cmd_build(const Args& a) {
  const tcwc::BuildPlan p = tcwc::plan(a.n, a.w);
  const tcwc::BuildResult r = tcwc::build_S(p);
  const std::string out = a.out.empty() ? "S.cwc" : a.out;
  {
    auto f = open_out(out);
    tcwc::write_cwc1(f, r.code, std::string("S for n = ") + std::to_string(a.n) + ", w = " + std::to_string(a.w) +
                                    ", branch " + tcwc::to_string(p.branch));
  }
  {
    auto f = open_out(out + ".layout");
    f << "branch " << tcwc::to_string(p.branch) << '\n' << tcwc::to_text(r.layout);
    for (auto [u, v] : r.leave_edges) f << "E " << u << ' ' << v << '\n';
  }

  const tcwc::Lemma3Report l3 = tcwc::lemma3_check(r.code, p, r.leave_edges);
  const tcwc::ResidualGraph G = tcwc::residual_graph(static_cast<int>(a.n), r.code, r.leave_edges);
  const tcwc::DivisibilityReport div = tcwc::check_divisibility(G, static_cast<int>(a.w));
  const std::int64_t expected_quotient = p.branch == tcwc::Branch::t1_nondiv ? p.clique_count + p.a : p.x;
  const bool quotient_ok = div.edges_divisible && div.quotient == expected_quotient;

  std::cout << "wrote " << out << " (" << r.code.size() << " words)\n"
            << "branch = " << tcwc::to_string(p.branch) << '\n'
            << "lemma3: " << (l3.ok ? "pass" : "FAIL") << '\n';
  for (const auto& f : l3.failures) std::cout << "  " << f << '\n';
  if (p.branch == tcwc::Branch::general_t)
    std::cout << "exchange: m = " << r.exchange.m << ", swaps = " << r.exchange.swaps
              << ", max |N| = " << r.exchange.max_blocked << '\n';
  print_divisibility(std::cout, div);
  std::cout << "  quotient matches x target " << expected_quotient << ": " << (quotient_ok ? "yes" : "no") << '\n';

  if (a.with_packing) {
    const auto pk = tcwc::greedy_kw_packing(G, static_cast<int>(a.w), packing_mode(a.mode));
    const tcwc::TernaryCode full = tcwc::complete_code(r.code, pk.cliques);
    const auto v = tcwc::verify_code(full);
    tcwc::LeaveRow row{a.n, a.w, tcwc::to_string(p.branch), expected_quotient,
                       static_cast<std::int64_t>(pk.cliques.size()), pk.leave_edges};
    const std::string table = tcwc::leave_table({row});
    auto f = open_out(out + ".leave");
    f << table;
    std::cout << table << "completed code: " << full.size() << " words, " << (v.valid ? "valid" : "INVALID") << '\n';
    if (!v.valid) return exit_invalid;
  }
  return l3.ok && div.ok() && quotient_ok ? exit_ok : exit_invalid;
}

int cmd_verify(const Args& a) {
  const tcwc::TernaryCode code = load_code(a.path);
  const tcwc::VerificationReport r = tcwc::verify_code(code);
  if (a.format == "json") std::cout << tcwc::to_json(r).dump(2) << '\n';
  else std::cout << tcwc::to_key_value(r);
  return r.valid ? exit_ok : exit_invalid;
}

int cmd_pack(const Args& a) {
  const tcwc::TernaryCode S = load_code(a.path);
  const auto E = load_leave(a.leave.empty() ? a.path + ".layout" : a.leave);
  const tcwc::ResidualGraph G = tcwc::residual_graph(S.n(), S, E);
  const tcwc::DivisibilityReport div = tcwc::check_divisibility(G, S.w());
  print_divisibility(std::cout, div);
  const auto pk = tcwc::greedy_kw_packing(G, S.w(), packing_mode(a.mode));
  const tcwc::TernaryCode full = tcwc::complete_code(S, pk.cliques);
  const auto v = tcwc::verify_code(full);
  tcwc::LeaveRow row{S.n(), S.w(), "-", div.quotient, static_cast<std::int64_t>(pk.cliques.size()), pk.leave_edges};
  std::cout << tcwc::leave_table({row});
  if (!a.out.empty()) {
    auto f = open_out(a.out);
    tcwc::write_cwc1(f, full);
  }
  std::cout << "completed code: " << full.size() << " words, " << (v.valid ? "valid" : "INVALID") << '\n';
  return v.valid ? exit_ok : exit_invalid;
}

int cmd_oracle(const Args& a) {
  const int d = a.d >= 0 ? static_cast<int>(a.d) : static_cast<int>(2 * a.w - 2);
  tcwc::OracleOptions opt;
  opt.seed = a.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const tcwc::OracleResult r = tcwc::max_code_bruteforce(static_cast<int>(a.n), d, static_cast<int>(a.w), opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "A3 = " << r.size << '\n'
            << "candidates = " << r.candidates << ", nodes = " << r.nodes << '\n';
  if (!a.witness.empty()) {
    auto f = open_out(a.witness);
    tcwc::write_cwc1(f, r.witness);
  }
  if (!a.csv.empty()) {
    const bool fresh = !std::filesystem::exists(a.csv);
    std::ofstream f(a.csv, std::ios::app);
    if (!f) throw io_error("cannot write " + a.csv);
    if (fresh) f << tcwc::oracle_csv_header() << '\n';
    f << tcwc::oracle_csv_row(static_cast<int>(a.n), d, static_cast<int>(a.w), r.size, secs) << '\n';
  }
  return exit_ok;
}

// One row per n: branch, regime verdict and balance verdict.
int cmd_report(const Args& a) {
  const std::int64_t from = a.from > 0 ? a.from : a.w * a.w;
  const std::int64_t to = a.to >= from ? a.to : from + 20;
  std::cout << std::left << std::setw(8) << "n" << std::setw(11) << "branch" << std::setw(4) << "a" << std::setw(4)
            << "b" << std::setw(10) << "B(n)+n" << std::setw(10) << "balanced" << "regime\n";
  for (std::int64_t n = from; n <= to; ++n) {
    const tcwc::BuildPlan p = tcwc::plan(n, a.w);
    const auto bad = tcwc::regime_violation(p);
    std::cout << std::left << std::setw(8) << n << std::setw(11) << tcwc::to_string(p.branch) << std::setw(4) << p.a
              << std::setw(4) << p.b << std::setw(10) << p.upper_bound << std::setw(10)
              << (p.balanced_feasible ? "possible" : "no") << (bad ? *bad : "ok") << '\n';
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ternary constant-weight codes under the l1 metric"};
  app.require_subcommand(1);
  Args a;
  app.add_option("--seed", a.seed, "seed for oracle vertex order (0 keeps canonical order)");

  auto* plan = app.add_subcommand("plan", "print the build plan for (n, w)");
  plan->add_option("-n", a.n)->required();
  plan->add_option("-w", a.w)->required();

  auto* build = app.add_subcommand("build", "build S and audit it");
  build->add_option("-n", a.n)->required();
  build->add_option("-w", a.w)->required();
  build->add_option("-o,--out", a.out, "output CWC1 path (default S.cwc)");
  build->add_flag("--with-packing", a.with_packing, "pack K_w's into the residual graph");
  build->add_option("--mode", a.mode)->check(CLI::IsMember({"greedy", "exact"}));

  auto* verify = app.add_subcommand("verify", "verify a CWC1 file");
  verify->add_option("path", a.path)->required();
  verify->add_option("--format", a.format)->check(CLI::IsMember({"kv", "json"}));

  auto* pack = app.add_subcommand("pack", "complete a CWC1 sub-code with K_w's");
  pack->add_option("path", a.path)->required();
  pack->add_option("--leave", a.leave, "file with 'E u v' lines (default <path>.layout)");
  pack->add_option("--mode", a.mode)->check(CLI::IsMember({"greedy", "exact"}));
  pack->add_option("-o,--out", a.out, "write the completed code here");

  auto* oracle = app.add_subcommand("oracle", "exact A3(n, d, w) by exhaustive search");
  oracle->add_option("-n", a.n)->required();
  oracle->add_option("-d", a.d, "minimum distance (default 2w-2)");
  oracle->add_option("-w", a.w)->required();
  oracle->add_option("--witness", a.witness, "write a maximum code here");
  oracle->add_option("--csv", a.csv, "append a result row here");

  auto* report = app.add_subcommand("report", "branch and regime table over a range of n");
  report->add_option("-w", a.w)->required();
  report->add_option("--from", a.from);
  report->add_option("--to", a.to);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_param;
  }

  try {
    if (*plan) return cmd_plan(a);
    if (*build) return cmd_build(a);
    if (*verify) return cmd_verify(a);
    if (*pack) return cmd_pack(a);
    if (*oracle) return cmd_oracle(a);
    if (*report) return cmd_report(a);
  } catch (const tcwc::parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return exit_io;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const tcwc::guard_error& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return exit_param;
  } catch (const tcwc::parameter_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_param;
  } catch (const tcwc::code_error& e) {
    std::cerr << "invalid code: " << e.what() << '\n';
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exit_invalid;
  }
  return exit_param;
}

// dpratio: command-line front end for the blow-up construction, the exact
// counters, the parameter solver, the moment calculator and the Monte Carlo
// harness. Run `dpratio --help` or `dpratio <command> --help`.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpratio/count.hpp"
#include "dpratio/digraph.hpp"
#include "dpratio/experiment.hpp"
#include "dpratio/io.hpp"
#include "dpratio/moments.hpp"
#include "dpratio/params.hpp"
#include "dpratio/verify.hpp"

namespace {

using namespace dpratio;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot open '" + path + "' for writing");
  out << text;
}

std::vector<int> parse_k_list(const std::string& text) {
  std::vector<int> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    require(!item.empty(), "--k-list: empty entry");
    ks.push_back(std::stoi(item));
  }
  return ks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derangement-to-permutation ratios of random blow-up digraphs"};
  app.require_subcommand(1);

  // construct
  int c_k = 0, c_ell = 0;
  std::string c_out, c_format;
  auto* construct = app.add_subcommand("construct", "Emit the blow-up D_{k,ell}");
  construct->add_option("--k", c_k, "Part size")->required();
  construct->add_option("--ell", c_ell, "Number of parts")->required();
  construct->add_option("--out", c_out, "Output file (default stdout)");
  construct->add_option("--format", c_format, "edges | json (default: json if --out ends in .json)")
      ->check(CLI::IsMember({"edges", "json"}));

  // count
  std::string n_in, n_method = "permanent";
  int n_k = 0, n_ell = 0;
  auto* count = app.add_subcommand("count", "Count derangements and permutations of a digraph file");
  count->add_option("--in", n_in, "Edge list or JSON digraph file ('-' for stdin)")->required();
  count->add_option("--method", n_method, "brute | permanent | layered")
      ->check(CLI::IsMember({"brute", "permanent", "layered"}));
  count->add_option("--k", n_k, "Part size for --method layered (else taken from \"parts\")");
  count->add_option("--ell", n_ell, "Part count for --method layered (else taken from \"parts\")");

  // solve
  double s_r = 0;
  long double s_tol = kDefaultSolverTol;
  int s_k = 0;
  auto* solve = app.add_subcommand("solve", "Solve for (ell, p) from a target ratio r");
  solve->add_option("--r", s_r, "Target ratio in (0, 1/2)")->required();
  solve->add_option("--tol", s_tol, "Solver tolerance on f_ell(x) - 1/r");
  solve->add_option("--k", s_k, "Part size; adds k and m to the plan");

  // expect
  double e_r = 0;
  int e_k = 0, e_ell = 0;
  long e_m = -1;
  std::string e_format = "json";
  auto* expect = app.add_subcommand("expect", "Exact and asymptotic moments (--r --k or --k --ell --m)");
  auto* e_r_opt = expect->add_option("--r", e_r, "Target ratio");
  expect->add_option("--k", e_k, "Part size")->required();
  auto* e_ell_opt = expect->add_option("--ell", e_ell, "Number of parts");
  auto* e_m_opt = expect->add_option("--m", e_m, "Edge count");
  expect->add_option("--format", e_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  e_r_opt->excludes(e_ell_opt)->excludes(e_m_opt);
  e_ell_opt->needs(e_m_opt);
  e_m_opt->needs(e_ell_opt);

  // mc
  double m_r = 0, m_eps = kDefaultEpsilon;
  int m_k = 0;
  long m_trials = 0;
  std::uint64_t m_seed = kDefaultSeed;
  unsigned m_threads = default_threads();
  std::string m_csv, m_out;
  auto* mc = app.add_subcommand("mc", "Monte Carlo trials of the construction");
  mc->add_option("--r", m_r, "Target ratio")->required();
  mc->add_option("--k", m_k, "Part size")->required();
  mc->add_option("--trials", m_trials, "Number of trials")->required();
  mc->add_option("--seed", m_seed, "Master seed (default 0)");
  mc->add_option("--epsilon", m_eps, "Band around the exact ratio for fraction_within");
  mc->add_option("--threads", m_threads, "Worker threads (results do not depend on this)");
  mc->add_option("--out", m_out, "McReport JSON file (default stdout)");
  mc->add_option("--csv", m_csv, "Per-trial CSV file");

  // sweep
  double w_r = 0;
  std::string w_klist;
  long w_trials = 0;
  std::uint64_t w_seed = kDefaultSeed;
  unsigned w_threads = default_threads();
  auto* sweep = app.add_subcommand("sweep", "Convergence table over a list of k");
  sweep->add_option("--r", w_r, "Target ratio")->required();
  sweep->add_option("--k-list", w_klist, "Comma-separated part sizes, e.g. 4,6,8")->required();
  sweep->add_option("--trials", w_trials, "Monte Carlo trials per row (0 = exact only)");
  sweep->add_option("--seed", w_seed, "Master seed (default 0)");
  sweep->add_option("--threads", w_threads, "Worker threads");

  // verify
  std::string v_profile = "small";
  auto* verify = app.add_subcommand("verify", "Run every cross-check; nonzero exit on failure");
  verify->add_option("--profile", v_profile, "tiny | small | full")
      ->check(CLI::IsMember({"tiny", "small", "full"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*construct) {
      const Digraph g = to_general(build_blowup(c_k, c_ell));
      const bool json = c_format == "json" || (c_format.empty() && ends_with(c_out, ".json"));
      std::ostringstream os;
      if (json)
        os << to_json(g).dump() << '\n';
      else
        write_edge_list(os, g);
      write_text(c_out, os.str());
    } else if (*count) {
      Digraph g(1);
      if (n_in == "-") {
        g = read_digraph(std::cin);
      } else {
        std::ifstream in(n_in);
        require(static_cast<bool>(in), "cannot open '" + n_in + "'");
        g = read_digraph(in);
      }
      CountPair c;
      if (n_method == "brute") {
        c = count_bruteforce(g);
      } else if (n_method == "permanent") {
        c = count_permanent(g);
      } else {
        auto [k, ell] = (n_k > 0 && n_ell > 0) ? std::pair{n_k, n_ell} : blowup_shape_from_parts(g);
        c = count_layered(subgraph_from_general(g, k, ell));
      }
      nlohmann::json j{{"schema", 1},
                       {"method", n_method},
                       {"n", g.vertex_count()},
                       {"edges", g.edge_count()},
                       {"derangements", c.derangements.str()},
                       {"permutations", c.permutations.str()},
                       {"ratio", static_cast<double>(to_real(c.ratio()))}};
      std::cout << j.dump(2) << '\n';
    } else if (*solve) {
      nlohmann::json j;
      if (s_k > 0) {
        j = to_json(plan(s_r, s_k, s_tol));
      } else {
        const int ell = choose_ell(s_r);
        const auto sol = solve_p(s_r, ell, s_tol);
        j = {{"schema", 1}, {"r", s_r}, {"ell", ell}, {"p", sol.p}, {"x", sol.x}};
      }
      std::cout << j.dump(2) << '\n';
    } else if (*expect) {
      ConstructionPlan pl;
      if (*e_r_opt)
        pl = plan(e_r, e_k);
      else if (*e_m_opt)
        pl = plan_for_model(e_k, e_ell, e_m);
      else
        throw Error("expect: give either --r with --k, or --k --ell --m");
      const MomentReport rep = moment_report(pl);
      if (e_format == "csv")
        std::cout << kMomentCsvHeader << '\n' << to_csv_row(rep) << '\n';
      else
        std::cout << to_json(rep).dump(2) << '\n';
    } else if (*mc) {
      const McReport rep = run_mc(plan(m_r, m_k), m_trials, Seed{m_seed}, m_eps, m_threads);
      write_text(m_out, to_json(rep).dump(2) + "\n");
      if (!m_csv.empty()) write_text(m_csv, trials_csv(rep));
    } else if (*sweep) {
      const auto rows = convergence_sweep(w_r, parse_k_list(w_klist), w_trials, Seed{w_seed}, w_threads);
      std::cout << sweep_csv(w_r, rows);
    } else if (*verify) {
      const VerifySummary summary = verify_all(parse_profile(v_profile));
      std::cout << summary.render();
      std::cout << (summary.all_passed() ? "ALL PASSED" : "FAILURES") << '\n';
      return summary.all_passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

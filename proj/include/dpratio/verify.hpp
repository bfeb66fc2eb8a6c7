#pragma once

// One-shot runner for the cross-checks between the counters, the closed
// forms, the special functions, the solver, the exact moments and the Monte
// Carlo harness. Used by `dpratio verify` and by the test suites.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dpratio/count.hpp"
#include "dpratio/digraph.hpp"
#include "dpratio/experiment.hpp"
#include "dpratio/moments.hpp"
#include "dpratio/oracles.hpp"
#include "dpratio/params.hpp"
#include "dpratio/rng.hpp"
#include "dpratio/special.hpp"

namespace dpratio {

namespace detail {
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}
}  // namespace detail

enum class Profile { tiny, small, full };

inline Profile parse_profile(const std::string& name) {
  if (name == "tiny") return Profile::tiny;
  if (name == "small") return Profile::small;
  if (name == "full") return Profile::full;
  throw Error("unknown verify profile '" + name + "' (expected tiny, small or full)");
}

/// Smallest fraction of the 200 pinned trials (plan(0.3, 8), seed 0) that must
/// land within 0.05 of the exact ratio. The pinned run gives 0.985 (197/200).
inline constexpr double kConcentrationRegressionFloor = 0.985;

struct CheckResult {
  std::string name;
  std::string claim;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct VerifySummary {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return !checks.empty();
  }
  std::string render() const {
    std::ostringstream os;
    for (const auto& c : checks) {
      os << (c.passed ? "PASS " : "FAIL ") << c.name << "  [" << c.claim << "]  " << c.detail;
      char buf[32];
      std::snprintf(buf, sizeof buf, "  (%.2fs)", c.seconds);
      os << buf << '\n';
    }
    return os.str();
  }
};

struct VerifyOptions {
  /// Closed-form counts under test; swapped out by mutation tests.
  std::function<CountPair(int, int)> closed_form = closed_form_counts;
  unsigned threads = default_threads();
};

/// Erdos-Renyi style digraph on n vertices, each ordered pair kept with
/// probability `density`.
inline Digraph random_digraph(int n, double density, Rng& rng) {
  std::vector<Edge> edges;
  const auto threshold = static_cast<std::uint64_t>(density * 1e9);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && rng.uniform_below(1'000'000'000ULL) < threshold) edges.emplace_back(u, v);
  return Digraph(n, std::move(edges));
}

namespace detail {

struct Outcome {
  bool passed;
  std::string detail;
};

inline std::string str(const BigRational& q) { return q.str(); }

class BoundTally {
 public:
  void record(const CountPair& c) {
    ++graphs_;
    if (!c.satisfies_universal_bound()) ++violations_;
  }
  long graphs() const { return graphs_; }
  long violations() const { return violations_; }

 private:
  long graphs_ = 0;
  long violations_ = 0;
};

}  // namespace detail

inline VerifySummary verify_all(Profile profile, const VerifyOptions& opt = {}) {
  using detail::Outcome;
  const bool tiny = profile == Profile::tiny;
  const bool full = profile == Profile::full;
  VerifySummary summary;
  detail::BoundTally tally;

  auto run = [&](const std::string& name, const std::string& claim, auto&& body) {
    CheckResult res{name, claim};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Outcome o = body();
      res.passed = o.passed;
      res.detail = o.detail;
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    summary.checks.push_back(std::move(res));
  };

  run("blowup-shape", "D_{k,l} has kl vertices and k^2 l edges", [&]() -> Outcome {
    for (int k = 1; k <= 6; ++k)
      for (int ell = 2; ell <= 5; ++ell) {
        const Digraph g = to_general(build_blowup(k, ell));
        if (g.vertex_count() != k * ell || static_cast<long>(g.edge_count()) != long{k} * k * ell)
          return {false, "k=" + std::to_string(k) + " l=" + std::to_string(ell)};
      }
    return {true, "k<=6, l<=5"};
  });

  run("closed-form-vs-bruteforce",
      "D_{k,l} has (k!)^l derangements and sum_i (C(k,i)(k-i)!)^l permutations", [&]() -> Outcome {
        for (auto [k, ell] : {std::pair{1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 2}}) {
          const CountPair brute = count_bruteforce(to_general(build_blowup(k, ell)));
          tally.record(brute);
          if (brute != opt.closed_form(k, ell))
            return {false, "mismatch at k=" + std::to_string(k) + " l=" + std::to_string(ell)};
        }
        return {true, "5 sizes"};
      });

  run("closed-form-vs-layered", "closed forms equal the layered count of the full blow-up",
      [&]() -> Outcome {
        const int kmax = tiny ? 4 : 6, lmax = tiny ? 3 : 4;
        for (int k = 1; k <= kmax; ++k)
          for (int ell = 2; ell <= lmax; ++ell) {
            const CountPair layered = count_layered(SampledSubgraph::full(build_blowup(k, ell)));
            tally.record(layered);
            if (layered != opt.closed_form(k, ell))
              return {false, "mismatch at k=" + std::to_string(k) + " l=" + std::to_string(ell)};
          }
        return {true, "k<=" + std::to_string(kmax) + ", l<=" + std::to_string(lmax)};
      });

  run("closed-form-ratio", "(d/p)_{k,l} = 1 / sum_{i<=k} (1/i!)^l", [&]() -> Outcome {
    for (int k = 1; k <= 8; ++k)
      for (int ell = 2; ell <= 5; ++ell)
        if (closed_form_ratio(k, ell) != closed_form_ratio_series(k, ell))
          return {false, "k=" + std::to_string(k) + " l=" + std::to_string(ell)};
    for (int ell = 2; ell <= 6; ++ell)
      if (closed_form_ratio(1, ell) != BigRational(1, 2)) return {false, "k=1 not 1/2"};
    return {true, "k<=8, l<=5"};
  });

  run("bruteforce-vs-permanent", "per(A) counts derangements, per(A+I) permutations",
      [&]() -> Outcome {
        Rng rng(Seed{101});
        const int graphs = tiny ? 40 : 200;
        for (int t = 0; t < graphs; ++t) {
          const int n = 1 + static_cast<int>(rng.uniform_below(8));
          const double density = 0.1 + 0.8 * static_cast<double>(rng.uniform_below(1000)) / 1000.0;
          const Digraph g = random_digraph(n, density, rng);
          const CountPair a = count_bruteforce(g), b = count_permanent(g);
          tally.record(a);
          if (a != b) return {false, "graph " + std::to_string(t)};
        }
        return {true, std::to_string(graphs) + " random digraphs, n<=8"};
      });

  run("layered-vs-permanent", "layered transfer count equals permanents on blow-up subgraphs",
      [&]() -> Outcome {
        Rng rng(Seed{202});
        const int graphs = tiny ? 30 : 120;
        for (int t = 0; t < graphs; ++t) {
          const int ell = 2 + static_cast<int>(rng.uniform_below(3));
          const int kmax = 16 / ell;
          const int k = 1 + static_cast<int>(rng.uniform_below(kmax));
          const BlowupDigraph base = build_blowup(k, ell);
          const long m = static_cast<long>(rng.uniform_below(base.edge_count() + 1));
          const SampledSubgraph g = sample_subgraph(base, m, Seed{rng.next()});
          const CountPair a = count_layered(g), b = count_permanent(to_general(g));
          tally.record(a);
          if (a != b) return {false, "graph " + std::to_string(t)};
          if (k * ell <= 9 && count_bruteforce(to_general(g)) != a)
            return {false, "bruteforce disagrees, graph " + std::to_string(t)};
        }
        return {true, std::to_string(graphs) + " sampled subgraphs, kl<=16"};
      });

  run("sampler-uniformity", "G_{k,l}(m) is uniform over m-edge subgraphs", [&]() -> Outcome {
    const BlowupDigraph base = build_blowup(2, 2);
    const long trials = 50'000;
    std::map<std::vector<std::uint64_t>, long> freq;
    for (long t = 0; t < trials; ++t) {
      const auto g = sample_subgraph(base, 4, split(Seed{303}, t));
      std::vector<std::uint64_t> key;
      for (const auto& layer : g.layers()) key.insert(key.end(), layer.begin(), layer.end());
      ++freq[key];
    }
    if (freq.size() != 70) return {false, std::to_string(freq.size()) + " distinct subsets, want 70"};
    const double pr = 1.0 / 70, sd = std::sqrt(trials * pr * (1 - pr));
    double worst = 0;
    for (const auto& [key, n] : freq) worst = std::max(worst, std::fabs(n - trials * pr) / sd);
    return {worst <= 5.0, "max deviation " + std::to_string(worst) + " sd over 70 subsets"};
  });

  run("falling-ratio-identity", "(b)_x/(a)_x = C(a-x,b-x)/C(a,b)", [&]() -> Outcome {
    const long amax = tiny ? 20 : 40;
    long cases = 0;
    for (long a = 0; a <= amax; ++a)
      for (long b = 0; b <= a; ++b)
        for (long x = 0; x <= b; ++x, ++cases)
          if (falling_ratio_exact(a, b, x) != oracle::binomial_ratio(a, b, x))
            return {false, "a=" + std::to_string(a) + " b=" + std::to_string(b) + " x=" + std::to_string(x)};
    return {true, std::to_string(cases) + " triples, a<=" + std::to_string(amax)};
  });

  run("falling-ratio-asymptotics", "(b)_x/(a)_x ~ (b/a)^x exp{x^2/2 (1/a - 1/b)}", [&]() -> Outcome {
    double prev = INFINITY;
    std::string d;
    for (int k : {4, 8, 16}) {
      const auto pl = plan(0.3, k);
      const long a = pl.edge_total(), x = long{k} * pl.ell;
      const double err = static_cast<double>(
          std::fabs(falling_ratio_asymptotic(a, pl.m, x) / to_real(falling_ratio_exact(a, pl.m, x)) - 1));
      d += "k=" + std::to_string(k) + ":" + std::to_string(err) + " ";
      if (!(err < prev)) return {false, d};
      prev = err;
    }
    return {true, d};
  });

  run("h-matching-oracle", "h(a,b) counts matchings of K_{a,a} avoiding a b-edge matching",
      [&]() -> Outcome {
        const int amax = tiny ? 6 : 7;
        for (int a = 0; a <= amax; ++a)
          for (int b = 0; b <= a; ++b)
            if (h_exact(a, b) != oracle::matchings_avoiding(a, b))
              return {false, "a=" + std::to_string(a) + " b=" + std::to_string(b)};
        return {true, "a<=" + std::to_string(amax)};
      });

  run("h-bounds", "0 <= h(a,b) <= a!", [&]() -> Outcome {
    const long amax = tiny ? 30 : 60;
    for (long a = 0; a <= amax; ++a) {
      const BigInt fa = factorial(a);
      for (long b = 0; b <= a; ++b) {
        const BigInt h = h_exact(a, b);
        if (h < 0 || h > fa) return {false, "a=" + std::to_string(a) + " b=" + std::to_string(b)};
      }
    }
    return {true, "a<=" + std::to_string(amax)};
  });

  run("h-window-decay", "h(a,b) = (1 + O(a^{-4/5})) a!/e for a - a^{1/10} <= b <= a",
      [&]() -> Outcome {
        double prev = INFINITY;
        std::string d;
        for (long a : {10L, 20L, 40L}) {
          WideReal worst = 0;
          for (long b = 0; b <= a; ++b)
            if (in_h_window(a, b)) worst = std::max(worst, WideReal(abs(h_relative_error(a, b))));
          const double w = worst.convert_to<double>();
          d += "a=" + std::to_string(a) + ":" + std::to_string(w) + " ";
          if (!(w < prev)) return {false, d};
          prev = w;
        }
        return {true, d};
      });

  run("f-bounds", "2 <= f_l(1) <= 2 + 1/(2^l - 1)", [&]() -> Outcome {
    for (int ell = 1; ell <= 12; ++ell) {
      const auto v = f_eval(ell, 1, 1e-15L);
      if (!f_at_one_bounds(ell).contains(v.value, v.tail_bound))
        return {false, "l=" + std::to_string(ell)};
    }
    return {true, "l=1..12"};
  });

  run("f-monotone", "f_l strictly increasing on [0, inf)", [&]() -> Outcome {
    for (int ell = 1; ell <= 6; ++ell) {
      Real prev = -1;
      for (int s = 0; s <= 80; ++s) {
        const Real v = f_eval(ell, s * 0.05L, 1e-15L).value;
        if (!(v > prev)) return {false, "l=" + std::to_string(ell)};
        prev = v;
      }
    }
    return {true, "l=1..6, x in [0,4]"};
  });

  run("solver", "f_l(1/p) = 1/r with l minimal such that f_l(1) < 1/r", [&]() -> Outcome {
    if (choose_ell(0.3) != 2) return {false, "choose_ell(0.3) != 2"};
    if (choose_ell(0.45) != 3) return {false, "choose_ell(0.45) != 3"};
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
      const double r = 0.01 + 0.48 * t / 49.0;
      const int ell = choose_ell(r);
      if (ell > 2 && f_eval(ell - 1, 1).value < 1 / static_cast<Real>(r))
        return {false, "choose_ell not minimal at r=" + std::to_string(r)};
      const auto sol = solve_p(r, ell);
      if (!(sol.p > 0 && sol.p < 1)) return {false, "p outside (0,1)"};
      const double res = static_cast<double>(
          std::fabs(f_eval(ell, 1 / static_cast<Real>(sol.p), 1e-16L).value * r - 1));
      worst = std::max(worst, res);
    }
    return {worst <= 1e-9, "max residual " + detail::sci(worst) + " over 50 r"};
  });

  run("first-moment-oracle", "E[X], E[Y] equal averages over all m-edge subgraphs",
      [&]() -> Outcome {
        for (auto [k, ell] : {std::pair{2, 2}, {2, 3}}) {
          for (long m = 0; m <= long{k} * k * ell; ++m) {
            const auto e = oracle::enumerate_moments(k, ell, m);
            if (expected_x_exact(k, ell, m) != e.ex || expected_y_exact(k, ell, m) != e.ey)
              return {false, "k=" + std::to_string(k) + " l=" + std::to_string(ell) + " m=" + std::to_string(m)};
          }
        }
        if (expected_x_exact(2, 2, 6) != BigRational(6, 7) || expected_y_exact(2, 2, 6) != 4)
          return {false, "spot values at (2,2,6)"};
        return {true, "(2,2) m<=8, (2,3) m<=12"};
      });

  if (!tiny) {
    run("second-moment-oracle", "E[X^2] exact, E[Y^2] bound dominates enumeration",
        [&]() -> Outcome {
          for (auto [k, ell] : {std::pair{2, 2}, {2, 3}}) {
            for (long m = 0; m <= long{k} * k * ell; ++m) {
              const auto e = oracle::enumerate_moments(k, ell, m);
              if (second_moment_x_exact(k, ell, m) != e.ex2)
                return {false, "E[X^2] k=" + std::to_string(k) + " l=" + std::to_string(ell) + " m=" + std::to_string(m)};
              if (second_moment_y_upper(k, ell, m) < e.ey2)
                return {false, "E[Y^2] bound k=" + std::to_string(k) + " l=" + std::to_string(ell) + " m=" + std::to_string(m)};
            }
          }
          return {true, "(2,2) m<=8, (2,3) m<=12"};
        });

    run("moment-asymptotics", "exact/asymptotic E[X], E[Y] -> 1", [&]() -> Outcome {
      double px = INFINITY, py = INFINITY;
      std::string d;
      for (int k : {4, 8, 16}) {
        const auto pl = plan(0.3, k);
        const Real p_eff = static_cast<Real>(pl.m) / pl.edge_total();
        const double ex = static_cast<double>(std::fabs(
            ratio_to_asymptotic(expected_x_exact(k, pl.ell, pl.m), expected_x_asymptotic(k, pl.ell, p_eff)) - 1));
        const double ey = static_cast<double>(std::fabs(
            ratio_to_asymptotic(expected_y_exact(k, pl.ell, pl.m), expected_y_asymptotic(k, pl.ell, p_eff)) - 1));
        d += "k=" + std::to_string(k) + ":" + std::to_string(ex) + "/" + std::to_string(ey) + " ";
        if (!(ex < px && ey < py)) return {false, d};
        px = ex;
        py = ey;
      }
      return {true, d};
    });

    run("convergence-trend", "E[X]/E[Y] -> r and E[X^2]/E[X]^2 -> 1 as k grows", [&]() -> Outcome {
      std::vector<int> ks = full ? std::vector<int>{4, 6, 8, 10, 12} : std::vector<int>{4, 6, 8};
      const auto rows = convergence_sweep(0.3, ks, 0, Seed{kDefaultSeed}, opt.threads);
      std::string d;
      for (std::size_t t = 0; t < rows.size(); ++t) {
        d += "k=" + std::to_string(rows[t].k) + ":" + std::to_string(rows[t].abs_error) + " ";
        if (t > 0 && !(rows[t].abs_error < rows[t - 1].abs_error &&
                       rows[t].x_concentration < rows[t - 1].x_concentration))
          return {false, d};
      }
      return {true, d};
    });

    run("mc-unbiasedness", "sampled mean of X matches E[X] at (k,l,m) = (3,2,9)", [&]() -> Outcome {
      const long trials = full ? 5000 : 2000;
      ConstructionPlan pl = plan_for_model(3, 2, 9);
      const auto rep = run_mc(pl, trials, Seed{404}, kDefaultEpsilon, opt.threads);
      double mean = 0, sq = 0;
      for (const auto& tr : rep.per_trial) {
        tally.record({tr.x, tr.y});
        mean += tr.x.convert_to<double>();
      }
      mean /= trials;
      for (const auto& tr : rep.per_trial) sq += std::pow(tr.x.convert_to<double>() - mean, 2);
      const double se = std::sqrt(sq / (trials - 1) / trials);
      const double exact = static_cast<double>(to_real(expected_x_exact(3, 2, 9)));
      const double z = std::fabs(mean - exact) / se;
      return {z <= 5.0, "mean " + std::to_string(mean) + " vs " + std::to_string(exact) +
                            " (" + std::to_string(z) + " se)"};
    });
  }

  if (full) {
    run("mc-concentration", "X/Y concentrates at E[X]/E[Y] (plan(0.3, 8), 200 trials)",
        [&]() -> Outcome {
          const auto rep = run_mc(plan(0.3, 8), 200, Seed{kDefaultSeed}, 0.05, opt.threads);
          for (const auto& tr : rep.per_trial) tally.record({tr.x, tr.y});
          return {rep.fraction_within >= kConcentrationRegressionFloor,
                  "fraction within 0.05: " + std::to_string(rep.fraction_within)};
        });
  }

  run("universal-bound", "2X <= Y and Y >= X + 1 for every counted graph", [&]() -> Outcome {
    return {tally.violations() == 0 && tally.graphs() > 0,
            std::to_string(tally.violations()) + " violations in " + std::to_string(tally.graphs()) + " graphs"};
  });

  return summary;
}

}  // namespace dpratio

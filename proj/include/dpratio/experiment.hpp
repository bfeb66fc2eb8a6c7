#pragma once

// Monte Carlo harness: seeded trials of plan -> sample G_{k,ell}(m) -> count,
// aggregated against the exact first moments.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpratio/count.hpp"
#include "dpratio/digraph.hpp"
#include "dpratio/moments.hpp"
#include "dpratio/params.hpp"
#include "dpratio/rng.hpp"

namespace dpratio {

inline constexpr double kDefaultEpsilon = 0.05;
inline constexpr std::uint64_t kDefaultSeed = 0;

struct TrialResult {
  std::uint64_t seed = 0;
  BigInt x;  // derangements
  BigInt y;  // permutations
  double ratio = 0;
};

struct McReport {
  ConstructionPlan plan;
  long trials = 0;
  std::uint64_t master_seed = 0;
  double epsilon = kDefaultEpsilon;
  std::vector<TrialResult> per_trial;
  double empirical_mean_ratio = 0;
  double empirical_sd = 0;
  double exact_ratio = 0;
  double fraction_within = 0;
  long bound_violations = 0;  // trials with 2X > Y or Y < X + 1
};

/// Runs `fn(t)` for t in [0, count) on `threads` workers. Work is handed out by
/// an atomic counter; callers write results by index, so the outcome does not
/// depend on the schedule.
template <class Fn>
void parallel_for(long count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(1L, count))));
  if (threads == 1) {
    for (long t = 0; t < count; ++t) fn(t);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (long t; (t = next.fetch_add(1)) < count;) {
        try {
          fn(t);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Trial t samples with seed split(seed, t) and counts with count_layered.
inline McReport run_mc(const ConstructionPlan& pl, long trials, Seed seed,
                       double epsilon = kDefaultEpsilon, unsigned threads = default_threads()) {
  require(trials >= 1, "run_mc: trials must be >= 1");
  require(epsilon >= 0, "run_mc: epsilon must be >= 0");
  require(pl.k <= kLayeredMaxPartSize, "run_mc: k exceeds the layered counter budget (k <= 12)");
  const BlowupDigraph base = build_blowup(pl.k, pl.ell);
  require(pl.m >= 0 && pl.m <= base.edge_count(), "run_mc: m out of range");

  McReport rep;
  rep.plan = pl;
  rep.trials = trials;
  rep.master_seed = seed.value;
  rep.epsilon = epsilon;
  rep.per_trial.resize(trials);
  parallel_for(trials, threads, [&](long t) {
    const Seed s = split(seed, static_cast<std::uint64_t>(t));
    const CountPair c = count_layered(sample_subgraph(base, pl.m, s));
    auto& out = rep.per_trial[t];
    out.seed = s.value;
    out.x = c.derangements;
    out.y = c.permutations;
    out.ratio = static_cast<double>(to_real(c.ratio()));
  });

  rep.exact_ratio = static_cast<double>(to_real(
      BigRational(expected_x_exact(pl.k, pl.ell, pl.m) / expected_y_exact(pl.k, pl.ell, pl.m))));
  // serial reduction in trial order
  long within = 0;
  double sum = 0;
  // shifted by the first ratio so identical trials give exactly zero spread
  const double shift = rep.per_trial.front().ratio;
  for (const auto& tr : rep.per_trial) {
    sum += tr.ratio - shift;
    if (std::fabs(tr.ratio - rep.exact_ratio) <= epsilon) ++within;
    if (!(CountPair{tr.x, tr.y}.satisfies_universal_bound())) ++rep.bound_violations;
  }
  const double shifted_mean = sum / static_cast<double>(trials);
  rep.empirical_mean_ratio = shift + shifted_mean;
  double ss = 0;
  for (const auto& tr : rep.per_trial) ss += (tr.ratio - shift - shifted_mean) * (tr.ratio - shift - shifted_mean);
  rep.empirical_sd = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) : 0.0;
  rep.fraction_within = static_cast<double>(within) / static_cast<double>(trials);
  return rep;
}

inline nlohmann::json to_json(const McReport& rep, bool include_trials = true) {
  nlohmann::json j{{"schema", 1},
                   {"plan", to_json(rep.plan)},
                   {"trials", rep.trials},
                   {"seed", rep.master_seed},
                   {"epsilon", rep.epsilon},
                   {"empirical_mean_ratio", rep.empirical_mean_ratio},
                   {"empirical_sd", rep.empirical_sd},
                   {"exact_ratio", rep.exact_ratio},
                   {"fraction_within", rep.fraction_within},
                   {"bound_violations", rep.bound_violations}};
  if (include_trials) {
    auto arr = nlohmann::json::array();
    for (const auto& tr : rep.per_trial)
      arr.push_back({{"seed", tr.seed}, {"x", tr.x.str()}, {"y", tr.y.str()}, {"ratio", tr.ratio}});
    j["per_trial"] = std::move(arr);
  }
  return j;
}

inline constexpr const char* kTrialCsvHeader = "trial,seed,x,y,ratio";

inline std::string trials_csv(const McReport& rep) {
  std::string out = std::string(kTrialCsvHeader) + "\n";
  for (std::size_t t = 0; t < rep.per_trial.size(); ++t) {
    const auto& tr = rep.per_trial[t];
    out += std::to_string(t) + "," + std::to_string(tr.seed) + "," + tr.x.str() + "," +
           tr.y.str() + "," + detail::fmt_real(tr.ratio) + "\n";
  }
  return out;
}

struct SweepRow {
  int k = 0;
  int ell = 0;
  long m = 0;
  double p = 0;
  double exact_ratio = 0;
  double abs_error = 0;  // |exact_ratio - r|
  double x_concentration = 0;
  double empirical_mean_ratio = std::nan("");  // nan when trials == 0
};

/// One row per k (sorted ascending): exact E[X]/E[Y], its distance to r,
/// E[X^2]/E[X]^2 - 1 and, when trials > 0, the Monte Carlo mean of X/Y.
inline std::vector<SweepRow> convergence_sweep(double r, std::vector<int> k_list, long trials,
                                               Seed seed, unsigned threads = default_threads()) {
  require(!k_list.empty(), "convergence_sweep: empty k list");
  require(trials >= 0, "convergence_sweep: trials must be >= 0");
  std::sort(k_list.begin(), k_list.end());
  std::vector<SweepRow> rows;
  for (int k : k_list) {
    const ConstructionPlan pl = plan(r, k);
    require(k <= kSecondMomentMaxK, "convergence_sweep: k exceeds the second-moment budget");
    SweepRow row;
    row.k = k;
    row.ell = pl.ell;
    row.m = pl.m;
    row.p = pl.p;
    const BigRational ex = expected_x_exact(k, pl.ell, pl.m);
    const BigRational ey = expected_y_exact(k, pl.ell, pl.m);
    const BigRational ratio = ex / ey;
    row.exact_ratio = static_cast<double>(to_real(ratio));
    row.abs_error = static_cast<double>(std::fabs(to_real(BigRational(ratio - BigRational(r)))));
    if (ex > 0) {
      const BigRational ex2 = second_moment_x_exact(k, pl.ell, pl.m);
      row.x_concentration = static_cast<double>(to_real(BigRational(ex2 / (ex * ex) - 1)));
    } else {
      row.x_concentration = std::nan("");
    }
    if (trials > 0) row.empirical_mean_ratio = run_mc(pl, trials, seed, kDefaultEpsilon, threads).empirical_mean_ratio;
    rows.push_back(row);
  }
  return rows;
}

inline constexpr const char* kSweepCsvHeader =
    "r,k,ell,m,p,exact_ratio,abs_error,x_concentration,empirical_mean_ratio";

inline std::string sweep_csv(double r, const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  using detail::fmt_real;
  for (const auto& row : rows)
    out += fmt_real(r) + "," + std::to_string(row.k) + "," + std::to_string(row.ell) + "," +
           std::to_string(row.m) + "," + fmt_real(row.p) + "," + fmt_real(row.exact_ratio) + "," +
           fmt_real(row.abs_error) + "," + fmt_real(row.x_concentration) + "," +
           fmt_real(row.empirical_mean_ratio) + "\n";
  return out;
}

}  // namespace dpratio

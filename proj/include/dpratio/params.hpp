#pragma once

// Turning a target ratio r in (0, 1/2) into construction parameters:
// the smallest ell >= 2 with f_ell(1) < 1/r, then x > 1 with f_ell(x) = 1/r
// (exists by continuity since f_ell grows without bound), p = 1/x and
// m = round(p k^2 ell).

#include <cmath>

#include <nlohmann/json.hpp>

#include "dpratio/special.hpp"

namespace dpratio {

inline constexpr Real kDefaultSolverTol = 1e-10L;
inline constexpr int kSolverMaxIterations = 200;
inline constexpr int kMaxEll = 200;

/// Targets handled by fixed graphs rather than by the random construction.
inline constexpr double kRatioSingleVertex = 0.0;  // one vertex, no edges: (0, 1)
inline constexpr double kRatioDirectedCycle = 0.5; // any directed cycle: (1, 2)

struct ConstructionPlan {
  double r = 0;
  int ell = 0;
  double p = 0;
  double x = 0;
  int k = 0;
  long m = 0;

  long edge_total() const { return static_cast<long>(k) * k * ell; }
  friend bool operator==(const ConstructionPlan&, const ConstructionPlan&) = default;
};

inline void require_ratio(double r, const char* who) {
  require(r > 0 && r < 0.5, std::string(who) + ": r must lie in (0, 1/2)");
}

inline int choose_ell(double r) {
  require_ratio(r, "choose_ell");
  const Real target = 1.0L / static_cast<Real>(r);
  for (int ell = 2; ell <= kMaxEll; ++ell)
    if (f_eval(ell, 1).value < target) return ell;
  throw Error("choose_ell: r too close to 1/2 (no ell <= 200 works)");
}

struct PSolution {
  double p;
  double x;
};

/// Bisection for f_ell(x) = 1/r on (1, hi], hi doubled until it brackets.
inline PSolution solve_p(double r, int ell, Real tol = kDefaultSolverTol) {
  require_ratio(r, "solve_p");
  require(ell >= 1, "solve_p: ell must be >= 1");
  require(tol > 0, "solve_p: tol must be positive");
  const Real target = 1.0L / static_cast<Real>(r);
  const Real series_tol = tol / 100;
  auto f = [&](Real x) { return f_eval(ell, x, series_tol).value; };
  require(f(1) < target, "solve_p: f_ell(1) >= 1/r, no root in (1, inf)");

  Real lo = 1, hi = 2;
  while (f(hi) <= target) {
    lo = hi;
    hi *= 2;
  }
  Real mid = (lo + hi) / 2;
  for (int it = 0; it < kSolverMaxIterations; ++it) {
    mid = (lo + hi) / 2;
    const Real v = f(mid);
    if (std::fabs(v - target) <= tol) break;
    (v < target ? lo : hi) = mid;
  }
  require(std::fabs(f(mid) - target) <= tol, "solve_p: bisection did not reach tolerance");
  return {static_cast<double>(1 / mid), static_cast<double>(mid)};
}

inline ConstructionPlan plan(double r, int k, Real tol = kDefaultSolverTol) {
  require_ratio(r, "plan");
  require(k >= 2, "plan: k must be >= 2");
  ConstructionPlan out;
  out.r = r;
  out.k = k;
  out.ell = choose_ell(r);
  const auto sol = solve_p(r, out.ell, tol);
  out.p = sol.p;
  out.x = sol.x;
  // nearest integer, ties up
  out.m = static_cast<long>(std::floor(out.p * static_cast<double>(out.edge_total()) + 0.5));
  require(out.m > 0 && out.m < out.edge_total(),
          "plan: m rounds to 0 or k^2 ell; choose a larger k");
  return out;
}

inline nlohmann::json to_json(const ConstructionPlan& pl) {
  return {{"schema", 1}, {"r", pl.r}, {"ell", pl.ell}, {"p", pl.p},
          {"x", pl.x},    {"k", pl.k}, {"m", pl.m}};
}

inline ConstructionPlan plan_from_json(const nlohmann::json& j) {
  ConstructionPlan pl;
  pl.r = j.at("r").get<double>();
  pl.ell = j.at("ell").get<int>();
  pl.p = j.at("p").get<double>();
  pl.x = j.at("x").get<double>();
  pl.k = j.at("k").get<int>();
  pl.m = j.at("m").get<long>();
  return pl;
}

}  // namespace dpratio

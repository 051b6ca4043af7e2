#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "olg/economy.hpp"
#include "olg/equilibrium.hpp"

namespace olg {

/// Tax every young epsilon from period t_start on; each contemporaneous old
/// receives G*epsilon (the young/old cohort ratio times the tax).
struct TransferScheme {
  double epsilon = 0.0;
  long t_start = 0;
};

enum class WelfareVerdict { Improvement, NoImprovementFound };

/// Deltas are accumulated over complete lifetimes only: deltas[i] is the
/// utility change of generation t0 + i for i up to horizon - 1 - t0, and the
/// initial old (generation t0 - 1, alive only at t0) are reported separately.
/// The generation young at the horizon has no stored old age and is excluded
/// from the comparison; the generation old at the horizon counts toward
/// "no one loses" but not toward "someone strictly gains", so a windfall
/// paid at the window's edge cannot masquerade as an improvement.
struct ImprovementReport {
  TransferScheme scheme;
  std::vector<double> deltas;
  double initial_old_delta = 0.0;
  double old_at_start_delta = 0.0;  ///< delta of the generation old at t_start
  double min_delta = 0.0;
  double max_clearing_residual = 0.0;
  WelfareVerdict verdict = WelfareVerdict::NoImprovementFound;
};

/// Tolerance below which a utility delta still counts as "not a loss".
inline constexpr double kDeltaTolerance = -1e-12;

/// Marginal lifetime-utility effect on generation t of the scheme's
/// direction: -U_1(y_t, z_{t+1}) + G * U_2(y_t, z_{t+1}).  Converges to
/// (G - R) * U_2 at the path's limit, so its limiting sign is decided by
/// the interest rate falling short of growth.
inline double first_order_gain(const EquilibriumPath& path, long t,
                               const CRRAParams& pref, const Demography& demo) {
  if (t >= path.cfg.horizon) {
    throw std::invalid_argument("first_order_gain needs t in [t0, horizon)");
  }
  std::size_t i = path.idx(t);
  return -crra_marginal(path.y[i], pref) +
         demo.G * pref.beta * crra_marginal(path.z[i + 1], pref);
}

/// Applies the scheme to the path's allocation and reports per-generation
/// utility deltas.  Feasibility (epsilon below every taxed young's
/// consumption) is enforced; resource balance of the reallocated economy is
/// re-verified period by period and the worst residual reported.
inline ImprovementReport apply_transfer(const EquilibriumPath& path,
                                        const TransferScheme& scheme,
                                        const CRRAParams& pref,
                                        const Demography& demo) {
  if (scheme.t_start < path.t0 || scheme.t_start > path.cfg.horizon) {
    throw std::invalid_argument("t_start must lie in [t0, horizon]");
  }
  if (!(scheme.epsilon >= 0.0) || !std::isfinite(scheme.epsilon)) {
    throw std::domain_error("epsilon must be >= 0 and finite");
  }
  long horizon = path.cfg.horizon;
  double eps = scheme.epsilon;
  double G = demo.G;
  for (long t = scheme.t_start; t <= horizon; ++t) {
    if (!(path.y[path.idx(t)] - eps > 0.0)) {
      std::ostringstream os;
      os.precision(12);
      os << "transfer epsilon = " << eps << " infeasible at period " << t
         << ": young consumption " << path.y[path.idx(t)];
      throw std::domain_error(os.str());
    }
  }

  ImprovementReport rep;
  rep.scheme = scheme;
  auto lifetime = [&](double y, double z) {
    return crra_utility(y, pref) + pref.beta * crra_utility(z, pref);
  };

  std::size_t gens = static_cast<std::size_t>(horizon - path.t0);
  rep.deltas.resize(gens);
  bool someone_gains = false;
  double min_delta = 0.0;
  for (std::size_t i = 0; i < gens; ++i) {
    long g = path.t0 + static_cast<long>(i);
    double y0 = path.y[i];
    double z0 = path.z[i + 1];
    double y1 = g >= scheme.t_start ? y0 - eps : y0;
    double z1 = g + 1 >= scheme.t_start ? z0 + G * eps : z0;
    double delta = lifetime(y1, z1) - lifetime(y0, z0);
    rep.deltas[i] = delta;
    min_delta = std::min(min_delta, delta);
    if (g < horizon - 1 && delta > 0.0) someone_gains = true;
  }
  if (scheme.t_start == path.t0 && eps > 0.0) {
    rep.initial_old_delta =
        crra_utility(path.z[0] + G * eps, pref) - crra_utility(path.z[0], pref);
    if (rep.initial_old_delta > 0.0) someone_gains = true;
  }
  min_delta = std::min(min_delta, rep.initial_old_delta);
  rep.min_delta = min_delta;
  rep.old_at_start_delta =
      scheme.t_start == path.t0
          ? rep.initial_old_delta
          : rep.deltas[static_cast<std::size_t>(scheme.t_start - 1 - path.t0)];

  for (long t = path.t0; t <= horizon; ++t) {
    std::size_t i = path.idx(t);
    double y1 = t >= scheme.t_start ? path.y[i] - eps : path.y[i];
    double z1 = t >= scheme.t_start ? path.z[i] + G * eps : path.z[i];
    double demand = y1 + z1 / G;
    double supply = path.e_y[i] + path.cfg.e_o / G + path.r[i] * path.x[i];
    rep.max_clearing_residual =
        std::max(rep.max_clearing_residual, std::abs(demand - supply) / demand);
  }

  if (min_delta >= kDeltaTolerance && someone_gains) {
    rep.verdict = WelfareVerdict::Improvement;
  }
  return rep;
}

/// Candidate taxes and the spacing of starting periods to try.
struct SearchGrid {
  std::vector<double> epsilons{1e-4, 1e-3, 1e-2, 5e-2};
  long t_start_stride = 4;
};

/// Scans the (epsilon, t_start) grid and returns the qualifying scheme with
/// the largest minimum delta, preferring the earliest grid point on ties.
/// Finding nothing within this one-parameter family never certifies the
/// path efficient; the diagnostics carry the efficiency evidence.
inline ImprovementReport improvement_search(const EquilibriumPath& path,
                                            const CRRAParams& pref,
                                            const Demography& demo,
                                            const SearchGrid& grid = {}) {
  if (grid.epsilons.empty() || grid.t_start_stride < 1) {
    throw std::invalid_argument("search grid must be nonempty");
  }
  std::size_t n = path.size();
  std::vector<double> suffix_min_y(n);
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t i = n; i-- > 0;) {
    running = std::min(running, path.y[i]);
    suffix_min_y[i] = running;
  }

  ImprovementReport best;
  best.scheme.t_start = path.t0;
  bool found = false;
  for (double eps : grid.epsilons) {
    if (!(eps > 0.0)) continue;
    for (long T = path.t0; T < path.cfg.horizon; T += grid.t_start_stride) {
      if (!(eps < suffix_min_y[path.idx(T)])) continue;
      ImprovementReport rep = apply_transfer(path, {eps, T}, pref, demo);
      if (rep.verdict != WelfareVerdict::Improvement) continue;
      if (!found || rep.min_delta > best.min_delta) {
        best = rep;
        found = true;
      }
    }
  }
  return best;
}

}  // namespace olg

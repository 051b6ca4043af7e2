#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "olg/economy.hpp"
#include "olg/equilibrium.hpp"
#include "olg/errors.hpp"

namespace olg {

enum class Verdict { Convergent, Divergent, Inconclusive };

/// Three-valued answer derived from a classification; Unknown whenever the
/// underlying verdict is Inconclusive, never silently resolved.
enum class Flag { Yes, No, Unknown };

/// Margins for the windowed series classifier.  The verdict is evidence
/// from a finite window, not a proof, so every margin errs toward
/// Inconclusive.
struct ClassifyOptions {
  double ratio_margin = 1e-3;   ///< geometric ratio must clear 1 -+ this margin
  double lower_bound = 1e-8;    ///< epsilon for divergence by bounded-below terms
  double flat_slope = 1e-4;     ///< max log-slope decay admissible as "not vanishing"
  double stability_rel = 0.2;   ///< half-window slope agreement, relative part
  double stability_abs = 1e-5;  ///< half-window slope agreement, absolute floor
  std::size_t min_length = 32;
};

/// Outcome of classifying the series sum of a nonnegative term sequence.
/// partial_sum is the horizon partial sum; tail_ratio the fitted asymptotic
/// ratio of consecutive terms; the evidence window [window_begin,
/// window_end) is the index range the verdict was read from.
struct SeriesClassification {
  Verdict verdict = Verdict::Inconclusive;
  double partial_sum = 0.0;
  double tail_ratio = 0.0;
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
};

namespace detail {

inline double kahan_sum(std::span<const double> terms) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : terms) {
    if (std::isinf(v) || std::isinf(sum)) {  // compensation would produce NaN
      sum += v;
      comp = 0.0;
      continue;
    }
    double yk = v - comp;
    double tk = sum + yk;
    comp = (tk - sum) - yk;
    sum = tk;
  }
  return sum;
}

/// Least-squares slope of values against their index over [begin, end).
inline double lsq_slope(std::span<const double> values, std::size_t begin,
                        std::size_t end) {
  double n = static_cast<double>(end - begin);
  double mean_x = (static_cast<double>(begin) + static_cast<double>(end) - 1.0) / 2.0;
  double mean_y = 0.0;
  for (std::size_t i = begin; i < end; ++i) mean_y += values[i];
  mean_y /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    double dx = static_cast<double>(i) - mean_x;
    sxy += dx * (values[i] - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Core classifier on log terms.  A verdict needs both a clear fitted ratio
/// and slope stability across the two halves of the evidence window;
/// bounded-below divergence additionally tolerates any not-actually-decaying
/// tail.  Everything else is Inconclusive.
inline SeriesClassification classify_log_core(std::span<const double> log_terms,
                                              double partial_sum,
                                              const ClassifyOptions& opts) {
  std::size_t n = log_terms.size();
  if (n < opts.min_length) {
    throw std::invalid_argument("series too short to classify: " + std::to_string(n) +
                                " < " + std::to_string(opts.min_length));
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (double lt : log_terms) {
    if (std::isnan(lt) || lt == kInf) {
      throw std::domain_error("log terms must be finite or -inf");
    }
  }

  SeriesClassification out;
  out.partial_sum = partial_sum;
  out.window_begin = n / 2;
  out.window_end = n;

  std::size_t zeros = 0;
  double window_min = kInf;
  for (std::size_t i = out.window_begin; i < n; ++i) {
    if (log_terms[i] == -kInf) ++zeros;
    window_min = std::min(window_min, log_terms[i]);
  }
  std::size_t window_len = n - out.window_begin;
  if (zeros == window_len) {
    out.verdict = Verdict::Convergent;  // identically zero tail
    out.tail_ratio = 0.0;
    return out;
  }
  if (zeros > 0) return out;  // mixed zeros: no usable slope

  std::size_t mid = out.window_begin + window_len / 2;
  double s_full = lsq_slope(log_terms, out.window_begin, out.window_end);
  double s_lo = lsq_slope(log_terms, out.window_begin, mid);
  double s_hi = lsq_slope(log_terms, mid, out.window_end);
  bool stable = std::abs(s_hi - s_lo) <=
                std::max(opts.stability_rel * std::abs(s_full), opts.stability_abs);
  out.tail_ratio = std::exp(s_full);

  bool bounded_below =
      window_min >= std::log(opts.lower_bound) && s_full >= -opts.flat_slope;
  if (stable && s_full <= std::log1p(-opts.ratio_margin)) {
    out.verdict = Verdict::Convergent;
  } else if (bounded_below || (stable && s_full >= std::log1p(opts.ratio_margin))) {
    out.verdict = Verdict::Divergent;
  }
  return out;
}

}  // namespace detail

/// Classifies Σ terms from the terms themselves.  Terms must be >= 0.
inline SeriesClassification classify_series(std::span<const double> terms,
                                            const ClassifyOptions& opts = {}) {
  std::vector<double> logs(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (std::isnan(terms[i]) || terms[i] < 0.0) {
      throw std::domain_error("series terms must be nonnegative");
    }
    logs[i] = std::log(terms[i]);
  }
  return detail::classify_log_core(logs, detail::kahan_sum(terms), opts);
}

/// Same verdict from log terms (use when levels would over- or underflow);
/// the partial sum saturates at inf if the level terms do.
inline SeriesClassification classify_series_log(std::span<const double> log_terms,
                                                const ClassifyOptions& opts = {}) {
  std::vector<double> levels(log_terms.size());
  for (std::size_t i = 0; i < log_terms.size(); ++i) levels[i] = std::exp(log_terms[i]);
  return detail::classify_log_core(log_terms, detail::kahan_sum(levels), opts);
}

/// Dividend-price ratio test: Σ r_t/P_t converges exactly when the price
/// carries a bubble, diverges when the price is fundamental.
inline SeriesClassification classify_bubble(const EquilibriumPath& path,
                                            const ClassifyOptions& opts = {}) {
  std::size_t n = path.size();
  std::vector<double> log_terms(n);
  for (std::size_t i = 0; i < n; ++i) log_terms[i] = path.log_r[i] - path.log_P[i];
  return classify_series_log(log_terms, opts);
}

inline Flag bubble_flag(const SeriesClassification& c) {
  if (c.verdict == Verdict::Convergent) return Flag::Yes;
  if (c.verdict == Verdict::Divergent) return Flag::No;
  return Flag::Unknown;
}

/// Efficiency-side series Σ 1/(q_t a_t) with a_t = G^t, evaluated in log
/// space with q normalized at t0 (a constant factor, immaterial to the
/// verdict).  Divergent means the criterion holds.
inline SeriesClassification cass_check(const EquilibriumPath& path,
                                       const ClassifyOptions& opts = {}) {
  std::size_t n = path.size();
  double log_G = std::log(path.cfg.demo.G);
  std::vector<double> log_terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(path.t0 + static_cast<long>(i));
    log_terms[i] = -(path.log_q[i] + t * log_G);
  }
  return classify_series_log(log_terms, opts);
}

inline Flag cass_flag(const SeriesClassification& c) {
  if (c.verdict == Verdict::Divergent) return Flag::Yes;
  if (c.verdict == Verdict::Convergent) return Flag::No;
  return Flag::Unknown;
}

/// A bubble whose detrended price also stays away from zero.  The infimum is
/// taken over the trailing window, mirroring the classifier's evidence.
struct AsymptoticBubble {
  bool value = false;
  double tail_infimum = 0.0;
  SeriesClassification bubble;
};

inline AsymptoticBubble asymptotically_bubbly_check(const EquilibriumPath& path,
                                                    const ClassifyOptions& opts = {}) {
  AsymptoticBubble out;
  out.bubble = classify_bubble(path, opts);
  std::size_t n = path.size();
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = n / 2; i < n; ++i) inf = std::min(inf, path.savings[i]);
  out.tail_infimum = inf;
  out.value = out.bubble.verdict == Verdict::Convergent && inf > opts.lower_bound;
  return out;
}

/// Natural-rate comparison deciding whether every equilibrium of the economy
/// must be asymptotically bubbly: holds iff R < G_d < G, where R is the
/// marginal rate of substitution at the limiting no-asset consumption pair
/// (e_y + w, e_o) and G_d = G^(1/sigma) is the rent growth factor.
struct NecessityCheck {
  double natural_rate = 0.0;
  double rent_growth = 0.0;
  double growth = 0.0;
  bool holds = false;
};

inline NecessityCheck necessity_check(const ScenarioConfig& cfg) {
  cfg.validate();
  Asymptotics a = asymptotics(cfg.ces, cfg.demo);
  NecessityCheck out;
  out.rent_growth = a.G_r;
  out.growth = cfg.demo.G;
  double c_young = limiting_young_endowment(cfg) + a.w;
  if (!(c_young > 0.0)) {
    throw std::domain_error(
        "limiting young consumption is not positive; the construction bound fails");
  }
  // e_o == 0 pins marginal utility of old consumption at infinity: R = 0.
  out.natural_rate = cfg.e_o == 0.0 ? 0.0 : mrs(c_young, cfg.e_o, cfg.pref);
  out.holds = out.natural_rate < out.rent_growth && out.rent_growth < out.growth;
  return out;
}

/// The four closed-form thresholds governing the constructions, plus which
/// side the config's (p, e_o) fall on.  rate_meets_growth reports p <=
/// p_star, the side on which the fundamental construction's limiting rate
/// weakly exceeds G (the efficient side of the dichotomy).
struct ConstructionBounds {
  double eo_bound = 0.0;
  double p_bound = 0.0;
  double necessity2_bound = 0.0;
  double p_star = 0.0;
  bool eo_satisfied = false;
  bool p_satisfied = false;
  bool necessity2_satisfied = false;
  bool rate_meets_growth = false;
};

inline ConstructionBounds construction_bounds(const ScenarioConfig& cfg) {
  cfg.validate();
  Asymptotics a = asymptotics(cfg.ces, cfg.demo);
  double G = cfg.demo.G;
  double inv_gamma = 1.0 / cfg.pref.gamma;
  ConstructionBounds out;
  out.eo_bound = eo_lower_bound(cfg);
  out.p_bound = p_lower_bound(cfg);
  out.necessity2_bound =
      cfg.e_o *
      (std::pow(cfg.pref.beta * a.G_r, -inv_gamma) -
       std::pow(cfg.pref.beta * G, -inv_gamma)) /
      (1.0 + std::pow(cfg.pref.beta * std::pow(G, 1.0 - cfg.pref.gamma), -inv_gamma));
  out.p_star = a.r / (std::pow(G, 1.0 - 1.0 / cfg.ces.sigma) - 1.0);
  out.eo_satisfied = cfg.e_o > out.eo_bound;
  out.p_satisfied = cfg.price.p > out.p_bound;
  out.necessity2_satisfied = cfg.price.p > out.necessity2_bound;
  out.rate_meets_growth = cfg.price.p <= out.p_star;
  return out;
}

/// Present value of the aggregate endowment stream
///   Σ q_t (G^t e_y_t + G^(t-1) e_o + r_t),
/// evaluated in log space.  Convergent triggers the no-bubble/efficiency
/// implication checked by the diagnostics invariants.
inline SeriesClassification pv_endowment(const EquilibriumPath& path,
                                         const ClassifyOptions& opts = {}) {
  std::size_t n = path.size();
  double G = path.cfg.demo.G;
  double log_G = std::log(G);
  std::vector<double> log_terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(path.t0 + static_cast<long>(i));
    double aggregate_pc = path.e_y[i] + path.cfg.e_o / G + path.r[i] * path.x[i];
    log_terms[i] = path.log_q[i] + t * log_G + std::log(aggregate_pc);
  }
  return classify_series_log(log_terms, opts);
}

/// Uniform curvature floor for the welfare bound: half the infimum of the
/// indifference-curve elasticity over the path's consumption pairs and a
/// multiplicative neighborhood of each (probed along the exact indifference
/// curve).  degenerate flags consumption so close to zero that the floor
/// carries no information.
struct MuBound {
  double mu = 0.0;
  bool degenerate = false;
};

inline MuBound mu_bound(const EquilibriumPath& path, const CRRAParams& pref) {
  constexpr double kGridFactors[] = {0.90, 0.95, 1.0, 1.05, 1.10};
  constexpr double kTiny = 1e-8;
  MuBound out;
  double inf = std::numeric_limits<double>::infinity();
  auto utility = [&](double c) { return crra_utility(c, pref); };
  auto inverse_utility = [&](double v) -> double {
    if (pref.log_utility()) return std::exp(v);
    double s = (1.0 - pref.gamma) * v;
    if (!(s > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::pow(s, 1.0 / (1.0 - pref.gamma));
  };
  std::size_t n = path.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double y0 = path.y[i];
    double z0 = path.z[i + 1];
    if (y0 < kTiny || z0 < kTiny) {
      out.degenerate = true;
      continue;
    }
    double level = utility(y0) + pref.beta * utility(z0);
    for (double f : kGridFactors) {
      double yy = f * y0;
      double zz = inverse_utility((level - utility(yy)) / pref.beta);
      if (!std::isfinite(zz) || !(zz > 0.0)) continue;  // off the curve's domain
      inf = std::min(inf, indifference_elasticity(yy, zz, pref));
    }
  }
  out.mu = std::isfinite(inf) ? inf / 2.0 : 0.0;
  if (!std::isfinite(inf)) out.degenerate = true;
  return out;
}

/// Everything the diagnosis of one path reports: the two defining series,
/// the asymptotic-bubble flag, the necessity comparison, all construction
/// thresholds, the endowment present value, the curvature floor, and the
/// realized rent-growth estimator (cross-check against the analytic G_d).
struct DiagnosticsReport {
  SeriesClassification bubble;
  SeriesClassification cass;
  SeriesClassification pv;
  AsymptoticBubble asymptotically_bubbly;
  NecessityCheck necessity;
  ConstructionBounds bounds;
  MuBound mu;
  double rent_growth_estimate = 0.0;
};

inline DiagnosticsReport run_diagnostics(const EquilibriumPath& path,
                                         const ClassifyOptions& opts = {}) {
  DiagnosticsReport rep;
  rep.bubble = classify_bubble(path, opts);
  rep.cass = cass_check(path, opts);
  rep.pv = pv_endowment(path, opts);
  rep.asymptotically_bubbly = asymptotically_bubbly_check(path, opts);
  rep.necessity = necessity_check(path.cfg);
  rep.bounds = construction_bounds(path.cfg);
  rep.mu = mu_bound(path, path.cfg.pref);
  rep.rent_growth_estimate =
      std::exp(detail::lsq_slope(path.log_r, path.size() / 2, path.size()));
  return rep;
}

}  // namespace olg

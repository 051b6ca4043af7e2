#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "olg/economy.hpp"
#include "olg/errors.hpp"

namespace olg {

enum class PathKind { Fundamental, Bubbly };

/// Family of candidate land-price paths, indexed by the level coefficient p:
///   Fundamental: P_t = p * G^(t/sigma)   (price grows with the rent)
///   Bubbly:      P_t = p * G^t           (price grows with the economy)
struct PricePathSpec {
  PathKind kind = PathKind::Fundamental;
  double p = 3.0;

  friend bool operator==(const PricePathSpec&, const PricePathSpec&) = default;
};

/// Everything needed to reverse-engineer one equilibrium: technology,
/// preferences, demography, the old endowment, the price path, and the
/// stored horizon T_max.  Defaults reproduce the fundamental benchmark.
struct ScenarioConfig {
  CESParams ces{};
  CRRAParams pref{};
  Demography demo{};
  double e_o = 1.0;               ///< old endowment per capita, >= 0
  PricePathSpec price{};
  long horizon = 400;             ///< last stored period T_max
  std::optional<long> t0_override;

  void validate() const {
    ces.validate();
    pref.validate();
    demo.validate();
    if (!(e_o >= 0.0) || !std::isfinite(e_o)) {
      throw std::domain_error("e_o must be >= 0 and finite");
    }
    detail::require_positive(price.p, "p");
    if (horizon < 1) throw std::domain_error("horizon must be >= 1");
    if (t0_override && (*t0_override < 0 || *t0_override > horizon)) {
      throw std::domain_error("t0_override must lie in [0, horizon]");
    }
    if (!(demo.G > 1.0) || !(ces.sigma > 1.0 + kUnitBand)) {
      throw UnsupportedRegime(
          "the land-economy construction requires G > 1 and sigma > 1");
    }
    // Level arrays P_t, r_t are exponentiated from logs; keep them in range.
    double top = std::abs(std::log(price.p)) +
                 (static_cast<double>(horizon) + 1.0) * std::log(demo.G);
    if (top > 700.0) {
      throw std::domain_error(
          "horizon * log(G) too large for level price/rent arrays; "
          "reduce horizon or G");
    }
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// One constructed equilibrium on periods [t0, horizon].  Element i of every
/// array refers to period t0 + i.  z holds old consumption dated by the
/// period it occurs (z[0] is the initial old's consumption at t0), so
/// generation t consumes (y at t, z at t+1).  e_y is the endowment-economy
/// young endowment, i.e. the land-economy endowment plus the wage; w is kept
/// alongside so either convention can be read off.  Log forms of the growing
/// series and the detrended price (savings = P_t/G^t) are stored as well.
struct EquilibriumPath {
  ScenarioConfig cfg;
  long t0 = 0;
  std::vector<double> w;        ///< wage
  std::vector<double> r;        ///< land rent, the asset's dividend
  std::vector<double> P;        ///< land price
  std::vector<double> e_y;      ///< young endowment (wage folded in)
  std::vector<double> y;        ///< young consumption
  std::vector<double> z;        ///< old consumption
  std::vector<double> R;        ///< gross risk-free rate t -> t+1
  std::vector<double> log_q;    ///< log date-0 price, normalized log_q[t0] = 0
  std::vector<double> x;        ///< per-capita land holdings 1/G^t
  std::vector<double> log_P;
  std::vector<double> log_r;
  std::vector<double> savings;  ///< per-capita land value P_t/G^t

  long first_period() const noexcept { return t0; }
  long last_period() const noexcept { return cfg.horizon; }
  std::size_t size() const noexcept { return y.size(); }

  std::size_t idx(long t) const {
    if (t < t0 || t > cfg.horizon) {
      throw std::out_of_range("period " + std::to_string(t) + " outside [" +
                              std::to_string(t0) + ", " +
                              std::to_string(cfg.horizon) + "]");
    }
    return static_cast<std::size_t>(t - t0);
  }
};

namespace detail {

inline std::string format_bound_message(const char* construction, const char* relation,
                                        const char* quantity, double actual,
                                        const char* bound_name, double bound) {
  std::ostringstream os;
  os.precision(12);
  os << construction << " requires " << quantity << " " << relation << " " << bound
     << " (" << bound_name << "); got " << quantity << " = " << actual;
  return os.str();
}

/// Closed-form per-period quantities for a ScenarioConfig, all as pure
/// functions of t so forward references (r at t+1, z at t+1) need no
/// pre-extended storage.
struct PathRows {
  explicit PathRows(const ScenarioConfig& cfg)
      : cfg_(cfg),
        log_G_(std::log(cfg.demo.G)),
        log_p_(std::log(cfg.price.p)),
        bubbly_(cfg.price.kind == PathKind::Bubbly),
        growth_root_(std::pow(cfg.demo.G, 1.0 / cfg.ces.sigma)) {}

  double log_price(long t) const {
    double tt = static_cast<double>(t);
    return bubbly_ ? log_p_ + tt * log_G_ : log_p_ + tt * log_G_ / cfg_.ces.sigma;
  }

  /// Detrended land value P_t/G^t; constant by construction on bubbly paths.
  double savings(long t) const {
    if (bubbly_) return cfg_.price.p;
    double tt = static_cast<double>(t);
    return std::exp(log_p_ + tt * (1.0 / cfg_.ces.sigma - 1.0) * log_G_);
  }

  LogFactorPrices factor_logs(long t) const {
    return log_factor_prices_at(static_cast<double>(t), cfg_.ces, cfg_.demo);
  }

  /// Rent per capita r_t/G^t.
  double rent_pc(long t) const {
    return std::exp(factor_logs(t).log_r - static_cast<double>(t) * log_G_);
  }

  /// Gross rate between t and t+1 implied by the price path and rents:
  ///   Fundamental: R_t = G^(1/sigma) * (1 + (r_{t+1}/p) * G^-((t+1)/sigma))
  ///   Bubbly:      R_t = G + (r_{t+1}/p) * G^-t
  double rate(long t) const {
    double log_r_next = factor_logs(t + 1).log_r;
    if (bubbly_) {
      return cfg_.demo.G +
             std::exp(log_r_next - log_p_ - static_cast<double>(t) * log_G_);
    }
    return growth_root_ *
           (1.0 + std::exp(log_r_next - log_p_ -
                           (static_cast<double>(t) + 1.0) * log_G_ / cfg_.ces.sigma));
  }

  /// Old consumption at period s: z_s = e_o + (P_s + r_s)/G^(s-1).
  double old_consumption(long s) const {
    return cfg_.e_o + cfg_.demo.G * (savings(s) + rent_pc(s));
  }

  /// Young consumption of generation t: y_t = z_{t+1} * (beta R_t)^(-1/gamma).
  double young_consumption(long t) const {
    return old_consumption(t + 1) *
           std::pow(cfg_.pref.beta * rate(t), -1.0 / cfg_.pref.gamma);
  }

  /// Land-economy young endowment e_t^y = y_t - w_t + P_t/G^t; the stored
  /// e_y adds the wage back.
  double land_endowment(long t) const {
    return young_consumption(t) - std::exp(factor_logs(t).log_w) + savings(t);
  }

 private:
  const ScenarioConfig& cfg_;
  double log_G_;
  double log_p_;
  bool bubbly_;
  double growth_root_;
};

}  // namespace detail

/// Least old endowment for which the fundamental construction yields
/// positive young endowments in the limit:
///   e_o > w * (beta * G^(1/sigma) * (1 + r/p))^(1/gamma)
/// with w, r the asymptotic factor prices.
inline double eo_lower_bound(const ScenarioConfig& cfg) {
  Asymptotics a = asymptotics(cfg.ces, cfg.demo);
  return a.w * std::pow(cfg.pref.beta * a.G_r * (1.0 + a.r / cfg.price.p),
                        1.0 / cfg.pref.gamma);
}

/// Least price coefficient for which the bubbly construction yields positive
/// young endowments in the limit:
///   p > (w - (beta G)^(-1/gamma) * e_o) / (1 + (beta G^(1-gamma))^(-1/gamma))
/// Often negative, in which case any p > 0 qualifies.
inline double p_lower_bound(const ScenarioConfig& cfg) {
  Asymptotics a = asymptotics(cfg.ces, cfg.demo);
  double G = cfg.demo.G;
  double inv_gamma = 1.0 / cfg.pref.gamma;
  double numer = a.w - std::pow(cfg.pref.beta * G, -inv_gamma) * cfg.e_o;
  double denom =
      1.0 + std::pow(cfg.pref.beta * std::pow(G, 1.0 - cfg.pref.gamma), -inv_gamma);
  return numer / denom;
}

/// Limiting land-economy young endowment of the scenario's construction.
inline double limiting_young_endowment(const ScenarioConfig& cfg) {
  Asymptotics a = asymptotics(cfg.ces, cfg.demo);
  double inv_gamma = 1.0 / cfg.pref.gamma;
  if (cfg.price.kind == PathKind::Bubbly) {
    double p = cfg.price.p;
    return (cfg.e_o + cfg.demo.G * p) * std::pow(cfg.pref.beta * cfg.demo.G, -inv_gamma) -
           a.w + p;
  }
  return cfg.e_o *
             std::pow(cfg.pref.beta * a.G_r * (1.0 + a.r / cfg.price.p), -inv_gamma) -
         a.w;
}

namespace detail {

inline void check_construction_bound(const ScenarioConfig& cfg) {
  if (cfg.price.kind == PathKind::Fundamental) {
    double bound = eo_lower_bound(cfg);
    if (!(cfg.e_o > bound)) {
      throw ConstructiveFailure(
          "old-endowment lower bound", bound, cfg.e_o,
          format_bound_message("fundamental construction", ">", "e_o", cfg.e_o,
                               "old-endowment lower bound", bound));
    }
  } else {
    double bound = p_lower_bound(cfg);
    if (!(cfg.price.p > bound)) {
      throw ConstructiveFailure(
          "price-level lower bound", bound, cfg.price.p,
          format_bound_message("bubbly construction", ">", "p", cfg.price.p,
                               "price-level lower bound", bound));
    }
  }
}

}  // namespace detail

/// First period from which the reverse-engineered young endowment is
/// strictly positive through the whole stored horizon.  The construction
/// bound guarantees a positive limit, so a finite scan is decisive.
/// Honors t0_override when it is at least the scanned start.
inline long find_t0(const ScenarioConfig& cfg) {
  cfg.validate();
  detail::check_construction_bound(cfg);
  detail::PathRows rows(cfg);
  long first_good = 0;
  for (long t = 0; t <= cfg.horizon; ++t) {
    if (!(rows.land_endowment(t) > 0.0)) first_good = t + 1;
  }
  if (first_good > cfg.horizon) {
    throw ConstructiveFailure(
        "positive-endowment start", static_cast<double>(cfg.horizon),
        static_cast<double>(first_good),
        "no period within the stored horizon has positive young endowment "
        "from there on; the limit is positive, so increase the horizon");
  }
  if (cfg.t0_override) {
    if (*cfg.t0_override < first_good) {
      throw ConstructiveFailure(
          "t0 override below first valid period", static_cast<double>(first_good),
          static_cast<double>(*cfg.t0_override),
          detail::format_bound_message("construction", ">=", "t0",
                                       static_cast<double>(*cfg.t0_override),
                                       "first period with positive endowments",
                                       static_cast<double>(first_good)));
    }
    return *cfg.t0_override;
  }
  return first_good;
}

/// Date-0 (present-value) prices from a run of gross rates: given R_t for
/// t0 <= t < t0 + n, returns n + 1 log prices with log_q[0] = 0 and
/// log_q[i+1] = log_q[i] - log R_i.
inline std::vector<double> date0_prices(std::span<const double> R) {
  std::vector<double> log_q(R.size() + 1);
  log_q[0] = 0.0;
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (!(R[i] > 0.0) || !std::isfinite(R[i])) {
      throw std::domain_error("gross rates must be positive and finite");
    }
    log_q[i + 1] = log_q[i] - std::log(R[i]);
  }
  return log_q;
}

namespace detail {

inline EquilibriumPath build_path(const ScenarioConfig& cfg) {
  long t0 = find_t0(cfg);
  PathRows rows(cfg);
  double log_G = std::log(cfg.demo.G);

  EquilibriumPath path;
  path.cfg = cfg;
  path.t0 = t0;
  std::size_t n = static_cast<std::size_t>(cfg.horizon - t0) + 1;
  for (auto* v : {&path.w, &path.r, &path.P, &path.e_y, &path.y, &path.z, &path.R,
                  &path.x, &path.log_P, &path.log_r, &path.savings}) {
    v->resize(n);
  }

  for (std::size_t i = 0; i < n; ++i) {
    long t = t0 + static_cast<long>(i);
    LogFactorPrices lp = rows.factor_logs(t);
    path.w[i] = std::exp(lp.log_w);
    path.log_r[i] = lp.log_r;
    path.r[i] = std::exp(lp.log_r);
    path.log_P[i] = rows.log_price(t);
    path.P[i] = std::exp(path.log_P[i]);
    path.savings[i] = rows.savings(t);
    path.x[i] = std::exp(-static_cast<double>(t) * log_G);
    path.R[i] = rows.rate(t);
    path.z[i] = rows.old_consumption(t);
    path.y[i] = rows.young_consumption(t);
    path.e_y[i] = path.y[i] + path.savings[i];
    if (!(path.y[i] > 0.0) || !(path.z[i] > 0.0) || !(path.e_y[i] > 0.0)) {
      throw std::logic_error("constructed allocation not interior at period " +
                             std::to_string(t));
    }
  }

  std::vector<double> log_q =
      date0_prices(std::span<const double>(path.R.data(), n - 1));
  path.log_q = std::move(log_q);
  return path;
}

}  // namespace detail

/// Equilibrium with P_t = p * G^(t/sigma): the price tracks the rent, the
/// rate settles above G^(1/sigma), and the detrended price decays to zero.
inline EquilibriumPath build_fundamental(const ScenarioConfig& cfg) {
  if (cfg.price.kind != PathKind::Fundamental) {
    throw std::invalid_argument("build_fundamental needs a Fundamental price spec");
  }
  return detail::build_path(cfg);
}

/// Equilibrium with P_t = p * G^t: per-capita savings stay at p forever and
/// the rate converges to G from above.
inline EquilibriumPath build_bubbly(const ScenarioConfig& cfg) {
  if (cfg.price.kind != PathKind::Bubbly) {
    throw std::invalid_argument("build_bubbly needs a Bubbly price spec");
  }
  return detail::build_path(cfg);
}

/// Builds whichever construction the config's price spec selects.
inline EquilibriumPath build_equilibrium(const ScenarioConfig& cfg) {
  return detail::build_path(cfg);
}

/// Worst-case relative residuals of the conditions that define an
/// equilibrium.  foc is the Euler/no-arbitrage error
///   |U_2 * (P_{t+1} + r_{t+1}) / (U_1 * P_t) - 1|
/// over t in [t0, horizon).  clearing is the goods-market error per capita,
///   |y_t + z_t/G - (e_y_t + e_o/G + r_t/G^t)| / (y_t + z_t/G),
/// over the full horizon.  Reads the level arrays, so tampering with any
/// single stored value shows up.
struct Residuals {
  double foc = 0.0;
  double clearing = 0.0;
};

inline Residuals verify_residuals(const EquilibriumPath& path,
                                  const ScenarioConfig& cfg) {
  Residuals res;
  std::size_t n = path.size();
  double G = cfg.demo.G;
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n) {
      double rate_foc = mrs(path.y[i], path.z[i + 1], cfg.pref);
      double foc =
          std::abs((path.P[i + 1] + path.r[i + 1]) / (path.P[i] * rate_foc) - 1.0);
      res.foc = std::max(res.foc, foc);
    }
    double demand = path.y[i] + path.z[i] / G;
    double supply = path.e_y[i] + cfg.e_o / G + path.r[i] * path.x[i];
    res.clearing = std::max(res.clearing, std::abs(demand - supply) / demand);
  }
  return res;
}

/// Truncated present value of dividends and the tail term that separates a
/// fundamental price from a bubbly one:
///   value = (1/q_t) * sum_{s=t+1}^{T} q_s r_s,   tail = q_T P_T / q_t.
/// No-arbitrage makes P_t = value + tail an identity; the price is
/// fundamental exactly when tail -> 0 as T grows.
struct PresentValue {
  double value = 0.0;
  double tail = 0.0;
};

inline PresentValue fundamental_value(const EquilibriumPath& path, long t, long T) {
  if (!(path.t0 <= t && t < T && T <= path.cfg.horizon)) {
    throw std::invalid_argument("fundamental_value needs t0 <= t < T <= horizon");
  }
  std::size_t it = path.idx(t);
  double log_qt = path.log_q[it];
  double sum = 0.0;
  double comp = 0.0;  // Kahan correction
  for (long s = t + 1; s <= T; ++s) {
    std::size_t is = path.idx(s);
    double term = std::exp(path.log_q[is] + path.log_r[is] - log_qt);
    double yk = term - comp;
    double tk = sum + yk;
    comp = (tk - sum) - yk;
    sum = tk;
  }
  std::size_t iT = path.idx(T);
  double tail = std::exp(path.log_q[iT] + path.log_P[iT] - log_qt);
  return {sum, tail};
}

/// The path's growing series divided by the aggregate scale a_t = G^t:
/// the land value per capita, the aggregate endowment per capita
/// (young plus discounted old cohort), and the rent per capita.  All three
/// stay bounded, which is what makes the detrended economy well posed.
struct DetrendedSeries {
  std::vector<double> price;
  std::vector<double> endowment;
  std::vector<double> dividend;
};

inline DetrendedSeries detrend(const EquilibriumPath& path, const Demography& demo) {
  DetrendedSeries out;
  std::size_t n = path.size();
  out.price.resize(n);
  out.endowment.resize(n);
  out.dividend.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.price[i] = path.savings[i];
    out.endowment[i] = path.e_y[i] + path.cfg.e_o / demo.G;
    out.dividend[i] = path.r[i] * path.x[i];
  }
  return out;
}

}  // namespace olg

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "olg/errors.hpp"

namespace olg {

/// Width of the guard band around parameter values that select an exact
/// special-case branch (Cobb-Douglas production, log utility).
inline constexpr double kUnitBand = 1e-9;

namespace detail {

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(name) + " must be positive and finite, got " +
                            std::to_string(v));
  }
}

inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::domain_error(std::string(name) + " must be finite");
  }
}

/// log(exp(a) + exp(b)) without overflow; tolerates -inf inputs.
inline double log_sum_exp(double a, double b) {
  double m = std::max(a, b);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace detail

/// CES technology F(H, X) = A * (alpha*H^(1-1/sigma) + (1-alpha)*X^(1-1/sigma))^(sigma/(sigma-1)).
/// sigma is the elasticity of substitution between the reproducible factor H
/// and the fixed factor X; sigma == 1 selects the Cobb-Douglas branch exactly.
struct CESParams {
  double A = 1.0;       ///< total factor productivity, > 0
  double alpha = 0.5;   ///< distribution weight on H, in (0, 1)
  double sigma = 1.5;   ///< elasticity of substitution, > 0

  void validate() const {
    detail::require_positive(A, "A");
    detail::require_positive(sigma, "sigma");
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw std::domain_error("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
  }

  bool cobb_douglas() const { return std::abs(sigma - 1.0) < kUnitBand; }

  friend bool operator==(const CESParams&, const CESParams&) = default;
};

/// CRRA felicity u(c) = c^(1-gamma) / (1-gamma); gamma == 1 selects log(c) exactly.
/// Lifetime utility of a generation is u(young) + beta * u(old).
struct CRRAParams {
  double beta = 1.0;    ///< discount factor on old-age felicity, > 0
  double gamma = 1.0;   ///< relative risk aversion / inverse EIS, > 0

  void validate() const {
    detail::require_positive(beta, "beta");
    detail::require_positive(gamma, "gamma");
  }

  bool log_utility() const { return std::abs(gamma - 1.0) < kUnitBand; }

  friend bool operator==(const CRRAParams&, const CRRAParams&) = default;
};

/// Population of the young cohort grows by the gross factor G each period:
/// N_t = G^t (normalising N_0 = 1).
struct Demography {
  double G = 1.2;       ///< gross population growth factor, > 0

  void validate() const { detail::require_positive(G, "G"); }

  friend bool operator==(const Demography&, const Demography&) = default;
};

/// Competitive factor prices at one date: w is the wage per unit of H,
/// r the rental per unit of X.
struct FactorPrices {
  double w = 0.0;
  double r = 0.0;
};

/// Same pair in logs, for dates far enough out that the levels under- or overflow.
struct LogFactorPrices {
  double log_w = 0.0;
  double log_r = 0.0;
};

namespace detail {

/// log of the CES inner sum  S(h) = alpha*e^((1-1/sigma)h) + (1-alpha)
/// evaluated at log-input h = log H (X fixed at 1).
inline double log_ces_inner(double h, const CESParams& ces) {
  double e = 1.0 - 1.0 / ces.sigma;
  return log_sum_exp(std::log(ces.alpha) + e * h, std::log1p(-ces.alpha));
}

}  // namespace detail

/// Output F(H, X). Branches to A * H^alpha * X^(1-alpha) inside the
/// sigma == 1 guard band; otherwise evaluates the CES form in log space.
inline double ces_output(double H, double X, const CESParams& ces) {
  ces.validate();
  detail::require_positive(H, "H");
  detail::require_positive(X, "X");
  if (ces.cobb_douglas()) {
    return ces.A * std::exp(ces.alpha * std::log(H) + (1.0 - ces.alpha) * std::log(X));
  }
  double e = 1.0 - 1.0 / ces.sigma;
  double log_s = detail::log_sum_exp(std::log(ces.alpha) + e * std::log(H),
                                     std::log1p(-ces.alpha) + e * std::log(X));
  return ces.A * std::exp(log_s * ces.sigma / (ces.sigma - 1.0));
}

/// Factor prices in logs when H = G^t and X = 1:
///   log w_t = log(A * alpha) + log S / (sigma - 1) - (t / sigma) log G
///   log r_t = log(A * (1 - alpha)) + log S / (sigma - 1)
/// with S = alpha * G^((1-1/sigma) t) + 1 - alpha.  Stays finite for any t
/// at which the level form would overflow.
inline LogFactorPrices log_factor_prices_at(double t, const CESParams& ces,
                                            const Demography& demo) {
  ces.validate();
  demo.validate();
  double h = t * std::log(demo.G);
  if (ces.cobb_douglas()) {
    return {std::log(ces.A * ces.alpha) + (ces.alpha - 1.0) * h,
            std::log(ces.A * (1.0 - ces.alpha)) + ces.alpha * h};
  }
  double log_s = detail::log_ces_inner(h, ces);
  double common = std::log(ces.A) + log_s / (ces.sigma - 1.0);
  return {common + std::log(ces.alpha) - h / ces.sigma,
          common + std::log1p(-ces.alpha)};
}

/// Level factor prices at date t (marginal products of F at (G^t, 1)).
inline FactorPrices factor_prices_at(double t, const CESParams& ces,
                                     const Demography& demo) {
  LogFactorPrices lp = log_factor_prices_at(t, ces, demo);
  return {std::exp(lp.log_w), std::exp(lp.log_r)};
}

/// Long-run behaviour along H = G^t.  The wage converges; the rent grows
/// without bound at gross factor G^(1/sigma), so its limit is reported
/// detrended:
///   w_t            ->  A * alpha^(sigma/(sigma-1))
///   r_t * G^(-t/sigma) ->  A * alpha^(1/(sigma-1)) * (1 - alpha)
///   r_{t+1} / r_t  ->  G_r = G^(1/sigma)
/// Requires sigma > 1 and G > 1; anything else has no finite positive
/// limit of this form and is rejected.
struct Asymptotics {
  double w = 0.0;    ///< limiting wage
  double r = 0.0;    ///< limiting detrended rent r_t / G^(t/sigma)
  double G_r = 0.0;  ///< limiting gross rent growth factor
};

inline Asymptotics asymptotics(const CESParams& ces, const Demography& demo) {
  ces.validate();
  demo.validate();
  if (!(ces.sigma > 1.0 + kUnitBand)) {
    throw UnsupportedRegime("asymptotics requires sigma > 1, got sigma = " +
                            std::to_string(ces.sigma));
  }
  if (!(demo.G > 1.0)) {
    throw UnsupportedRegime("asymptotics requires G > 1, got G = " +
                            std::to_string(demo.G));
  }
  double sig = ces.sigma;
  return {ces.A * std::pow(ces.alpha, sig / (sig - 1.0)),
          ces.A * std::pow(ces.alpha, 1.0 / (sig - 1.0)) * (1.0 - ces.alpha),
          std::pow(demo.G, 1.0 / sig)};
}

/// Labor share of output at input ratio H/X = H (X = 1):
///   s(H) = 1 / (1 + ((1-alpha)/alpha) * H^-(1-1/sigma))
/// Increasing in H for sigma > 1, constant (= alpha) at sigma == 1,
/// decreasing for sigma < 1.
inline double labor_share(double H, const CESParams& ces) {
  ces.validate();
  detail::require_positive(H, "H");
  if (ces.cobb_douglas()) return ces.alpha;
  double u = (1.0 - 1.0 / ces.sigma) * std::log(H);
  return 1.0 / (1.0 + ((1.0 - ces.alpha) / ces.alpha) * std::exp(-u));
}

/// Recovers the substitution elasticity from factor-price behaviour:
/// sigma = -1 / d log(F_H/F_X) / d log(H/X), estimated by a central
/// difference at h = log(H/X) with relative step rel_step.
/// Throws DiagnosticError when the difference quotient is rounding-dominated.
inline double sigma_numeric(double h, const CESParams& ces, double rel_step = 1e-5) {
  ces.validate();
  detail::require_finite(h, "h");
  detail::require_positive(rel_step, "rel_step");
  auto log_price_ratio = [&](double hh) {
    if (ces.cobb_douglas()) {
      return std::log(ces.alpha) - std::log1p(-ces.alpha) - hh;
    }
    double log_s = detail::log_ces_inner(hh, ces);
    double log_fh = std::log(ces.A) + log_s / (ces.sigma - 1.0) + std::log(ces.alpha) -
                    hh / ces.sigma;
    double log_fx = std::log(ces.A) + log_s / (ces.sigma - 1.0) + std::log1p(-ces.alpha);
    return log_fh - log_fx;
  };
  double step = rel_step * std::max(1.0, std::abs(h));
  double hi = log_price_ratio(h + step);
  double lo = log_price_ratio(h - step);
  double diff = hi - lo;
  double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                 (std::abs(hi) + std::abs(lo) + 1.0);
  if (std::abs(diff) <= noise) {
    throw DiagnosticError("sigma_numeric: difference quotient at h = " + std::to_string(h) +
                          " is dominated by rounding; increase the step");
  }
  return -2.0 * step / diff;
}

/// CRRA felicity; the gamma == 1 band evaluates log(c) exactly.
inline double crra_utility(double c, const CRRAParams& pref) {
  pref.validate();
  detail::require_positive(c, "consumption");
  if (pref.log_utility()) return std::log(c);
  return std::pow(c, 1.0 - pref.gamma) / (1.0 - pref.gamma);
}

/// Marginal felicity u'(c) = c^-gamma.
inline double crra_marginal(double c, const CRRAParams& pref) {
  pref.validate();
  detail::require_positive(c, "consumption");
  return std::pow(c, -pref.gamma);
}

/// Marginal rate of substitution of young for old consumption at (y, z):
///   mrs = (1/beta) * (y/z)^-gamma
/// i.e. the gross interest rate that would make (y, z) an interior optimum.
inline double mrs(double y, double z, const CRRAParams& pref) {
  pref.validate();
  detail::require_positive(y, "y");
  detail::require_positive(z, "z");
  return std::pow(y / z, -pref.gamma) / pref.beta;
}

/// Elasticity of the slope of the indifference curve through (y, z) with
/// respect to y, holding utility fixed.  Writing the curve as z = phi(y) and
/// m = mrs(y, z), the closed form is
///   -y * phi''(y) / phi'(y) = gamma * (1 + y * m / z).
/// Bounded away from 0 uniformly on any region with y*m/z bounded, which is
/// what curvature-based welfare bounds consume.
inline double indifference_elasticity(double y, double z, const CRRAParams& pref) {
  double m = mrs(y, z, pref);
  return pref.gamma * (1.0 + y * m / z);
}

}  // namespace olg

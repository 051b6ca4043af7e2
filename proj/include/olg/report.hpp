#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "olg/diagnostics.hpp"
#include "olg/equilibrium.hpp"
#include "olg/format.hpp"
#include "olg/version.hpp"
#include "olg/welfare.hpp"

namespace olg {

inline const char* render_verdict(Verdict v) {
  switch (v) {
    case Verdict::Convergent:
      return "convergent";
    case Verdict::Divergent:
      return "divergent";
    default:
      return "inconclusive";
  }
}

inline const char* render_flag(Flag f) {
  switch (f) {
    case Flag::Yes:
      return "yes";
    case Flag::No:
      return "no";
    default:
      return "unknown";
  }
}

inline const char* render_bool(bool b) { return b ? "true" : "false"; }

inline const char* render_kind(PathKind k) {
  return k == PathKind::Bubbly ? "bubbly" : "fundamental";
}

/// One CSV row per stored period.  Identical paths produce byte-identical
/// text: fixed column order, 12-significant-digit numbers, '\n' endings.
inline std::string to_csv(const EquilibriumPath& path) {
  std::string out = "t,w,r,P,e_y,c_y,c_o,R,log_q,savings_per_capita\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    out += format_number(path.t0 + static_cast<long>(i));
    out += ',';
    out += format_number(path.w[i]);
    out += ',';
    out += format_number(path.r[i]);
    out += ',';
    out += format_number(path.P[i]);
    out += ',';
    out += format_number(path.e_y[i]);
    out += ',';
    out += format_number(path.y[i]);
    out += ',';
    out += format_number(path.z[i]);
    out += ',';
    out += format_number(path.R[i]);
    out += ',';
    out += format_number(path.log_q[i]);
    out += ',';
    out += format_number(path.savings[i]);
    out += '\n';
  }
  return out;
}

/// Flat "key = value" text with stable snake_case keys.  The improvement
/// block is appended when a search result is supplied.  Inconclusive
/// verdicts surface as "unknown" flags rather than being coerced.
inline std::string render_report(const std::string& scenario_id,
                                 const EquilibriumPath& path,
                                 const DiagnosticsReport& diag,
                                 const ImprovementReport* improvement = nullptr) {
  std::string out;
  auto kv = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  kv("scenario_id", scenario_id);
  kv("kind", render_kind(path.cfg.price.kind));
  kv("t0", format_number(path.t0));
  kv("horizon", format_number(path.cfg.horizon));

  kv("bubble_verdict", render_verdict(diag.bubble.verdict));
  kv("bubble_flag", render_flag(bubble_flag(diag.bubble)));
  kv("bubble_partial_sum", format_number(diag.bubble.partial_sum));
  kv("bubble_tail_ratio", format_number(diag.bubble.tail_ratio));

  kv("cass_verdict", render_verdict(diag.cass.verdict));
  kv("cass_criterion_holds", render_flag(cass_flag(diag.cass)));
  kv("cass_partial_sum", format_number(diag.cass.partial_sum));
  kv("cass_tail_ratio", format_number(diag.cass.tail_ratio));

  kv("pv_endowment_verdict", render_verdict(diag.pv.verdict));
  kv("pv_endowment_partial_sum", format_number(diag.pv.partial_sum));
  kv("pv_endowment_tail_ratio", format_number(diag.pv.tail_ratio));

  kv("asymptotically_bubbly", render_bool(diag.asymptotically_bubbly.value));
  kv("detrended_price_tail_infimum",
     format_number(diag.asymptotically_bubbly.tail_infimum));

  kv("natural_rate", format_number(diag.necessity.natural_rate));
  kv("rent_growth", format_number(diag.necessity.rent_growth));
  kv("rent_growth_estimate", format_number(diag.rent_growth_estimate));
  kv("growth", format_number(diag.necessity.growth));
  kv("necessity_holds", render_bool(diag.necessity.holds));

  kv("eo_bound", format_number(diag.bounds.eo_bound));
  kv("eo_satisfied", render_bool(diag.bounds.eo_satisfied));
  kv("p_bound", format_number(diag.bounds.p_bound));
  kv("p_satisfied", render_bool(diag.bounds.p_satisfied));
  kv("necessity2_bound", format_number(diag.bounds.necessity2_bound));
  kv("necessity2_satisfied", render_bool(diag.bounds.necessity2_satisfied));
  kv("p_star", format_number(diag.bounds.p_star));
  kv("rate_meets_growth", render_bool(diag.bounds.rate_meets_growth));

  kv("mu", format_number(diag.mu.mu));
  kv("mu_degenerate", render_bool(diag.mu.degenerate));

  if (improvement != nullptr) {
    bool found = improvement->verdict == WelfareVerdict::Improvement;
    kv("improvement_verdict", found ? "improvement" : "no_improvement_found");
    kv("improvement_epsilon", format_number(improvement->scheme.epsilon));
    kv("improvement_t_start", format_number(improvement->scheme.t_start));
    kv("improvement_min_delta", format_number(improvement->min_delta));
    kv("improvement_initial_old_delta", format_number(improvement->initial_old_delta));
    kv("improvement_old_at_start_delta",
       format_number(improvement->old_at_start_delta));
    kv("improvement_max_clearing_residual",
       format_number(improvement->max_clearing_residual));
  }
  kv("note",
     "efficiency evidence is cass_criterion_holds together with mu; "
     "a failed improvement search never certifies efficiency");
  return out;
}

/// Provenance record written next to every command's outputs.
struct RunManifest {
  std::string scenario_id;
  std::string command;
  std::string config_echo;   ///< canonical config text; re-parses to the run's config
  std::string artifact_version = kVersionString;
  std::vector<std::string> outputs;
  double wall_ms = 0.0;
};

inline std::string to_json(const RunManifest& m) {
  nlohmann::json j;
  j["scenario_id"] = m.scenario_id;
  j["command"] = m.command;
  j["config"] = m.config_echo;
  j["artifact_version"] = m.artifact_version;
  j["outputs"] = m.outputs;
  j["wall_ms"] = m.wall_ms;
  return j.dump(2) + "\n";
}

inline RunManifest manifest_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RunManifest m;
  m.scenario_id = j.at("scenario_id").get<std::string>();
  m.command = j.at("command").get<std::string>();
  m.config_echo = j.at("config").get<std::string>();
  m.artifact_version = j.at("artifact_version").get<std::string>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.wall_ms = j.at("wall_ms").get<double>();
  return m;
}

}  // namespace olg

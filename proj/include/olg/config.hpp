#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "olg/equilibrium.hpp"
#include "olg/errors.hpp"
#include "olg/format.hpp"

namespace olg {

/// One-parameter grid attached to a scenario: rebuild the scenario once per
/// value of the named parameter.
struct SweepSpec {
  std::string param;
  std::vector<double> values;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct ParsedConfig {
  ScenarioConfig scenario;
  std::optional<SweepSpec> sweep;
};

/// Parameters sweepable by name.  kind is deliberately not sweepable; a
/// sweep varies one real-valued dial on a fixed construction.
inline const std::vector<std::string>& sweepable_params() {
  static const std::vector<std::string> names = {"A", "alpha", "sigma", "beta", "gamma",
                                                 "G", "p",     "e_o",   "horizon"};
  return names;
}

/// Returns a copy of base with one named parameter replaced.
inline ScenarioConfig with_param(const ScenarioConfig& base, const std::string& param,
                                 double value) {
  ScenarioConfig cfg = base;
  if (param == "A") {
    cfg.ces.A = value;
  } else if (param == "alpha") {
    cfg.ces.alpha = value;
  } else if (param == "sigma") {
    cfg.ces.sigma = value;
  } else if (param == "beta") {
    cfg.pref.beta = value;
  } else if (param == "gamma") {
    cfg.pref.gamma = value;
  } else if (param == "G") {
    cfg.demo.G = value;
  } else if (param == "p") {
    cfg.price.p = value;
  } else if (param == "e_o") {
    cfg.e_o = value;
  } else if (param == "horizon") {
    double rounded = std::nearbyint(value);
    if (rounded != value || !(value >= 1.0)) {
      throw std::invalid_argument("horizon sweep values must be positive integers");
    }
    cfg.horizon = static_cast<long>(rounded);
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + param);
  }
  return cfg;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline double parse_number(std::string_view text, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError(line, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

inline long parse_integer(std::string_view text, std::size_t line) {
  long v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError(line, "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace detail

/// Parses the flat sectioned key = value format:
///
///   [production]   A, alpha, sigma
///   [preferences]  beta, gamma
///   [demography]   G
///   [scenario]     kind (fundamental|bubbly), p, e_o, horizon, t0
///   [sweep]        param, values (comma separated)   -- optional section
///
/// '#' starts a comment.  Every key except horizon and t0 is required;
/// unknown sections or keys are errors, duplicate keys keep the last value.
/// The parsed scenario is validated before being returned.
inline ParsedConfig parse_config(std::string_view text) {
  ParsedConfig out;
  ScenarioConfig& sc = out.scenario;
  SweepSpec sweep;
  bool have_sweep_section = false;

  enum class Section { None, Production, Preferences, Demography, Scenario, Sweep };
  Section section = Section::None;
  std::vector<std::string> seen;
  auto mark = [&seen](const char* key) { seen.emplace_back(key); };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      std::string_view name = line.substr(1, line.size() - 2);
      if (name == "production") {
        section = Section::Production;
      } else if (name == "preferences") {
        section = Section::Preferences;
      } else if (name == "demography") {
        section = Section::Demography;
      } else if (name == "scenario") {
        section = Section::Scenario;
      } else if (name == "sweep") {
        section = Section::Sweep;
        have_sweep_section = true;
      } else {
        throw ConfigError(line_no, "unknown section [" + std::string(name) + "]");
      }
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    }
    std::string key(detail::trim(line.substr(0, eq)));
    std::string_view value = detail::trim(line.substr(eq + 1));
    // A sweep may legitimately have zero grid points, so "values =" with
    // nothing after it is the one place an empty value is allowed.
    bool empty_grid = section == Section::Sweep && key == "values";
    if (key.empty() || (value.empty() && !empty_grid)) {
      throw ConfigError(line_no, "empty key or value");
    }

    switch (section) {
      case Section::None:
        throw ConfigError(line_no, "key '" + key + "' appears before any section");
      case Section::Production:
        if (key == "A") {
          sc.ces.A = detail::parse_number(value, line_no);
        } else if (key == "alpha") {
          sc.ces.alpha = detail::parse_number(value, line_no);
        } else if (key == "sigma") {
          sc.ces.sigma = detail::parse_number(value, line_no);
        } else {
          throw ConfigError(line_no, "unknown key '" + key + "' in [production]");
        }
        mark(key.c_str());
        break;
      case Section::Preferences:
        if (key == "beta") {
          sc.pref.beta = detail::parse_number(value, line_no);
        } else if (key == "gamma") {
          sc.pref.gamma = detail::parse_number(value, line_no);
        } else {
          throw ConfigError(line_no, "unknown key '" + key + "' in [preferences]");
        }
        mark(key.c_str());
        break;
      case Section::Demography:
        if (key == "G") {
          sc.demo.G = detail::parse_number(value, line_no);
        } else {
          throw ConfigError(line_no, "unknown key '" + key + "' in [demography]");
        }
        mark(key.c_str());
        break;
      case Section::Scenario:
        if (key == "kind") {
          if (value == "fundamental") {
            sc.price.kind = PathKind::Fundamental;
          } else if (value == "bubbly") {
            sc.price.kind = PathKind::Bubbly;
          } else {
            throw ConfigError(line_no, "kind must be 'fundamental' or 'bubbly', got '" +
                                           std::string(value) + "'");
          }
        } else if (key == "p") {
          sc.price.p = detail::parse_number(value, line_no);
        } else if (key == "e_o") {
          sc.e_o = detail::parse_number(value, line_no);
        } else if (key == "horizon") {
          sc.horizon = detail::parse_integer(value, line_no);
        } else if (key == "t0") {
          sc.t0_override = detail::parse_integer(value, line_no);
        } else {
          throw ConfigError(line_no, "unknown key '" + key + "' in [scenario]");
        }
        mark(key.c_str());
        break;
      case Section::Sweep:
        if (key == "param") {
          sweep.param = std::string(value);
        } else if (key == "values") {
          sweep.values.clear();
          std::size_t start = 0;
          std::string vstr(value);
          while (start <= vstr.size()) {
            std::size_t comma = vstr.find(',', start);
            if (comma == std::string::npos) comma = vstr.size();
            std::string_view item =
                detail::trim(std::string_view(vstr).substr(start, comma - start));
            if (!item.empty()) sweep.values.push_back(detail::parse_number(item, line_no));
            start = comma + 1;
          }
        } else {
          throw ConfigError(line_no, "unknown key '" + key + "' in [sweep]");
        }
        break;
    }
    if (pos > text.size()) break;
  }

  for (const char* required :
       {"A", "alpha", "sigma", "beta", "gamma", "G", "kind", "p", "e_o"}) {
    bool found = false;
    for (const auto& s : seen) {
      if (s == required) found = true;
    }
    if (!found) {
      throw ConfigError(0, std::string("missing required key '") + required + "'");
    }
  }

  if (have_sweep_section) {
    if (sweep.param.empty()) throw ConfigError(0, "[sweep] needs a 'param' key");
    bool known = false;
    for (const auto& name : sweepable_params()) {
      if (name == sweep.param) known = true;
    }
    if (!known) throw ConfigError(0, "unknown sweep parameter '" + sweep.param + "'");
    out.sweep = std::move(sweep);
  }

  sc.validate();
  return out;
}

/// Canonical text for a scenario (and optional sweep); parse_config of the
/// result reproduces the inputs exactly.
inline std::string serialize_config(const ScenarioConfig& sc,
                                    const SweepSpec* sweep = nullptr) {
  std::string out;
  out += "[production]\n";
  out += "A = " + format_number(sc.ces.A) + "\n";
  out += "alpha = " + format_number(sc.ces.alpha) + "\n";
  out += "sigma = " + format_number(sc.ces.sigma) + "\n";
  out += "\n[preferences]\n";
  out += "beta = " + format_number(sc.pref.beta) + "\n";
  out += "gamma = " + format_number(sc.pref.gamma) + "\n";
  out += "\n[demography]\n";
  out += "G = " + format_number(sc.demo.G) + "\n";
  out += "\n[scenario]\n";
  out += std::string("kind = ") +
         (sc.price.kind == PathKind::Bubbly ? "bubbly" : "fundamental") + "\n";
  out += "p = " + format_number(sc.price.p) + "\n";
  out += "e_o = " + format_number(sc.e_o) + "\n";
  out += "horizon = " + format_number(sc.horizon) + "\n";
  if (sc.t0_override) out += "t0 = " + format_number(*sc.t0_override) + "\n";
  if (sweep != nullptr) {
    out += "\n[sweep]\n";
    out += "param = " + sweep->param + "\n";
    out += "values = ";
    for (std::size_t i = 0; i < sweep->values.size(); ++i) {
      if (i > 0) out += ", ";
      out += format_number(sweep->values[i]);
    }
    out += "\n";
  }
  return out;
}

/// Benchmark scenario behind figure id "fig1": fundamental price path in a
/// log-utility economy; the rate settles near 1.1763 and savings fade.
inline ScenarioConfig preset_fig1() {
  ScenarioConfig sc;
  sc.ces = {1.0, 0.5, 1.5};
  sc.pref = {1.0, 1.0};
  sc.demo = {1.2};
  sc.e_o = 1.0;
  sc.price = {PathKind::Fundamental, 3.0};
  sc.horizon = 400;
  return sc;
}

/// Benchmark scenario behind figure id "fig2": bubbly price path on the same
/// economy; per-capita savings hold at 0.5 and the rate settles at G.
inline ScenarioConfig preset_fig2() {
  ScenarioConfig sc = preset_fig1();
  sc.price = {PathKind::Bubbly, 0.5};
  return sc;
}

/// Scenario for a figure id, or nothing if the id is unknown.
inline std::optional<ScenarioConfig> preset_for(std::string_view figure) {
  if (figure == "fig1") return preset_fig1();
  if (figure == "fig2") return preset_fig2();
  return std::nullopt;
}

}  // namespace olg

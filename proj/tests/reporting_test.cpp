#include "olg/config.hpp"
#include "olg/diagnostics.hpp"
#include "olg/format.hpp"
#include "olg/report.hpp"
#include "olg/welfare.hpp"

#include <algorithm>
#include <string>

#include <gtest/gtest.h>

namespace {

using namespace olg;

TEST(FormatNumber, TwelveSignificantDigitsTrimmed) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(1.3065165835331698), "1.30651658353");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-42L), "-42");
  EXPECT_EQ(format_number(400L), "400");
}

TEST(ConfigRoundTrip, ScenarioSurvivesSerializeParse) {
  ScenarioConfig sc = preset_fig1();
  ParsedConfig parsed = parse_config(serialize_config(sc));
  EXPECT_TRUE(parsed.scenario == sc);
  EXPECT_FALSE(parsed.sweep.has_value());

  ScenarioConfig with_start = preset_fig2();
  with_start.t0_override = 7;
  with_start.horizon = 120;
  ParsedConfig parsed2 = parse_config(serialize_config(with_start));
  EXPECT_TRUE(parsed2.scenario == with_start);
}

TEST(ConfigRoundTrip, SweepSurvivesSerializeParse) {
  ScenarioConfig sc = preset_fig1();
  SweepSpec sweep{"p", {1.5, 1.99, 2.5, 3.0}};
  ParsedConfig parsed = parse_config(serialize_config(sc, &sweep));
  ASSERT_TRUE(parsed.sweep.has_value());
  EXPECT_TRUE(*parsed.sweep == sweep);
}

TEST(ParseConfig, AcceptsCommentsAndDuplicates) {
  // [scenario] is the last serialized section, so the appended duplicate
  // lands there and overrides the earlier value.
  std::string text = serialize_config(preset_fig1());
  text += "\n# trailing comment\np = 2.5  # inline comment\n";
  ParsedConfig parsed = parse_config(text);
  EXPECT_DOUBLE_EQ(parsed.scenario.price.p, 2.5);
}

TEST(ParseConfig, ReportsMissingKeysWithoutALine) {
  std::string text = serialize_config(preset_fig1());
  std::string::size_type pos = text.find("beta = 1\n");
  ASSERT_NE(pos, std::string::npos);
  text.erase(pos, 9);
  try {
    parse_config(text);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 0u);
    EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
  }
}

TEST(ParseConfig, ReportsOffendingLines) {
  std::string text = serialize_config(preset_fig1()) + "zeta = 1\n";
  try {
    parse_config(text);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_GT(e.line(), 0u);
    EXPECT_NE(std::string(e.what()).find("config line"), std::string::npos);
  }
  EXPECT_THROW(parse_config("[conspiracy]\n"), ConfigError);
  std::string bad_num = serialize_config(preset_fig1()) + "p = abc\n";
  EXPECT_THROW(parse_config(bad_num), ConfigError);
  std::string bad_kind = serialize_config(preset_fig1()) + "kind = mystery\n";
  EXPECT_THROW(parse_config(bad_kind), ConfigError);
}

TEST(ParseConfig, ValidatesTheScenario) {
  std::string text = serialize_config(preset_fig1()) + "\n";
  std::string::size_type pos = text.find("sigma = 1.5");
  text.replace(pos, 11, "sigma = 0.9");
  EXPECT_THROW(parse_config(text), UnsupportedRegime);
}

TEST(ParseConfig, SweepSection) {
  std::string text = serialize_config(preset_fig1());
  text += "\n[sweep]\nparam = sigma\nvalues = 1.2, 1.5, 2\n";
  ParsedConfig parsed = parse_config(text);
  ASSERT_TRUE(parsed.sweep.has_value());
  EXPECT_EQ(parsed.sweep->param, "sigma");
  ASSERT_EQ(parsed.sweep->values.size(), 3u);
  EXPECT_DOUBLE_EQ(parsed.sweep->values[1], 1.5);

  std::string empty_vals = serialize_config(preset_fig1());
  empty_vals += "\n[sweep]\nparam = p\nvalues =\n";
  ParsedConfig parsed2 = parse_config(empty_vals);
  ASSERT_TRUE(parsed2.sweep.has_value());
  EXPECT_TRUE(parsed2.sweep->values.empty());

  std::string bad_param = serialize_config(preset_fig1());
  bad_param += "\n[sweep]\nparam = kind\nvalues = 1\n";
  EXPECT_THROW(parse_config(bad_param), ConfigError);
}

TEST(WithParam, ReplacesOneDial) {
  ScenarioConfig base = preset_fig1();
  EXPECT_DOUBLE_EQ(with_param(base, "sigma", 2.0).ces.sigma, 2.0);
  EXPECT_DOUBLE_EQ(with_param(base, "G", 1.3).demo.G, 1.3);
  EXPECT_DOUBLE_EQ(with_param(base, "p", 0.7).price.p, 0.7);
  EXPECT_DOUBLE_EQ(with_param(base, "e_o", 2.0).e_o, 2.0);
  EXPECT_EQ(with_param(base, "horizon", 200.0).horizon, 200);
  EXPECT_THROW(with_param(base, "horizon", 200.5), std::invalid_argument);
  EXPECT_THROW(with_param(base, "horizon", -3.0), std::invalid_argument);
  EXPECT_THROW(with_param(base, "zeta", 1.0), std::invalid_argument);
}

TEST(Presets, KnownFigureIds) {
  EXPECT_TRUE(preset_for("fig1").has_value());
  EXPECT_TRUE(preset_for("fig2").has_value());
  EXPECT_FALSE(preset_for("fig9").has_value());
  EXPECT_EQ(preset_for("fig2")->price.kind, PathKind::Bubbly);
}

TEST(Csv, HeaderAndGoldenFirstRow) {
  EquilibriumPath path = build_equilibrium(preset_fig1());
  std::string csv = to_csv(path);
  std::string::size_type first = csv.find('\n');
  std::string::size_type second = csv.find('\n', first + 1);
  EXPECT_EQ(csv.substr(0, first), "t,w,r,P,e_y,c_y,c_o,R,log_q,savings_per_capita");
  EXPECT_EQ(csv.substr(first + 1, second - first - 1),
            "0,0.5,0.5,3,6.76539403526,3.76539403526,5.2,1.30651658353,0,3");
  // One line per stored period plus the header.
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 402);
}

TEST(Report, BubblyBenchmarkFields) {
  EquilibriumPath path = build_equilibrium(preset_fig2());
  DiagnosticsReport diag = run_diagnostics(path);
  std::string rep = render_report("fig2", path, diag);
  EXPECT_NE(rep.find("scenario_id = fig2\n"), std::string::npos);
  EXPECT_NE(rep.find("kind = bubbly\n"), std::string::npos);
  EXPECT_NE(rep.find("bubble_verdict = convergent\n"), std::string::npos);
  EXPECT_NE(rep.find("bubble_flag = yes\n"), std::string::npos);
  EXPECT_NE(rep.find("cass_criterion_holds = yes\n"), std::string::npos);
  EXPECT_NE(rep.find("asymptotically_bubbly = true\n"), std::string::npos);
  EXPECT_NE(rep.find("necessity_holds = true\n"), std::string::npos);
  EXPECT_EQ(rep.find("improvement_verdict"), std::string::npos);
  EXPECT_NE(rep.find("note = "), std::string::npos);
  // Keys appear in the documented order.
  EXPECT_LT(rep.find("scenario_id"), rep.find("kind ="));
  EXPECT_LT(rep.find("bubble_verdict"), rep.find("cass_verdict"));
  EXPECT_LT(rep.find("cass_verdict"), rep.find("pv_endowment_verdict"));
  EXPECT_LT(rep.find("mu ="), rep.find("note ="));
}

TEST(Report, FundamentalBenchmarkWithImprovement) {
  EquilibriumPath path = build_equilibrium(preset_fig1());
  DiagnosticsReport diag = run_diagnostics(path);
  ImprovementReport imp =
      improvement_search(path, path.cfg.pref, path.cfg.demo);
  std::string rep = render_report("fig1", path, diag, &imp);
  EXPECT_NE(rep.find("bubble_verdict = divergent\n"), std::string::npos);
  EXPECT_NE(rep.find("bubble_flag = no\n"), std::string::npos);
  EXPECT_NE(rep.find("cass_criterion_holds = no\n"), std::string::npos);
  EXPECT_NE(rep.find("asymptotically_bubbly = false\n"), std::string::npos);
  EXPECT_NE(rep.find("improvement_verdict = improvement\n"), std::string::npos);
  EXPECT_NE(rep.find("improvement_t_start = 24\n"), std::string::npos);
  EXPECT_NE(rep.find("improvement_epsilon = 0.0001\n"), std::string::npos);
}

TEST(Manifest, JsonRoundTrip) {
  RunManifest m;
  m.scenario_id = "fig1";
  m.command = "diagnose";
  m.config_echo = serialize_config(preset_fig1());
  m.outputs = {"fig1_report.txt", "fig1_manifest.json"};
  m.wall_ms = 12.5;
  RunManifest back = manifest_from_json(to_json(m));
  EXPECT_EQ(back.scenario_id, m.scenario_id);
  EXPECT_EQ(back.command, m.command);
  EXPECT_EQ(back.config_echo, m.config_echo);
  EXPECT_EQ(back.artifact_version, m.artifact_version);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_DOUBLE_EQ(back.wall_ms, m.wall_ms);
  // The embedded config reproduces the run's scenario.
  EXPECT_TRUE(parse_config(back.config_echo).scenario == preset_fig1());
}

}  // namespace

// Command-line front end: forecast comparison tests, Murphy diagrams,
// simulation studies, VaR backtests and Diebold-Mariano tests.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fcmp/bootstrap.hpp"
#include "fcmp/dm.hpp"
#include "fcmp/engine.hpp"
#include "fcmp/error.hpp"
#include "fcmp/panel.hpp"
#include "fcmp/report.hpp"
#include "fcmp/risk.hpp"
#include "fcmp/rng.hpp"
#include "fcmp/simulate.hpp"

using namespace fcmp;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitData = 3;

struct DataFlags {
  std::string input;
  std::string realized;
  std::string benchmark;
  std::vector<std::string> competitors;
  std::string label;
  bool all_pairs = false;
};

struct CommonFlags {
  std::uint64_t seed = 0;
  std::string output;
  int threads = 0;
};

void add_data_flags(CLI::App* cmd, DataFlags& d) {
  cmd->add_option("--input", d.input, "CSV file with realizations and forecasts")->required();
  cmd->add_option("--realized", d.realized, "column holding the realizations")->required();
  cmd->add_option("--benchmark", d.benchmark, "benchmark forecast column")->required();
  cmd->add_option("--competitor", d.competitors, "competitor forecast column (repeatable)")->required();
  cmd->add_option("--label-col", d.label, "optional row label column");
  cmd->add_flag("--all-pairs", d.all_pairs, "take the maximum over all ordered pairs");
}

ForecastPanel load_panel(const DataFlags& d) {
  std::vector<std::string> cols{d.benchmark};
  cols.insert(cols.end(), d.competitors.begin(), d.competitors.end());
  const auto label = d.label.empty() ? std::nullopt : std::optional<std::string>(d.label);
  return read_panel_csv(d.input, d.realized, cols, label);
}

void emit(const CommonFlags& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open output file '" + c.output + "'");
  out << text;
  if (!out) fail(ErrorKind::Io, "failed writing '" + c.output + "'");
}

BootstrapConfig bootstrap_config(std::size_t m, double mean_block_len, double block_p, const std::vector<double>& levels,
                                 std::uint64_t seed) {
  BootstrapConfig b;
  b.M = m;
  b.seed = seed;
  b.levels = levels;
  if (mean_block_len > 0.0) {
    require(mean_block_len >= 1.0, ErrorKind::InvalidArgument, "--mean-block-len must be at least 1");
    b.p = 1.0 / mean_block_len;
  }
  if (block_p > 0.0) b.p = block_p;
  b.validate();
  return b;
}

DmLoss parse_dm_loss(const std::string& s) {
  if (s == "squared") return DmLoss::Squared;
  if (s == "tick") return DmLoss::Tick;
  fail(ErrorKind::InvalidArgument, "--loss/--with-dm must be 'squared' or 'tick', got '" + s + "'");
}

Json dm_json(const ForecastPanel& panel, const PanelSlice& pair, const DmReport& r) {
  Json j = r;
  j["benchmark"] = panel.name(pair.benchmark);
  j["competitor"] = panel.name(pair.competitor);
  return j;
}

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Domain:
    case ErrorKind::Range:
    case ErrorKind::Spec:
    case ErrorKind::Precondition: return kExitValidation;
    default: return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forecast comparison across all consistent loss functions"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonFlags common;
  if (const char* env = std::getenv("MT_SEED")) {
    try {
      common.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: MT_SEED must be an unsigned integer\n";
      return kExitValidation;
    }
  }
  app.add_option("--threads", common.threads, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
  app.add_option("--output", common.output, "write the result to this file instead of stdout");

  // test
  DataFlags tdata;
  std::string t_kind, t_grid = "auto", t_dm;
  double t_alpha = 0.0, t_block_len = 0.0, t_block_p = 0.0;
  std::size_t t_m = 200;
  std::vector<double> t_levels{0.01, 0.05, 0.1};
  auto* test = app.add_subcommand("test", "bootstrap test of forecast dominance across consistent losses");
  add_data_flags(test, tdata);
  test->add_option("--kind", t_kind, "expectile or quantile")->required();
  test->add_option("--alpha", t_alpha, "functional level in (0,1)")->required();
  test->add_option("--bootstrap-m", t_m, "bootstrap replicates");
  auto* t_len = test->add_option("--mean-block-len", t_block_len, "mean block length (1/p)");
  test->add_option("--block-p", t_block_p, "block continuation parameter p")->excludes(t_len);
  test->add_option("--grid", t_grid, "auto|all|subsample:N|linspace:lo:hi:N");
  test->add_option("--levels", t_levels, "significance levels")->delimiter(',');
  test->add_option("--with-dm", t_dm, "also run a DM test with squared or tick loss");
  test->add_option("--seed", common.seed, "random seed (default: MT_SEED or 0)");

  // murphy
  DataFlags mdata;
  std::string m_kind, m_grid = "all";
  double m_alpha = 0.0;
  auto* murphy = app.add_subcommand("murphy", "mean extremal losses per forecast over a theta grid");
  add_data_flags(murphy, mdata);
  murphy->add_option("--kind", m_kind, "expectile or quantile")->required();
  murphy->add_option("--alpha", m_alpha, "functional level in (0,1)")->required();
  murphy->add_option("--grid", m_grid, "auto|all|subsample:N|linspace:lo:hi:N");
  murphy->add_option("--seed", common.seed, "random seed for subsampled grids");

  // dm
  DataFlags ddata;
  std::string d_loss;
  double d_alpha = 0.5;
  int d_lag = -1;
  auto* dm = app.add_subcommand("dm", "Diebold-Mariano test with a Newey-West variance");
  add_data_flags(dm, ddata);
  dm->add_option("--loss", d_loss, "squared or tick")->required();
  dm->add_option("--alpha", d_alpha, "tick-loss level (default 0.5)");
  dm->add_option("--lag", d_lag, "Newey-West lag (default: automatic)")->check(CLI::NonNegativeNumber);

  // simulate
  std::string s_design, s_setting = "lfc";
  double s_alpha = 0.5, s_block_len = 0.0, s_block_p = 0.0;
  std::size_t s_tp = 1000, s_reps = 200, s_m = 200;
  std::vector<double> s_levels{0.01, 0.05, 0.1};
  bool s_reverse = false, s_no_dm = false, s_full_scale = false;
  auto* simulate = app.add_subcommand("simulate", "rejection frequencies for a simulation design");
  simulate->add_option("--design", s_design, "mse|e1|e2|e3|q1|q2")->required();
  simulate->add_option("--setting", s_setting, "setting index, 'lfc' or 'all'");
  simulate->add_option("--alpha", s_alpha, "functional level for e1, q1 and q2");
  simulate->add_option("--tp", s_tp, "evaluation sample size");
  simulate->add_option("--reps", s_reps, "Monte Carlo replications");
  simulate->add_option("--bootstrap-m", s_m, "bootstrap replicates");
  auto* s_len = simulate->add_option("--mean-block-len", s_block_len, "mean block length (1/p)");
  simulate->add_option("--block-p", s_block_p, "block continuation parameter p")->excludes(s_len);
  simulate->add_option("--levels", s_levels, "significance levels")->delimiter(',');
  simulate->add_flag("--reverse", s_reverse, "swap benchmark and competitor");
  simulate->add_flag("--no-dm", s_no_dm, "skip the DM comparison");
  simulate->add_flag("--full-scale", s_full_scale, "1000 replications and 400 bootstrap draws");
  simulate->add_option("--seed", common.seed, "random seed (default: MT_SEED or 0)");

  // sizepower
  std::string sp_design, sp_null = "lfc";
  int sp_alt = 0;
  double sp_alpha = 0.5;
  std::size_t sp_tp = 1000, sp_reps = 200, sp_m = 200, sp_points = 100;
  auto* sizepower = app.add_subcommand("sizepower", "size-adjusted power curve between two settings");
  sizepower->add_option("--design", sp_design, "mse|e1|e2|e3|q1|q2")->required();
  sizepower->add_option("--null-setting", sp_null, "setting used as the null ('lfc' or an index)");
  sizepower->add_option("--alt-setting", sp_alt, "setting used as the alternative")->required();
  sizepower->add_option("--alpha", sp_alpha, "functional level for e1, q1 and q2");
  sizepower->add_option("--tp", sp_tp, "evaluation sample size");
  sizepower->add_option("--reps", sp_reps, "Monte Carlo replications");
  sizepower->add_option("--bootstrap-m", sp_m, "bootstrap replicates");
  sizepower->add_option("--points", sp_points, "number of nominal sizes in (0,1]")->check(CLI::PositiveNumber);
  sizepower->add_option("--seed", common.seed, "random seed (default: MT_SEED or 0)");

  // var
  std::string v_input, v_column, v_method;
  double v_alpha = 0.0;
  std::size_t v_window = 500;
  bool v_table = false, v_full = false;
  auto* var = app.add_subcommand("var", "rolling-window VaR backtest");
  var->add_option("--input", v_input, "CSV file with a return column")->required();
  var->add_option("--returns", v_column, "return column")->required();
  var->add_option("--method", v_method, "sample-quantile|normal|caviar-sy|caviar-asy")->required();
  var->add_option("--alpha", v_alpha, "VaR level in (0,1)")->required();
  var->add_option("--window", v_window, "estimation window length");
  var->add_flag("--table", v_table, "emit only the summary row");
  var->add_flag("--full-refit", v_full, "run the CAViaR multi-start in every window");
  var->add_option("--seed", common.seed, "random seed for CAViaR starting values");

  // generate
  std::string g_design;
  std::string g_setting = "lfc";
  double g_alpha = 0.5;
  std::size_t g_tp = 1000;
  auto* generate = app.add_subcommand("generate", "write a simulated panel as CSV");
  generate->add_option("--design", g_design, "mse|e1|e2|e3|q1|q2|normal")->required();
  generate->add_option("--setting", g_setting, "setting index or 'lfc'");
  generate->add_option("--alpha", g_alpha, "functional level");
  generate->add_option("--tp", g_tp, "rows")->check(CLI::PositiveNumber);
  generate->add_option("--seed", common.seed, "random seed (default: MT_SEED or 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return kExitValidation;
  }

  if (common.threads > 0) omp_set_num_threads(common.threads);

  try {
    if (*test) {
      const auto panel = load_panel(tdata);
      const Functional kind = parse_functional(t_kind);
      const FunctionalLevel alpha(t_alpha);
      const auto pairs = default_pairs(panel, 0, tdata.all_pairs);
      const auto grid = build_theta_grid(panel, pairs, GridSpec::parse(t_grid, common.seed));
      const auto cfg = bootstrap_config(t_m, t_block_len, t_block_p, t_levels, common.seed);
      const auto report = recentered_bootstrap_test(panel, pairs, kind, alpha, grid, cfg);
      if (t_dm.empty()) {
        emit(common, write_report_json(report));
      } else {
        const DmLoss loss = parse_dm_loss(t_dm);
        Json dms = Json::array();
        for (const auto& pair : pairs) {
          try {
            dms.push_back(dm_json(panel, pair, dm_test(panel, pair, loss, alpha)));
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::Degenerate) throw;
            dms.push_back(Json{{"benchmark", panel.name(pair.benchmark)},
                               {"competitor", panel.name(pair.competitor)},
                               {"error", e.what()}});
          }
        }
        emit(common, write_json(Json{{"test", report}, {"dm", dms}}));
      }
    } else if (*murphy) {
      const auto panel = load_panel(mdata);
      const auto pairs = default_pairs(panel, 0, mdata.all_pairs);
      const auto grid = build_theta_grid(panel, pairs, GridSpec::parse(m_grid, common.seed));
      const auto table = murphy_curve(panel, parse_functional(m_kind), FunctionalLevel(m_alpha), grid);
      emit(common, murphy_csv(table, true));
    } else if (*dm) {
      const auto panel = load_panel(ddata);
      const DmLoss loss = parse_dm_loss(d_loss);
      const auto lag = d_lag < 0 ? std::nullopt : std::optional<std::size_t>(d_lag);
      Json reports = Json::array();
      for (const auto& pair : default_pairs(panel, 0, ddata.all_pairs))
        reports.push_back(dm_json(panel, pair, dm_test(panel, pair, loss, FunctionalLevel(d_alpha), lag)));
      emit(common, write_json(Json{{"reports", reports}}));
    } else if (*simulate) {
      const Design design = parse_design(s_design);
      if (s_full_scale) {
        s_reps = 1000;
        s_m = 400;
      }
      std::vector<int> settings;
      if (s_setting == "all") {
        for (int s = 1; s <= setting_count(design); ++s) settings.push_back(s);
      } else {
        settings.push_back(parse_setting(design, s_setting));
      }
      std::vector<StudyResult> results;
      for (int s : settings) {
        StudySpec spec;
        spec.scenario = ScenarioSpec{design, s, s_alpha, s_tp, common.seed};
        spec.replications = s_reps;
        spec.bootstrap = bootstrap_config(s_m, s_block_len, s_block_p, s_levels, common.seed);
        spec.reverse = s_reverse;
        spec.with_dm = !s_no_dm;
        results.push_back(run_rejection_study(spec));
      }
      emit(common, study_csv(results));
    } else if (*sizepower) {
      const Design design = parse_design(sp_design);
      auto study = [&](int setting) {
        StudySpec spec;
        spec.scenario = ScenarioSpec{design, setting, sp_alpha, sp_tp, common.seed};
        spec.replications = sp_reps;
        spec.bootstrap = bootstrap_config(sp_m, 0.0, 0.0, {0.05}, common.seed);
        spec.with_dm = false;
        return run_rejection_study(spec);
      };
      const auto null_study = study(parse_setting(design, sp_null));
      const auto alt_study = study(parse_setting(design, std::to_string(sp_alt)));
      std::vector<double> gammas(sp_points);
      for (std::size_t i = 0; i < sp_points; ++i) gammas[i] = static_cast<double>(i + 1) / sp_points;
      emit(common, size_power_csv(size_power_curve(null_study.p_values, alt_study.p_values, gammas)));
    } else if (*var) {
      std::ifstream in(v_input, std::ios::binary);
      if (!in) fail(ErrorKind::Io, "cannot open input file '" + v_input + "'");
      const auto table = read_csv(in);
      const auto returns = numeric_column(table, v_column);
      CaviarFitConfig cfg;
      cfg.seed = common.seed;
      if (v_full) cfg.refit_every = 1;
      const auto report = rolling_var_backtest(returns, parse_var_method(v_method), FunctionalLevel(v_alpha),
                                               v_window, cfg);
      emit(common, write_json(v_table ? backtest_table_row(report) : Json(report)));
    } else if (*generate) {
      std::ostringstream os;
      os.precision(17);
      if (g_design == "normal") {
        Rng rng(common.seed, {0x72657473});
        os << "r\n";
        for (std::size_t t = 0; t < g_tp; ++t) os << rng.normal() << '\n';
      } else {
        const Design design = parse_design(g_design);
        const auto panel = generate_scenario(
            ScenarioSpec{design, parse_setting(design, g_setting), g_alpha, g_tp, common.seed});
        os << "y";
        for (const auto& n : panel.names()) os << ',' << n;
        os << '\n';
        for (std::size_t t = 0; t < panel.size(); ++t) {
          os << panel.realized()[t];
          for (std::size_t k = 0; k < panel.series_count(); ++k) os << ',' << panel.forecast(k)[t];
          os << '\n';
        }
      }
      emit(common, os.str());
    }
  } catch (const Error& e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return kExitData;
  }
  return 0;
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcmp/bootstrap.hpp"
#include "fcmp/dm.hpp"
#include "fcmp/engine.hpp"
#include "fcmp/loss.hpp"
#include "fcmp/panel.hpp"

namespace fcmp {

// alpha-expectile of a standard normal.
double normal_expectile(double alpha);
// Asymptotic standard deviation scale of the empirical normal expectile.
double normal_expectile_scale(double alpha);
// sqrt(alpha (1 - alpha)) / phi(Phi^-1(alpha))
double normal_quantile_scale(double alpha);

enum class Design { MseVsBregman, E1, E2, E3, Q1, Q2 };

const char* to_string(Design d);
Design parse_design(const std::string& text);
Functional design_functional(Design d);
int setting_count(Design d);
// Setting index of the least favorable configuration (0 when the design has none).
int lfc_setting(Design d);
// Accepts a 1-based index or "lfc".
int parse_setting(Design d, const std::string& text);

struct ScenarioSpec {
  Design design = Design::E1;
  int setting = 1;      // 1-based, in table order
  double alpha = 0.5;   // ignored by the conditional-mean designs
  std::size_t tp = 1000;
  std::uint64_t seed = 0;
};

// Panel with realized column "y", benchmark "x1" and competitor "x2".
ForecastPanel generate_scenario(const ScenarioSpec& spec);

// Level actually targeted by the design (0.5 for the conditional-mean designs).
double design_alpha(const ScenarioSpec& spec);

struct ScenarioCoefficients {
  double c1, b1, c2, b2;
};
ScenarioCoefficients mse_scenario(int scenario);

// E[L(X1, Y)] - E[L(X2, Y)] at alpha = 0.5 for the squared-error,
// exponential Bregman and extremal expectile losses.
double analytic_loss_diff(int scenario, const LossFamily& loss);
// Standard deviation of the per-period extremal expectile loss difference.
double analytic_extremal_diff_sd(int scenario, double theta);

struct StudySpec {
  ScenarioSpec scenario;
  std::size_t replications = 200;
  BootstrapConfig bootstrap;  // seed is derived per replication from scenario.seed
  bool reverse = false;       // swap benchmark and competitor
  bool with_dm = true;
};

struct StudyResult {
  std::string design;
  int setting = 0;
  double alpha = 0.5;
  std::size_t tp = 0;
  std::size_t replications = 0;
  std::size_t bootstrap_m = 0;
  bool reverse = false;
  std::vector<double> levels;
  std::map<double, double> proposed;  // level -> rejection frequency
  std::map<double, double> dm;
  std::vector<double> p_values;
  std::vector<double> dm_p_values;
};

StudyResult run_rejection_study(const StudySpec& spec);

std::string study_csv(const std::vector<StudyResult>& results);

struct SizePowerCurve {
  std::vector<double> size;
  std::vector<double> power;
};

SizePowerCurve size_power_curve(const std::vector<double>& p_null, const std::vector<double>& p_alt,
                                const std::vector<double>& gammas);

std::string size_power_csv(const SizePowerCurve& curve);

}  // namespace fcmp

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fcmp/simulate.hpp"
#include "support.hpp"

using namespace fcmp;
using fcmp::testing::kind_of;

TEST_CASE("normal expectile and scales") {
  // reference values from independent numerical integration
  struct Row {
    double alpha, expectile, scale, qscale;
  };
  const Row rows[] = {
      {0.01, -1.71743685961478, 2.18796531729927, 3.73323626112696},
      {0.05, -1.14017114583574, 1.42846157500052, 2.11318751096909},
      {0.1, -0.861592112415829, 1.22963597918745, 1.7094179568351},
      {0.5, 0.0, 1.0, 1.2533141373155},
      {0.9, 0.861592112415829, 1.22963597918745, 1.7094179568351},
  };
  for (const auto& r : rows) {
    CAPTURE(r.alpha);
    CHECK(normal_expectile(r.alpha) == doctest::Approx(r.expectile).epsilon(1e-10));
    CHECK(normal_expectile_scale(r.alpha) == doctest::Approx(r.scale).epsilon(1e-9));
    CHECK(normal_quantile_scale(r.alpha) == doctest::Approx(r.qscale).epsilon(1e-10));
  }
  CHECK(std::abs(normal_expectile(0.5)) < 1e-12);
  CHECK(normal_expectile(0.2) == doctest::Approx(-normal_expectile(0.8)).epsilon(1e-12));
}

TEST_CASE("analytic loss differences match numerical integration") {
  struct Row {
    int scenario;
    double a;
    double value;
  };
  const Row expb[] = {
      {1, -1, -0.01211171037319}, {1, 0.3, 0.04006959203148}, {1, 1, 0.4433690902875},
      {2, -1, 0.008562505299405}, {2, 0.3, 0.1065382226228},  {2, 1, 0.5775159444284},
      {3, -1, -0.0585295726789},  {3, 0.3, -0.1260499379844}, {3, 1, -0.2183955005211},
  };
  for (const auto& r : expb) {
    CAPTURE(r.scenario);
    CAPTURE(r.a);
    CHECK(analytic_loss_diff(r.scenario, family::ExponentialBregman{r.a}) == doctest::Approx(r.value).epsilon(1e-9));
  }
  struct Ext {
    int scenario;
    double theta, mean, sd;
  };
  const Ext ext[] = {
      {1, -1.0, 0.005412903806748, 0.1020518313043},   {1, 0.0, -0.02920273821201, 0.2543334586818},
      {1, 1.5, 0.04161172098855, 0.2986310845147},     {2, -1.0, 0.005413683803842, 0.1020461352076},
      {2, 1.5, 0.0550165257065, 0.275666002429},       {3, -1.0, -0.0001910516615221, 0.0263065663491},
      {3, 0.0, -0.02920273821201, 0.2543334586818},    {3, 1.5, -0.01462655647158, 0.1423542486054},
  };
  for (const auto& r : ext) {
    CAPTURE(r.scenario);
    CAPTURE(r.theta);
    CHECK(analytic_loss_diff(r.scenario, family::ExtremalExpectile{r.theta}) ==
          doctest::Approx(r.mean).epsilon(1e-8));
    CHECK(analytic_extremal_diff_sd(r.scenario, r.theta) == doctest::Approx(r.sd).epsilon(1e-8));
  }
  CHECK(analytic_loss_diff(1, family::SquaredError{}) == 0.0);
  CHECK(analytic_loss_diff(1, family::ExponentialBregman{1.0}) > 0.0);
  CHECK(analytic_loss_diff(1, family::ExponentialBregman{-1.0}) < 0.0);
  for (int s = 1; s <= 3; ++s)
    for (double th : {-20.0, 20.0}) CHECK(std::abs(analytic_loss_diff(s, family::ExtremalExpectile{th})) < 1e-8);
  CHECK(kind_of([] { analytic_loss_diff(1, family::Qlike{}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("generators are reproducible and sized") {
  for (Design d : {Design::MseVsBregman, Design::E1, Design::E2, Design::E3, Design::Q1, Design::Q2}) {
    for (int s = 1; s <= setting_count(d); ++s) {
      ScenarioSpec spec;
      spec.design = d;
      spec.setting = s;
      spec.alpha = 0.1;
      spec.tp = 120;
      spec.seed = 5;
      const auto a = generate_scenario(spec);
      const auto b = generate_scenario(spec);
      CAPTURE(to_string(d));
      CAPTURE(s);
      CHECK(a.size() == 120);
      CHECK(a.series_count() == 2);
      CHECK(a.realized() == b.realized());
      CHECK(a.forecast(0) == b.forecast(0));
      CHECK(a.forecast(1) == b.forecast(1));
    }
  }
  CHECK(parse_design("e2") == Design::E2);
  CHECK(parse_setting(Design::E1, "lfc") == 3);
  CHECK(parse_setting(Design::Q2, "2") == 2);
  CHECK(kind_of([] { parse_setting(Design::Q1, "9"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { parse_design("x9"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("generator moments") {
  ScenarioSpec s;
  s.design = Design::MseVsBregman;
  s.setting = 1;
  s.tp = 100000;
  s.seed = 2;
  const auto p = generate_scenario(s);
  double m1 = 0, m2 = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    m1 += std::pow(p.forecast(0)[t] - p.realized()[t], 2);
    m2 += std::pow(p.forecast(1)[t] - p.realized()[t], 2);
  }
  CHECK(std::abs(m1 - m2) / p.size() < 0.1);

  ScenarioSpec q;
  q.design = Design::Q2;
  q.setting = 1;
  q.alpha = 0.05;
  q.tp = 20000;
  q.seed = 3;
  const auto pq = generate_scenario(q);
  const auto& y = pq.realized();
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double v = 0;
  for (double x : y) v += (x - mean) * (x - mean);
  v /= y.size() - 1;
  CHECK(v == doctest::Approx(4.69).epsilon(0.05));
}

TEST_CASE("size-power curve") {
  const std::vector<double> pn{0.01, 0.2, 0.5, 0.7, 0.93}, gam{0.2, 0.4, 0.6, 0.8, 1.0};
  const auto self = size_power_curve(pn, pn, gam);
  for (std::size_t i = 0; i < gam.size(); ++i) CHECK(self.power[i] == self.size[i]);
  const auto zero = size_power_curve(pn, std::vector<double>(5, 0.0), gam);
  for (double p : zero.power) CHECK(p == 1.0);
  std::vector<double> larger = pn;
  for (auto& p : larger) p = std::min(1.0, p + 0.1);
  const auto low = size_power_curve(pn, larger, gam);
  for (std::size_t i = 0; i < gam.size(); ++i) CHECK(low.power[i] <= low.size[i]);
  CHECK(kind_of([&] { size_power_curve(pn, pn, {1.5}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("small rejection study is deterministic") {
  StudySpec spec;
  spec.scenario.design = Design::E1;
  spec.scenario.setting = 3;
  spec.scenario.alpha = 0.5;
  spec.scenario.tp = 150;
  spec.scenario.seed = 1;
  spec.replications = 8;
  spec.bootstrap.M = 40;
  const auto a = run_rejection_study(spec);
  const auto b = run_rejection_study(spec);
  CHECK(a.p_values == b.p_values);
  CHECK(a.dm_p_values == b.dm_p_values);
  CHECK(study_csv({a}) == study_csv({b}));
  CHECK(study_csv({a}).rfind("design,setting,alpha,tp,reps,m,reverse,level,proposed,dm\n", 0) == 0);
}

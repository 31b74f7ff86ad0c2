#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fcmp/bootstrap.hpp"
#include "fcmp/simulate.hpp"
#include "support.hpp"

using namespace fcmp;
using fcmp::testing::kind_of;

TEST_CASE("empirical quantile uses the inf rule") {
  const BootstrapDistribution d{{1, 2, 3, 4}, 0.0};
  CHECK(empirical_quantile(d, 0.5) == 2.0);
  CHECK(empirical_quantile(d, 0.75) == 3.0);
  CHECK(empirical_quantile(d, 0.76) == 4.0);
  CHECK(empirical_quantile(d, 0.01) == 1.0);
  CHECK(empirical_quantile(std::vector<double>{5}, 0.3) == 5.0);
  CHECK(empirical_quantile(std::vector<double>{5}, 0.99) == 5.0);
  CHECK(kind_of([] { empirical_quantile(std::vector<double>{}, 0.5); }) == ErrorKind::EmptyInput);
  CHECK(kind_of([] { empirical_quantile(std::vector<double>{1}, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("stationary resampling indices") {
  Rng a(42), b(42);
  const auto i1 = stationary_resample_indices(250, 0.1, a);
  const auto i2 = stationary_resample_indices(250, 0.1, b);
  CHECK(i1 == i2);
  CHECK(i1.size() == 250);
  for (auto i : i1) CHECK(i < 250);

  // p = 1 leaves no continuation beyond chance
  Rng c(1);
  const auto iid = stationary_resample_indices(5000, 1.0, c);
  std::size_t runs = 0;
  for (std::size_t t = 1; t < iid.size(); ++t) runs += iid[t] == (iid[t - 1] + 1) % 5000;
  CHECK(runs < 10);

  Rng d(2);
  CHECK(kind_of([&] { stationary_resample_indices(10, 0.0, d); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { stationary_resample_indices(0, 0.5, d); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("block probability resolution") {
  BootstrapConfig c;
  CHECK(c.resolve_p(1000) == doctest::Approx(0.1));
  c.p = 0.25;
  CHECK(c.resolve_p(1000) == 0.25);
  c.p = 1.5;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidArgument);
  BootstrapConfig z;
  z.M = 0;
  CHECK(kind_of([&] { z.validate(); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("bootstrap test on identical columns") {
  Rng rng(5);
  std::vector<double> y(80), x(80);
  for (std::size_t t = 0; t < 80; ++t) {
    y[t] = rng.normal();
    x[t] = y[t] + rng.normal();
  }
  ForecastPanel p(y, {"a", "b"}, {x, x});
  const auto pairs = default_pairs(p, 0);
  const auto g = build_theta_grid(p, pairs, GridSpec::all());
  BootstrapConfig cfg;
  cfg.M = 50;
  cfg.seed = 3;
  const auto out = run_recentered_bootstrap(p, pairs, Functional::Expectile, FunctionalLevel(0.5), g, cfg);
  CHECK(out.report.statistic == 0.0);
  CHECK(out.report.p_value == 1.0);
  for (double s : out.distribution.sorted) CHECK(s == 0.0);
  for (const auto& [lvl, r] : out.report.reject) CHECK_FALSE(r);
}

TEST_CASE("serial and parallel bootstrap agree exactly") {
  ScenarioSpec s;
  s.design = Design::MseVsBregman;
  s.setting = 1;
  s.tp = 300;
  s.seed = 17;
  const auto p = generate_scenario(s);
  const auto pairs = default_pairs(p, 0);
  const auto g = build_theta_grid(p, pairs, GridSpec::all());
  BootstrapConfig cfg;
  cfg.M = 60;
  cfg.seed = 99;
  for (auto kind : {Functional::Expectile, Functional::Quantile}) {
    const auto a = run_recentered_bootstrap(p, pairs, kind, FunctionalLevel(0.5), g, cfg, Exec::Serial);
    const auto b = run_recentered_bootstrap(p, pairs, kind, FunctionalLevel(0.5), g, cfg, Exec::Parallel);
    CHECK(a.report == b.report);
    CHECK(a.distribution.sorted == b.distribution.sorted);
    CHECK(std::is_sorted(a.distribution.sorted.begin(), a.distribution.sorted.end()));
    CHECK(a.report.p_value >= 0.0);
    CHECK(a.report.p_value <= 1.0);
    CHECK(a.report.block_p == doctest::Approx(std::pow(300.0, -1.0 / 3.0)));
  }
}

TEST_CASE("dominated competitor is rejected, dominating one is not") {
  ScenarioSpec s;
  s.design = Design::MseVsBregman;
  s.setting = 3;
  s.tp = 1000;
  s.seed = 4;
  const auto p = generate_scenario(s);
  const auto g = build_theta_grid(p, default_pairs(p, 0), GridSpec::all());
  BootstrapConfig cfg;
  cfg.M = 100;
  cfg.seed = 8;
  const auto fwd =
      recentered_bootstrap_test(p, {PanelSlice(0, 1)}, Functional::Expectile, FunctionalLevel(0.5), g, cfg);
  const auto rev =
      recentered_bootstrap_test(p, {PanelSlice(1, 0)}, Functional::Expectile, FunctionalLevel(0.5), g, cfg);
  CHECK_FALSE(fwd.reject.at(0.05));
  CHECK(rev.reject.at(0.05));
  CHECK(rev.argmax_benchmark == "x2");
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fcmp/optim.hpp"
#include "fcmp/risk.hpp"
#include "fcmp/rng.hpp"
#include "support.hpp"

using namespace fcmp;
using fcmp::testing::kind_of;

namespace {

std::vector<double> caviar_data(const CaviarParams& truth, std::size_t T, std::uint64_t seed) {
  // scaling N(0,1) by VaR_t / z keeps VaR_t the true 5% quantile of R_t
  Rng rng(seed);
  const double z = -1.6448536269514722;
  std::vector<double> r(T);
  double var = -1.0;
  for (std::size_t t = 0; t < T; ++t) {
    r[t] = var / z * rng.normal();
    const double c = truth.kind == CaviarKind::Symmetric || r[t] > 0 ? truth.c1 : truth.c2;
    var = truth.a + truth.b * var + c * std::abs(r[t]);
  }
  return r;
}

}  // namespace

TEST_CASE("nelder-mead") {
  auto r1 = nelder_mead([](const std::vector<double>& x) { return (x[0] - 2) * (x[0] - 2); }, {0.0});
  CHECK(r1.argmin[0] == doctest::Approx(2.0).epsilon(1e-6));
  auto r2 = nelder_mead([](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; }, {3.0, 4.0});
  CHECK(std::abs(r2.argmin[0]) < 1e-6);
  CHECK(std::abs(r2.argmin[1]) < 1e-6);
  CHECK(r2.value <= 1e-10);
  NelderMeadConfig cfg;
  cfg.restarts = 3;
  cfg.max_iterations = 20000;
  auto rosen = [](const std::vector<double>& x) {
    return 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
  };
  auto r3 = nelder_mead(rosen, {-1.2, 1.0}, cfg);
  CHECK(std::abs(r3.argmin[0] - 1) < 1e-3);
  CHECK(std::abs(r3.argmin[1] - 1) < 1e-3);
  CHECK(kind_of([&] { nelder_mead(rosen, {NAN, 1.0}); }) == ErrorKind::Optimization);
  CHECK(kind_of([&] { nelder_mead(rosen, {}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("sample quantile and expectile") {
  CHECK(sample_quantile({4, 1, 3, 2}, 0.5) == 2.0);
  CHECK(sample_quantile({4, 1, 3, 2}, 0.51) == 3.0);
  CHECK(sample_expectile({1, 5, 2, 8}, 0.5) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(sample_expectile({0, 1}, 1 - 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sample_expectile({0, 1}, 1e-9) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(sample_expectile({0, 1}, 0.2) < 0.5);
  CHECK(kind_of([] { sample_quantile({}, 0.5); }) == ErrorKind::EmptyInput);
}

TEST_CASE("caviar recursion") {
  const auto sym = CaviarParams::symmetric(-0.1, 0.5, -0.2);
  // element t is the forecast for t + 1 given VaR_t and R_t
  CHECK(caviar_path(sym, {2.0, 0.0}, -1.0)[0] == doctest::Approx(-1.0).epsilon(1e-15));
  const auto flat = caviar_path(CaviarParams::symmetric(0, 1, 0), {1, -2, 3, 0.5}, -1.3);
  for (double v : flat) CHECK(v == -1.3);
  Rng rng(1);
  std::vector<double> r(50);
  for (auto& v : r) v = rng.normal();
  CHECK(caviar_path(sym, r, -1.0) == caviar_path(CaviarParams::asymmetric(-0.1, 0.5, -0.2, -0.2), r, -1.0));
  CHECK(kind_of([&] { caviar_path(CaviarParams::symmetric(0, 1e300, 0), std::vector<double>(10, 1.0), 1e300); }) ==
        ErrorKind::Overflow);
}

TEST_CASE("tick loss objective") {
  const auto zero = CaviarParams::symmetric(0, 0, 0);
  CHECK(tick_loss_objective(zero, {1, -1}, FunctionalLevel(0.5), 0.0) == doctest::Approx(0.5));
  const auto low = CaviarParams::symmetric(-50, 0, 0);
  const std::vector<double> r{0.3, -0.2, 1.1, 0.4};
  CHECK(tick_loss_objective(low, r, FunctionalLevel(0.01), -50) ==
        doctest::Approx(0.01 * (0.4 + 50.0)).epsilon(1e-12));

  Rng rng(3);
  std::vector<double> xs(101);
  for (auto& v : xs) v = rng.normal();
  const double q = sample_quantile(xs, 0.1);
  const double at_q = tick_loss_objective(CaviarParams::symmetric(q, 0, 0), xs, FunctionalLevel(0.1), q);
  for (int i = -300; i <= 300; ++i) {
    const double c = i / 100.0;
    CHECK(tick_loss_objective(CaviarParams::symmetric(c, 0, 0), xs, FunctionalLevel(0.1), c) >= at_q - 1e-15);
  }
}

TEST_CASE("caviar estimation") {
  const auto truth = CaviarParams::symmetric(-0.05, 0.85, -0.25);
  const auto r = caviar_data(truth, 2000, 21);
  CaviarFitConfig cfg;
  cfg.seed = 5;
  const auto fit = estimate_caviar(r, FunctionalLevel(0.05), CaviarKind::Symmetric, cfg);
  CHECK(fit.objective <= tick_loss_objective(truth, r, FunctionalLevel(0.05), fit.var_init) + 1e-3);
  const auto again = estimate_caviar(r, FunctionalLevel(0.05), CaviarKind::Symmetric, cfg);
  CHECK(again.params == fit.params);

  Rng rng(4);
  std::vector<double> iid(500);
  for (auto& v : iid) v = rng.normal();
  const auto med = estimate_caviar(iid, FunctionalLevel(0.5), CaviarKind::Symmetric, cfg);
  const double best_const = tick_loss_objective(CaviarParams::symmetric(sample_quantile(iid, 0.5), 0, 0), iid,
                                                FunctionalLevel(0.5), sample_quantile(iid, 0.5));
  CHECK(med.objective <= best_const + 1e-9);
  const auto path = caviar_path(med.params, iid, med.var_init);
  const double mean_path = std::accumulate(path.begin(), path.end(), 0.0) / path.size();
  CHECK(std::abs(mean_path) < 0.2);
  CHECK(kind_of([&] { estimate_caviar(std::vector<double>(50, 0.1), FunctionalLevel(0.05), CaviarKind::Symmetric); }) ==
        ErrorKind::Precondition);
}

TEST_CASE("rolling backtests") {
  Rng rng(77);
  std::vector<double> r(4000);
  for (auto& v : r) v = rng.normal();
  for (auto m : {VarMethod::NormalFit, VarMethod::SampleQuantile}) {
    const auto rep = rolling_var_backtest(r, m, FunctionalLevel(0.05), 500);
    CHECK(rep.var_series.size() == 3500);
    CHECK(std::abs(rep.hit_proportion - 0.05) <= 0.01);
    CHECK(rep.min <= rep.mean);
    CHECK(rep.mean <= rep.max);
  }
  const auto flat = rolling_var_backtest(std::vector<double>(60, 0.7), VarMethod::SampleQuantile,
                                         FunctionalLevel(0.05), 20);
  CHECK(flat.hit_proportion == 1.0);
  for (double v : flat.var_series) CHECK(v == 0.7);
  CHECK(kind_of([&] { rolling_var_backtest(r, VarMethod::NormalFit, FunctionalLevel(0.05), 4000); }) ==
        ErrorKind::Precondition);
  CHECK(kind_of([&] { rolling_var_backtest(r, VarMethod::CaviarSy, FunctionalLevel(0.05), 50); }) ==
        ErrorKind::Precondition);
  CHECK(parse_var_method("caviar-asy") == VarMethod::CaviarAsy);
  CHECK(kind_of([] { parse_var_method("garch"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("ordinary least squares") {
  const auto c = ols_fit({{0, 1, 2, 3, 4}}, {2, 5, 8, 11, 14});
  CHECK(c[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(3.0).epsilon(1e-12));
  const auto d = ols_fit({{0, 1}}, {1, 3});
  CHECK(d[0] == doctest::Approx(1.0));
  CHECK(d[1] == doctest::Approx(2.0));
  CHECK(kind_of([] { ols_fit({{1, 1, 1}, {1, 1, 1}}, {1, 2, 3}); }) == ErrorKind::Singular);
}

TEST_CASE("garch fitting") {
  std::vector<double> om, be, ar;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed);
    std::vector<double> r(4000);
    double h = 0.05 / (1 - 0.95), prev = 0.0;
    for (auto& v : r) {
      h = 0.05 + 0.75 * h + 0.2 * prev * prev;
      v = std::sqrt(h) * rng.normal();
      prev = v;
    }
    const auto f = garch11_fit(r);
    om.push_back(f.omega);
    be.push_back(f.beta[0]);
    ar.push_back(f.arch[0]);
    CHECK(f.next_variance > 0.0);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(std::abs(median(om) - 0.05) <= 0.1);
  CHECK(std::abs(median(be) - 0.75) <= 0.1);
  CHECK(std::abs(median(ar) - 0.2) <= 0.1);

  Rng rng(9);
  std::vector<double> flat(2000);
  for (auto& v : flat) v = rng.normal();
  const auto f = garch11_fit(flat);
  double var = 0;
  for (double v : flat) var += v * v;
  var /= flat.size();
  // beta is not identified without ARCH effects; the forecast variance is
  CHECK(f.next_variance == doctest::Approx(var).epsilon(0.1));
  CHECK(f.arch[0] < 0.1);
  CHECK(kind_of([] { garch11_fit(std::vector<double>(50, 0.1)); }) == ErrorKind::Precondition);
}

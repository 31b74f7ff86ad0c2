#include "fcmp/dm.hpp"

#include <cmath>

#include "fcmp/error.hpp"
#include "fcmp/normal.hpp"

namespace fcmp {

double newey_west_variance(const std::vector<double>& series, std::size_t lag) {
  require(!series.empty(), ErrorKind::EmptyInput, "newey-west: empty series");
  const std::size_t T = series.size();
  require(T >= lag + 1, ErrorKind::InvalidArgument, "newey-west: series shorter than lag + 1");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(T);
  std::vector<double> e(T);
  for (std::size_t t = 0; t < T; ++t) e[t] = series[t] - mean;
  auto gamma = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t t = j; t < T; ++t) s += e[t] * e[t - j];
    return s / static_cast<double>(T);
  };
  double v = gamma(0);
  for (std::size_t j = 1; j <= lag; ++j)
    v += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(lag + 1)) * gamma(j);
  if (v < 0.0) fail(ErrorKind::Degenerate, "newey-west: negative long-run variance estimate");
  return v;
}

std::size_t newey_west_auto_lag(std::size_t T) {
  return static_cast<std::size_t>(std::floor(4.0 * std::pow(static_cast<double>(T) / 100.0, 2.0 / 9.0)));
}

DmReport dm_test(const ForecastPanel& panel, const PanelSlice& pair, DmLoss loss,
                 FunctionalLevel alpha, std::optional<std::size_t> lag) {
  pair.validate(panel);
  const std::size_t T = panel.size();
  require(T >= 8, ErrorKind::Precondition, "dm: need at least 8 observations");
  const LossSpec spec = loss == DmLoss::Squared ? LossSpec(family::SquaredError{}, alpha)
                                                : LossSpec(family::LinLin{}, alpha);
  const auto& y = panel.realized();
  const auto& xb = panel.forecast(pair.benchmark);
  const auto& xc = panel.forecast(pair.competitor);
  std::vector<double> d(T);
  double mean = 0.0, sb = 0.0, sc = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    d[t] = consistent_loss(spec, xb[t], y[t]) - consistent_loss(spec, xc[t], y[t]);
    mean += d[t];
    sb += (xb[t] - y[t]) * (xb[t] - y[t]);
    sc += (xc[t] - y[t]) * (xc[t] - y[t]);
  }
  mean /= static_cast<double>(T);

  DmReport r;
  r.nw_lag = lag ? *lag : newey_west_auto_lag(T);
  const double v = newey_west_variance(d, r.nw_lag);
  if (!(v > 0.0)) fail(ErrorKind::Degenerate, "dm: loss differential has zero variance");
  r.mean_diff = mean;
  r.statistic = mean / std::sqrt(v / static_cast<double>(T));
  r.p_value = norm_sf(r.statistic);
  if (loss == DmLoss::Squared)
    r.drmse_x100 = 100.0 * (std::sqrt(sb / static_cast<double>(T)) - std::sqrt(sc / static_cast<double>(T)));
  return r;
}

}  // namespace fcmp

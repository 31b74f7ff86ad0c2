#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fcmp/loss.hpp"
#include "fcmp/panel.hpp"

namespace fcmp {

// Bartlett-kernel long-run variance with 1/T autocovariances of the demeaned series.
double newey_west_variance(const std::vector<double>& series, std::size_t lag);

// floor(4 (T/100)^(2/9))
std::size_t newey_west_auto_lag(std::size_t T);

enum class DmLoss { Squared, Tick };

struct DmReport {
  double statistic = 0.0;
  double p_value = 0.5;  // one-sided: competitor beats benchmark
  std::size_t nw_lag = 0;
  double mean_diff = 0.0;
  std::optional<double> drmse_x100;  // squared loss only

  bool operator==(const DmReport&) const = default;
};

DmReport dm_test(const ForecastPanel& panel, const PanelSlice& pair, DmLoss loss,
                 FunctionalLevel alpha, std::optional<std::size_t> lag = std::nullopt);

}  // namespace fcmp

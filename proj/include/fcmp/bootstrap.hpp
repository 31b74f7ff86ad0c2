#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcmp/engine.hpp"
#include "fcmp/rng.hpp"

namespace fcmp {

struct BootstrapConfig {
  std::size_t M = 200;
  std::optional<double> p;  // reciprocal mean block length; empty means T^(-1/3)
  std::uint64_t seed = 0;
  std::vector<double> levels{0.01, 0.05, 0.1};

  void validate() const;
  double resolve_p(std::size_t T) const;
};

struct BootstrapDistribution {
  std::vector<double> sorted;  // ascending
  double observed = 0.0;
};

enum class Exec { Serial, Parallel };

struct TestReport {
  double statistic = 0.0;
  double argmax_theta = 0.0;
  std::string argmax_benchmark;
  std::string argmax_competitor;
  std::vector<std::pair<std::string, std::string>> pairs;
  double p_value = 1.0;
  std::map<double, double> critical_values;  // gamma -> h_M(1 - gamma)
  std::map<double, bool> reject;
  std::size_t bootstrap_m = 0;
  double block_p = 1.0;
  std::uint64_t seed = 0;
  std::string kind;
  double alpha = 0.5;
  std::size_t sample_size = 0;
  std::size_t grid_size = 0;
  std::string grid;

  bool operator==(const TestReport&) const = default;
};

// Concatenated blocks with geometric(p) lengths and uniform starts in
// {0..T-1}, wrapping circularly, truncated to T entries.
std::vector<std::size_t> stationary_resample_indices(std::size_t T, double p, Rng& rng);

// Smallest order statistic whose empirical CDF reaches q.
double empirical_quantile(const BootstrapDistribution& dist, double q);
double empirical_quantile(const std::vector<double>& sorted, double q);

struct BootstrapOutcome {
  TestReport report;
  BootstrapDistribution distribution;
};

BootstrapOutcome run_recentered_bootstrap(const ForecastPanel& panel,
                                          const std::vector<PanelSlice>& pairs, Functional kind,
                                          FunctionalLevel alpha, const ThetaGrid& grid,
                                          const BootstrapConfig& config, Exec exec = Exec::Parallel);

TestReport recentered_bootstrap_test(const ForecastPanel& panel, const std::vector<PanelSlice>& pairs,
                                     Functional kind, FunctionalLevel alpha, const ThetaGrid& grid,
                                     const BootstrapConfig& config, Exec exec = Exec::Parallel);

}  // namespace fcmp

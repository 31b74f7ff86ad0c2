#include "fcmp/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fcmp/error.hpp"
#include "fcmp/kernels.hpp"

namespace fcmp {

void BootstrapConfig::validate() const {
  require(M >= 1, ErrorKind::InvalidArgument, "bootstrap: M must be at least 1");
  if (p) require(*p > 0.0 && *p <= 1.0, ErrorKind::InvalidArgument, "bootstrap: p must lie in (0,1]");
  for (double g : levels)
    require(g > 0.0 && g < 1.0, ErrorKind::InvalidArgument, "bootstrap: levels must lie in (0,1)");
}

double BootstrapConfig::resolve_p(std::size_t T) const {
  if (p) return *p;
  return std::min(1.0, std::pow(static_cast<double>(T), -1.0 / 3.0));
}

std::vector<std::size_t> stationary_resample_indices(std::size_t T, double p, Rng& rng) {
  require(T >= 1, ErrorKind::InvalidArgument, "resample: T must be at least 1");
  require(p > 0.0 && p <= 1.0, ErrorKind::InvalidArgument, "resample: p must lie in (0,1]");
  std::vector<std::size_t> idx;
  idx.reserve(T);
  while (idx.size() < T) {
    std::size_t start = static_cast<std::size_t>(rng.below(T));
    const std::uint64_t len = rng.geometric(p);
    const std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(len, T - idx.size()));
    for (std::size_t i = 0; i < take; ++i) {
      idx.push_back(start);
      if (++start == T) start = 0;
    }
  }
  return idx;
}

double empirical_quantile(const std::vector<double>& sorted, double q) {
  require(!sorted.empty(), ErrorKind::EmptyInput, "quantile of an empty distribution");
  require(q > 0.0 && q < 1.0, ErrorKind::InvalidArgument, "quantile level must lie in (0,1)");
  const double x = q * static_cast<double>(sorted.size());
  const double r = std::round(x);
  // q * M that should be an integer can land a few ulps above it.
  double k = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
  k = std::clamp(k, 1.0, static_cast<double>(sorted.size()));
  return sorted[static_cast<std::size_t>(k) - 1];
}

double empirical_quantile(const BootstrapDistribution& dist, double q) {
  return empirical_quantile(dist.sorted, q);
}

BootstrapOutcome run_recentered_bootstrap(const ForecastPanel& panel,
                                          const std::vector<PanelSlice>& pairs, Functional kind,
                                          FunctionalLevel alpha, const ThetaGrid& grid,
                                          const BootstrapConfig& config, Exec exec) {
  config.validate();
  require(!pairs.empty(), ErrorKind::InvalidArgument, "bootstrap: no pairs");
  for (const auto& pr : pairs) pr.validate(panel);
  const std::size_t T = panel.size();
  const std::size_t G = grid.size();
  const double p = config.resolve_p(T);
  const double root_t = std::sqrt(static_cast<double>(T));

  kernels::CurveEvaluator ev(panel, kind, alpha, grid.points);
  std::vector<std::size_t> used;
  for (const auto& pr : pairs) {
    for (std::size_t k : {pr.benchmark, pr.competitor})
      if (std::find(used.begin(), used.end(), k) == used.end()) used.push_back(k);
  }
  std::vector<std::vector<double>> full(panel.series_count());
  {
    kernels::Workspace ws;
    for (std::size_t k : used) {
      full[k].resize(G);
      ev.mean_curve(k, full[k], ws);
    }
  }
  std::vector<std::vector<double>> dhat(pairs.size(), std::vector<double>(G));
  double stat = -std::numeric_limits<double>::infinity();
  std::size_t best_pair = 0, best_j = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = 0; j < G; ++j) {
      dhat[i][j] = full[pairs[i].benchmark][j] - full[pairs[i].competitor][j];
      const double v = root_t * dhat[i][j];
      if (v > stat) {
        stat = v;
        best_pair = i;
        best_j = j;
      }
    }
  }

  std::vector<double> stars(config.M);
  const auto M = static_cast<std::ptrdiff_t>(config.M);
#pragma omp parallel if (exec == Exec::Parallel)
  {
    kernels::Workspace ws;
    std::vector<std::vector<double>> cur(panel.series_count());
    for (std::size_t k : used) cur[k].resize(G);
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t b = 0; b < M; ++b) {
      Rng rng(config.seed, {static_cast<std::uint64_t>(b)});
      const auto idx = stationary_resample_indices(T, p, rng);
      const auto counts = kernels::index_counts(idx, T);
      for (std::size_t k : used) ev.mean_curve(k, counts, cur[k], ws);
      double s = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& ck = cur[pairs[i].benchmark];
        const auto& cl = cur[pairs[i].competitor];
        const auto& d = dhat[i];
        for (std::size_t j = 0; j < G; ++j) s = std::max(s, root_t * ((ck[j] - cl[j]) - d[j]));
      }
      stars[static_cast<std::size_t>(b)] = s;
    }
  }
  std::sort(stars.begin(), stars.end());

  BootstrapOutcome out;
  TestReport& r = out.report;
  r.statistic = stat;
  r.argmax_theta = grid.points[best_j];
  r.argmax_benchmark = panel.name(pairs[best_pair].benchmark);
  r.argmax_competitor = panel.name(pairs[best_pair].competitor);
  for (const auto& pr : pairs) r.pairs.emplace_back(panel.name(pr.benchmark), panel.name(pr.competitor));
  const auto ge = static_cast<std::size_t>(stars.end() - std::lower_bound(stars.begin(), stars.end(), stat));
  r.p_value = static_cast<double>(ge) / static_cast<double>(config.M);
  for (double g : config.levels) {
    const double h = empirical_quantile(stars, 1.0 - g);
    r.critical_values[g] = h;
    // A zero statistic carries no evidence against the null even when the
    // bootstrap distribution is degenerate at zero.
    r.reject[g] = stat >= h && stat > 0.0;
  }
  r.bootstrap_m = config.M;
  r.block_p = p;
  r.seed = config.seed;
  r.kind = to_string(kind);
  r.alpha = alpha.value();
  r.sample_size = T;
  r.grid_size = G;
  r.grid = grid.describe();
  out.distribution.sorted = std::move(stars);
  out.distribution.observed = stat;
  return out;
}

TestReport recentered_bootstrap_test(const ForecastPanel& panel, const std::vector<PanelSlice>& pairs,
                                     Functional kind, FunctionalLevel alpha, const ThetaGrid& grid,
                                     const BootstrapConfig& config, Exec exec) {
  return run_recentered_bootstrap(panel, pairs, kind, alpha, grid, config, exec).report;
}

}  // namespace fcmp

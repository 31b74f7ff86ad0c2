#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fcmp/loss.hpp"
#include "fcmp/optim.hpp"

namespace fcmp {

// ---- sample functionals ----

// Smallest order statistic whose empirical CDF reaches alpha.
double sample_quantile(std::vector<double> xs, double alpha);
// Root t of (1 - alpha) mean((t - x)+) = alpha mean((x - t)+), by bisection on [min, max].
double sample_expectile(const std::vector<double>& xs, double alpha);

// ---- CAViaR ----

enum class CaviarKind { Symmetric, Asymmetric };

struct CaviarParams {
  CaviarKind kind = CaviarKind::Symmetric;
  double a = 0.0;
  double b = 0.0;
  double c1 = 0.0;  // coefficient on |R| (symmetric) or on |R| when R > 0
  double c2 = 0.0;  // coefficient on |R| when R <= 0 (asymmetric only)

  static CaviarParams symmetric(double a, double b, double c);
  static CaviarParams asymmetric(double a, double b, double c1, double c2);
  std::vector<double> to_vector() const;
  static CaviarParams from_vector(CaviarKind kind, const std::vector<double>& v);
  bool operator==(const CaviarParams&) const = default;
};

// out[t] = a + b * VaR_t + c |R_t| with VaR_0 = var_init and VaR_{t+1} = out[t].
std::vector<double> caviar_path(const CaviarParams& params, const std::vector<double>& returns,
                                double var_init);

// Mean tick loss pairing VaR_t with R_t, where VaR_0 = var_init.
double tick_loss_objective(const CaviarParams& params, const std::vector<double>& returns,
                           FunctionalLevel alpha, double var_init);

double tick_loss(FunctionalLevel alpha, double var, double r);

struct CaviarFitConfig {
  std::size_t candidates = 1000;
  std::size_t refine = 5;
  std::uint64_t seed = 0;
  NelderMeadConfig nm{1000, 1e-8, 0.1, 1.0, 2.0, 0.5, 0.5, 0};
  // Rolling backtests run the full multi-start on every refit_every-th window
  // and warm-start the simplex from the previous window otherwise; 1 refits
  // every window from scratch.
  std::size_t refit_every = 25;
};

struct CaviarFit {
  CaviarParams params;
  double objective;
  double var_init;
};

CaviarFit estimate_caviar(const std::vector<double>& returns, FunctionalLevel alpha, CaviarKind kind,
                          const CaviarFitConfig& config = {});

// ---- rolling backtest ----

// Single simplex run from given parameters, with var_init the sample quantile.
CaviarFit refine_caviar(const std::vector<double>& returns, FunctionalLevel alpha, const CaviarParams& start,
                        const NelderMeadConfig& nm);

enum class VarMethod { SampleQuantile, NormalFit, CaviarSy, CaviarAsy };

const char* to_string(VarMethod m);
VarMethod parse_var_method(const std::string& text);

struct BacktestReport {
  std::string method;
  double alpha = 0.05;
  std::size_t window = 0;
  std::vector<double> var_series;
  double hit_proportion = 0.0;
  double avg_tick_loss = 0.0;
  double mean = 0.0;
  double stdev = 0.0;
  double min = 0.0;
  double max = 0.0;

  bool operator==(const BacktestReport&) const = default;
};

// For each t >= window, fit on returns[t - window, t) and forecast VaR for t.
BacktestReport rolling_var_backtest(const std::vector<double>& returns, VarMethod method,
                                    FunctionalLevel alpha, std::size_t window,
                                    const CaviarFitConfig& config = {});

// ---- regression and volatility ----

// Least squares of y on [1, columns...]; intercept first.
std::vector<double> ols_fit(const std::vector<std::vector<double>>& columns, const std::vector<double>& y);

struct GarchFit {
  double omega = 0.0;
  std::vector<double> beta;   // lagged variances, p terms
  std::vector<double> arch;   // lagged squared shocks, q terms
  double next_variance = 0.0;
  double neg_loglik = 0.0;
};

// Gaussian quasi-likelihood GARCH(p, q) by Nelder-Mead over transformed
// parameters that keep omega > 0, coefficients >= 0 and their sum < 1.
GarchFit garch_fit(const std::vector<double>& v, std::size_t p, std::size_t q,
                   const std::optional<GarchFit>& warm_start = std::nullopt,
                   const NelderMeadConfig& config = {3000, 1e-9, 0.5, 1.0, 2.0, 0.5, 0.5, 1});

// GARCH(1,1) on at least 200 observations.
GarchFit garch11_fit(const std::vector<double>& returns);

// One-step variance forecast for v under the given coefficients.
double garch_variance_forecast(const GarchFit& fit, const std::vector<double>& v);

}  // namespace fcmp

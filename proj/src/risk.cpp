#include "fcmp/risk.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include "fcmp/error.hpp"
#include "fcmp/normal.hpp"
#include "fcmp/rng.hpp"

namespace fcmp {

double sample_quantile(std::vector<double> xs, double alpha) {
  require(!xs.empty(), ErrorKind::EmptyInput, "sample quantile of an empty sample");
  require(alpha > 0.0 && alpha < 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
  const double x = alpha * static_cast<double>(xs.size());
  const double r = std::round(x);
  double k = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
  k = std::clamp(k, 1.0, static_cast<double>(xs.size()));
  const auto idx = static_cast<std::size_t>(k) - 1;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(idx), xs.end());
  return xs[idx];
}

double sample_expectile(const std::vector<double>& xs, double alpha) {
  require(!xs.empty(), ErrorKind::EmptyInput, "sample expectile of an empty sample");
  require(alpha > 0.0 && alpha < 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
  auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  double lo = *mn, hi = *mx;
  // g is increasing in t: negative at min, positive at max.
  auto g = [&](double t) {
    double below = 0.0, above = 0.0;
    for (double x : xs) {
      if (x < t) below += t - x;
      else above += x - t;
    }
    return (1.0 - alpha) * below - alpha * above;
  };
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

CaviarParams CaviarParams::symmetric(double a, double b, double c) {
  return CaviarParams{CaviarKind::Symmetric, a, b, c, c};
}

CaviarParams CaviarParams::asymmetric(double a, double b, double c1, double c2) {
  return CaviarParams{CaviarKind::Asymmetric, a, b, c1, c2};
}

std::vector<double> CaviarParams::to_vector() const {
  if (kind == CaviarKind::Symmetric) return {a, b, c1};
  return {a, b, c1, c2};
}

CaviarParams CaviarParams::from_vector(CaviarKind kind, const std::vector<double>& v) {
  if (kind == CaviarKind::Symmetric) {
    require(v.size() == 3, ErrorKind::InvalidArgument, "symmetric CAViaR needs 3 parameters");
    return symmetric(v[0], v[1], v[2]);
  }
  require(v.size() == 4, ErrorKind::InvalidArgument, "asymmetric CAViaR needs 4 parameters");
  return asymmetric(v[0], v[1], v[2], v[3]);
}

namespace {

// Recursion without throwing; returns the first non-finite step or npos.
std::size_t caviar_fill(const CaviarParams& p, const std::vector<double>& r, double var_init,
                        std::vector<double>& out) {
  out.resize(r.size());
  double v = var_init;
  const double c2 = p.kind == CaviarKind::Symmetric ? p.c1 : p.c2;
  for (std::size_t t = 0; t < r.size(); ++t) {
    const double c = r[t] > 0.0 ? p.c1 : c2;
    v = p.a + p.b * v + c * std::abs(r[t]);
    if (!std::isfinite(v)) return t;
    out[t] = v;
  }
  return std::string::npos;
}

// Returns split by sign so the recursion runs without data-dependent branches.
struct SplitReturns {
  std::vector<double> r, up, down;  // up = |r| if r > 0, down = |r| otherwise
  explicit SplitReturns(const std::vector<double>& x) : r(x), up(x.size()), down(x.size()) {
    for (std::size_t t = 0; t < x.size(); ++t) {
      up[t] = x[t] > 0.0 ? x[t] : 0.0;
      down[t] = x[t] > 0.0 ? 0.0 : -x[t];
    }
  }
};

// Objective used inside the optimizer: +inf on overflow instead of an exception.
// Tick loss is written as (v - r)+ - alpha (v - r); a non-finite step poisons
// both sums, so one check at the end suffices.
double tick_objective_unchecked(const CaviarParams& p, const SplitReturns& s, double alpha, double var_init) {
  double v = var_init;
  double hinge = 0.0, lin = 0.0;
  const double c2 = p.kind == CaviarKind::Symmetric ? p.c1 : p.c2;
  const std::size_t n = s.r.size();
  for (std::size_t t = 0; t < n; ++t) {
    const double d = v - s.r[t];
    hinge += d > 0.0 ? d : (d == d ? 0.0 : d);
    lin += d;
    v = p.a + p.b * v + p.c1 * s.up[t] + c2 * s.down[t];
  }
  const double m = (hinge - alpha * lin) / static_cast<double>(n);
  return std::isfinite(m) && std::isfinite(v) ? m : std::numeric_limits<double>::infinity();
}

}  // namespace

std::vector<double> caviar_path(const CaviarParams& params, const std::vector<double>& returns,
                                double var_init) {
  require(!returns.empty(), ErrorKind::EmptyInput, "caviar: empty return series");
  require(std::isfinite(var_init), ErrorKind::InvalidArgument, "caviar: var_init must be finite");
  std::vector<double> out;
  const std::size_t bad = caviar_fill(params, returns, var_init, out);
  if (bad != std::string::npos)
    fail(ErrorKind::Overflow, "caviar: recursion left the finite range at step " + std::to_string(bad + 1));
  return out;
}

double tick_loss(FunctionalLevel alpha, double var, double r) {
  return ((r < var ? 1.0 : 0.0) - alpha.value()) * (var - r);
}

double tick_loss_objective(const CaviarParams& params, const std::vector<double>& returns,
                           FunctionalLevel alpha, double var_init) {
  const auto path = caviar_path(params, returns, var_init);
  double acc = tick_loss(alpha, var_init, returns[0]);
  for (std::size_t t = 1; t < returns.size(); ++t) acc += tick_loss(alpha, path[t - 1], returns[t]);
  return acc / static_cast<double>(returns.size());
}

CaviarFit estimate_caviar(const std::vector<double>& returns, FunctionalLevel alpha, CaviarKind kind,
                          const CaviarFitConfig& config) {
  require(returns.size() >= 100, ErrorKind::Precondition, "caviar: need at least 100 returns");
  require(config.candidates >= 1 && config.refine >= 1, ErrorKind::InvalidArgument,
          "caviar: need at least one candidate and one refinement");
  const double a = alpha.value();
  const double var_init = sample_quantile(returns, a);
  const std::size_t dim = kind == CaviarKind::Symmetric ? 3 : 4;
  const double scale = std::max(std::abs(var_init), 1e-8);

  const SplitReturns split(returns);
  Rng rng(config.seed, {0x636176ULL});
  std::vector<std::pair<double, std::vector<double>>> cand;
  cand.reserve(config.candidates);
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < config.candidates; ++i) {
    for (std::size_t d = 0; d < dim; ++d) v[d] = rng.uniform(-1.0, 1.0);
    v[0] *= scale;
    const double f = tick_objective_unchecked(CaviarParams::from_vector(kind, v), split, a, var_init);
    cand.emplace_back(f, v);
  }
  const std::size_t keep = std::min(config.refine, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end(),
                    [](const auto& x, const auto& y) { return x.first < y.first; });

  auto objective = [&](const std::vector<double>& x) {
    return tick_objective_unchecked(CaviarParams::from_vector(kind, x), split, a, var_init);
  };
  CaviarFit best{CaviarParams::from_vector(kind, cand[0].second), cand[0].first, var_init};
  for (std::size_t i = 0; i < keep; ++i) {
    if (!std::isfinite(cand[i].first)) continue;
    const auto res = nelder_mead(objective, cand[i].second, config.nm);
    if (res.value < best.objective) best = CaviarFit{CaviarParams::from_vector(kind, res.argmin), res.value, var_init};
  }
  if (!std::isfinite(best.objective)) fail(ErrorKind::Optimization, "caviar: no finite starting candidate");
  return best;
}

CaviarFit refine_caviar(const std::vector<double>& returns, FunctionalLevel alpha, const CaviarParams& start,
                        const NelderMeadConfig& nm) {
  require(returns.size() >= 100, ErrorKind::Precondition, "caviar: need at least 100 returns");
  const double a = alpha.value();
  const double var_init = sample_quantile(returns, a);
  const SplitReturns split(returns);
  auto objective = [&](const std::vector<double>& x) {
    return tick_objective_unchecked(CaviarParams::from_vector(start.kind, x), split, a, var_init);
  };
  const auto x0 = start.to_vector();
  const double f0 = objective(x0);
  if (!std::isfinite(f0)) fail(ErrorKind::Optimization, "caviar: starting parameters overflow");
  const auto res = nelder_mead(objective, x0, nm);
  return CaviarFit{CaviarParams::from_vector(start.kind, res.argmin), res.value, var_init};
}

const char* to_string(VarMethod m) {
  switch (m) {
    case VarMethod::SampleQuantile: return "sample-quantile";
    case VarMethod::NormalFit: return "normal";
    case VarMethod::CaviarSy: return "caviar-sy";
    case VarMethod::CaviarAsy: return "caviar-asy";
  }
  return "";
}

VarMethod parse_var_method(const std::string& text) {
  for (VarMethod m : {VarMethod::SampleQuantile, VarMethod::NormalFit, VarMethod::CaviarSy, VarMethod::CaviarAsy})
    if (text == to_string(m)) return m;
  fail(ErrorKind::InvalidArgument,
       "method must be one of sample-quantile, normal, caviar-sy, caviar-asy; got '" + text + "'");
}

BacktestReport rolling_var_backtest(const std::vector<double>& returns, VarMethod method,
                                    FunctionalLevel alpha, std::size_t window,
                                    const CaviarFitConfig& config) {
  require(window >= 10, ErrorKind::InvalidArgument, "backtest: window must be at least 10");
  require(returns.size() > window, ErrorKind::Precondition, "backtest: need more returns than the window length");
  for (double r : returns) require(std::isfinite(r), ErrorKind::InvalidArgument, "backtest: non-finite return");
  if (method == VarMethod::CaviarSy || method == VarMethod::CaviarAsy)
    require(window >= 100, ErrorKind::Precondition, "backtest: CAViaR needs a window of at least 100");
  const double a = alpha.value();
  const std::size_t n = returns.size() - window;
  std::vector<double> var(n);
  const double z = norm_quantile(a);

  const bool caviar = method == VarMethod::CaviarSy || method == VarMethod::CaviarAsy;
  const auto kind = method == VarMethod::CaviarSy ? CaviarKind::Symmetric : CaviarKind::Asymmetric;
  // Windows are processed in fixed chunks. A CAViaR chunk starts with the full
  // multi-start fit and warm-starts the simplex from the previous window after
  // that, so the output does not depend on the thread count.
  const std::size_t chunk = caviar && config.refit_every > 0 ? config.refit_every : 1;
  const auto chunks = static_cast<std::ptrdiff_t>((n + chunk - 1) / chunk);

  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    try {
      std::optional<CaviarParams> previous;
      const std::size_t first = static_cast<std::size_t>(c) * chunk;
      for (std::size_t i = first; i < std::min(n, first + chunk); ++i) {
        const std::size_t t = window + i;
        const std::vector<double> w(returns.begin() + static_cast<std::ptrdiff_t>(t - window),
                                    returns.begin() + static_cast<std::ptrdiff_t>(t));
        double v = 0.0;
        switch (method) {
          case VarMethod::SampleQuantile:
            v = sample_quantile(w, a);
            break;
          case VarMethod::NormalFit: {
            const double m = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(window);
            double ss = 0.0;
            for (double x : w) ss += (x - m) * (x - m);
            v = m + std::sqrt(ss / static_cast<double>(window - 1)) * z;
            break;
          }
          case VarMethod::CaviarSy:
          case VarMethod::CaviarAsy: {
            CaviarFit fit;
            if (previous) {
              fit = refine_caviar(w, alpha, *previous, config.nm);
            } else {
              CaviarFitConfig cfg = config;
              cfg.seed = stream_seed(config.seed, {static_cast<std::uint64_t>(t)});
              fit = estimate_caviar(w, alpha, kind, cfg);
            }
            previous = fit.params;
            std::vector<double> path;
            const std::size_t bad = caviar_fill(fit.params, w, fit.var_init, path);
            v = bad == std::string::npos ? path.back() : fit.var_init;
            break;
          }
        }
        var[i] = v;
      }
    } catch (...) {
#pragma omp critical(fcmp_backtest_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  BacktestReport r;
  r.method = to_string(method);
  r.alpha = a;
  r.window = window;
  std::size_t hits = 0;
  double tl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ret = returns[window + i];
    if (ret <= var[i]) ++hits;
    tl += tick_loss(alpha, var[i], ret);
  }
  r.hit_proportion = static_cast<double>(hits) / static_cast<double>(n);
  r.avg_tick_loss = tl / static_cast<double>(n);
  r.mean = std::accumulate(var.begin(), var.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : var) ss += (v - r.mean) * (v - r.mean);
  r.stdev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  const auto [mn, mx] = std::minmax_element(var.begin(), var.end());
  r.min = *mn;
  r.max = *mx;
  r.var_series = std::move(var);
  return r;
}

std::vector<double> ols_fit(const std::vector<std::vector<double>>& columns, const std::vector<double>& y) {
  const std::size_t n = y.size();
  const std::size_t p = columns.size() + 1;
  for (const auto& c : columns)
    require(c.size() == n, ErrorKind::InvalidArgument, "ols: column length differs from response");
  require(n >= p, ErrorKind::Precondition, "ols: need at least as many rows as columns");
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    for (std::size_t j = 1; j < p; ++j) X(i, j) = columns[j - 1][i];
    Y(i) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(qr.rank()) < p) fail(ErrorKind::Singular, "ols: design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(Y);
  return std::vector<double>(beta.data(), beta.data() + p);
}

namespace {

struct GarchShape {
  std::size_t p, q;
};

void unpack(const std::vector<double>& u, GarchShape s, GarchFit& g) {
  g.omega = std::exp(u[0]);
  double denom = 1.0;
  for (std::size_t i = 1; i < u.size(); ++i) denom += std::exp(u[i]);
  g.beta.assign(s.p, 0.0);
  g.arch.assign(s.q, 0.0);
  for (std::size_t i = 0; i < s.p; ++i) g.beta[i] = std::exp(u[1 + i]) / denom;
  for (std::size_t j = 0; j < s.q; ++j) g.arch[j] = std::exp(u[1 + s.p + j]) / denom;
}

std::vector<double> pack(const GarchFit& g) {
  std::vector<double> u{std::log(g.omega)};
  double sum = 0.0;
  for (double b : g.beta) sum += b;
  for (double c : g.arch) sum += c;
  const double rest = std::max(1.0 - sum, 1e-6);
  for (double b : g.beta) u.push_back(std::log(std::max(b, 1e-8) / rest));
  for (double c : g.arch) u.push_back(std::log(std::max(c, 1e-8) / rest));
  return u;
}

// Negative Gaussian log likelihood (up to constants); fills the one-step forecast.
double garch_nll(const GarchFit& g, const std::vector<double>& v, double init, double* next) {
  const std::size_t n = v.size();
  const std::size_t p = g.beta.size(), q = g.arch.size();
  std::vector<double> s2(n + 1);
  double nll = 0.0;
  for (std::size_t t = 0; t <= n; ++t) {
    double s = g.omega;
    for (std::size_t i = 1; i <= p; ++i) s += g.beta[i - 1] * (t >= i ? s2[t - i] : init);
    for (std::size_t j = 1; j <= q; ++j) s += g.arch[j - 1] * (t >= j ? v[t - j] * v[t - j] : init);
    s2[t] = s;
    if (t < n) {
      if (!(s > 0.0) || !std::isfinite(s)) return std::numeric_limits<double>::infinity();
      nll += 0.5 * (std::log(s) + v[t] * v[t] / s);
    }
  }
  if (next) *next = s2[n];
  return nll;
}

double sample_variance(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size());
}

}  // namespace

double garch_variance_forecast(const GarchFit& fit, const std::vector<double>& v) {
  require(!v.empty(), ErrorKind::EmptyInput, "garch: empty series");
  double next = 0.0;
  garch_nll(fit, v, sample_variance(v), &next);
  return next;
}

GarchFit garch_fit(const std::vector<double>& v, std::size_t p, std::size_t q,
                   const std::optional<GarchFit>& warm_start, const NelderMeadConfig& config) {
  require(p + q >= 1, ErrorKind::InvalidArgument, "garch: need at least one lag term");
  require(v.size() >= 10 * (1 + p + q), ErrorKind::Precondition, "garch: series too short for the model order");
  for (double x : v) require(std::isfinite(x), ErrorKind::InvalidArgument, "garch: non-finite observation");
  const double init = sample_variance(v);
  require(init > 0.0, ErrorKind::Degenerate, "garch: series has zero variance");
  const GarchShape shape{p, q};

  GarchFit start;
  if (warm_start && warm_start->beta.size() == p && warm_start->arch.size() == q && warm_start->omega > 0.0) {
    start = *warm_start;
  } else {
    start.beta.assign(p, p > 0 ? 0.7 / static_cast<double>(p) : 0.0);
    start.arch.assign(q, q > 0 ? 0.2 / static_cast<double>(q) : 0.0);
    double persistence = 0.0;
    for (double b : start.beta) persistence += b;
    for (double c : start.arch) persistence += c;
    start.omega = init * (1.0 - persistence);
  }

  auto objective = [&](const std::vector<double>& u) {
    GarchFit g;
    unpack(u, shape, g);
    return garch_nll(g, v, init, nullptr);
  };
  const auto res = nelder_mead(objective, pack(start), config);
  GarchFit out;
  unpack(res.argmin, shape, out);
  out.neg_loglik = garch_nll(out, v, init, &out.next_variance);
  return out;
}

GarchFit garch11_fit(const std::vector<double>& returns) {
  require(returns.size() >= 200, ErrorKind::Precondition, "garch11_fit: need at least 200 observations");
  return garch_fit(returns, 1, 1);
}

}  // namespace fcmp

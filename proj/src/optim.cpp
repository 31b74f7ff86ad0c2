#include "fcmp/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fcmp/error.hpp"

namespace fcmp {

void NelderMeadConfig::validate() const {
  require(max_iterations >= 1, ErrorKind::InvalidArgument, "nelder-mead: max_iterations must be positive");
  require(tolerance >= 0.0, ErrorKind::InvalidArgument, "nelder-mead: tolerance must be nonnegative");
  require(initial_step > 0.0, ErrorKind::InvalidArgument, "nelder-mead: initial_step must be positive");
  require(reflection > 0.0, ErrorKind::InvalidArgument, "nelder-mead: reflection must be positive");
  require(expansion > 1.0 && expansion > reflection, ErrorKind::InvalidArgument,
          "nelder-mead: expansion must exceed 1 and the reflection coefficient");
  require(contraction > 0.0 && contraction < 1.0, ErrorKind::InvalidArgument,
          "nelder-mead: contraction must lie in (0,1)");
  require(shrink > 0.0 && shrink < 1.0, ErrorKind::InvalidArgument, "nelder-mead: shrink must lie in (0,1)");
}

namespace {

double safe_eval(const Objective& f, const std::vector<double>& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

struct Run {
  std::vector<double> x;
  double f;
  std::size_t iterations;
};

Run simplex_run(const Objective& f, const std::vector<double>& x0, double f0,
                const NelderMeadConfig& c, std::size_t budget) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1, f0);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += c.initial_step * std::max(1.0, std::abs(x0[i]));
    fv[i + 1] = safe_eval(f, pts[i + 1]);
  }
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  std::size_t it = 0;
  for (; it < budget; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double xspread = 0.0;
    double fspread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d) xspread = std::max(xspread, std::abs(pts[i][d] - pts[best][d]));
      fspread = std::max(fspread, std::abs(fv[i] - fv[best]));
    }
    if (std::isfinite(fspread) && xspread <= c.tolerance && fspread <= c.tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d];
    for (double& v : centroid) v /= static_cast<double>(n);

    for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + c.reflection * (centroid[d] - pts[worst][d]);
    const double fr = safe_eval(f, xr);
    if (fr < fv[best]) {
      for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + c.expansion * (centroid[d] - pts[worst][d]);
      const double fe = safe_eval(f, xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    // Outside contraction when the reflection improved on the worst point, inside otherwise.
    const bool outside = fr < fv[worst];
    for (std::size_t d = 0; d < n; ++d) {
      xc[d] = outside ? centroid[d] + c.contraction * (xr[d] - centroid[d])
                      : centroid[d] + c.contraction * (pts[worst][d] - centroid[d]);
    }
    const double fc = safe_eval(f, xc);
    if (fc < (outside ? fr : fv[worst])) {
      pts[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d) pts[i][d] = pts[best][d] + c.shrink * (pts[i][d] - pts[best][d]);
      fv[i] = safe_eval(f, pts[i]);
    }
  }
  const auto b = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  return Run{pts[b], fv[b], it};
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadConfig& config) {
  config.validate();
  require(!x0.empty(), ErrorKind::InvalidArgument, "nelder-mead: empty starting point");
  const double f0 = safe_eval(f, x0);
  if (!std::isfinite(f0)) fail(ErrorKind::Optimization, "nelder-mead: objective is not finite at the starting point");
  NelderMeadResult res{x0, f0, 0};
  for (std::size_t r = 0; r <= config.restarts && res.iterations < config.max_iterations; ++r) {
    Run run = simplex_run(f, res.argmin, res.value, config, config.max_iterations - res.iterations);
    res.iterations += run.iterations;
    const bool improved = run.f < res.value;
    if (run.f <= res.value) {
      res.argmin = std::move(run.x);
      res.value = run.f;
    }
    if (r > 0 && !improved) break;
  }
  if (!std::isfinite(res.value)) fail(ErrorKind::Optimization, "nelder-mead: no finite objective value found");
  return res;
}

}  // namespace fcmp

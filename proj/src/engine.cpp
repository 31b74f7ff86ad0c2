#include "fcmp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fcmp/error.hpp"
#include "fcmp/kernels.hpp"
#include "fcmp/rng.hpp"

namespace fcmp {

GridSpec GridSpec::automatic(std::uint64_t seed) {
  GridSpec g;
  g.seed = seed;
  return g;
}

GridSpec GridSpec::all(bool augment) {
  GridSpec g;
  g.request = Request::AllSamplePoints;
  g.augment = augment;
  return g;
}

GridSpec GridSpec::subsample(std::size_t n, std::uint64_t seed, bool augment) {
  GridSpec g;
  g.request = Request::Subsample;
  g.n = n;
  g.seed = seed;
  g.augment = augment;
  return g;
}

GridSpec GridSpec::linspace(double lo, double hi, std::size_t n, bool augment) {
  GridSpec g;
  g.request = Request::Linspace;
  g.lo = lo;
  g.hi = hi;
  g.n = n;
  g.augment = augment;
  return g;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double to_real(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    fail(ErrorKind::InvalidArgument, "grid: bad number '" + s + "' for " + what);
  return v;
}

std::size_t to_count(const std::string& s) {
  const double v = to_real(s, "point count");
  if (v < 0 || v != std::floor(v)) fail(ErrorKind::InvalidArgument, "grid: bad point count '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text, std::uint64_t seed) {
  const auto parts = split(text, ':');
  if (parts.empty()) fail(ErrorKind::InvalidArgument, "grid: empty specification");
  if (parts[0] == "auto" && parts.size() == 1) return automatic(seed);
  if (parts[0] == "all" && parts.size() == 1) return all();
  if (parts[0] == "subsample" && parts.size() == 2) return subsample(to_count(parts[1]), seed);
  if (parts[0] == "linspace" && parts.size() == 4)
    return linspace(to_real(parts[1], "lo"), to_real(parts[2], "hi"), to_count(parts[3]));
  fail(ErrorKind::InvalidArgument,
       "grid: expected auto, all, subsample:N or linspace:lo:hi:N, got '" + text + "'");
}

std::string ThetaGrid::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (mode) {
    case GridMode::AllSamplePoints: os << "all"; break;
    case GridMode::Subsample: os << "subsample:" << n; break;
    case GridMode::Linspace: os << "linspace:" << lo << ":" << hi << ":" << n; break;
  }
  if (left_limit_augmented) os << "+left";
  return os.str();
}

double left_limit_point(double p) { return p - std::max(std::abs(p), 1.0) * 0x1.0p-40; }

ThetaGrid build_theta_grid(const ForecastPanel& panel, const std::vector<PanelSlice>& pairs,
                           const GridSpec& spec) {
  ThetaGrid g;
  g.left_limit_augmented = spec.augment;
  std::vector<double> base;

  if (spec.request == GridSpec::Request::Linspace) {
    require(spec.n >= 2, ErrorKind::InvalidArgument, "grid: linspace needs n >= 2");
    require(std::isfinite(spec.lo) && std::isfinite(spec.hi) && spec.lo < spec.hi,
            ErrorKind::InvalidArgument, "grid: linspace needs finite lo < hi");
    g.mode = GridMode::Linspace;
    g.n = spec.n;
    g.lo = spec.lo;
    g.hi = spec.hi;
    base.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i)
      base[i] = spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) / static_cast<double>(spec.n - 1);
    base.back() = spec.hi;
  } else {
    std::vector<bool> used(panel.series_count(), pairs.empty());
    for (const auto& p : pairs) {
      p.validate(panel);
      used[p.benchmark] = used[p.competitor] = true;
    }
    base = panel.realized();
    for (std::size_t k = 0; k < panel.series_count(); ++k)
      if (used[k]) base.insert(base.end(), panel.forecast(k).begin(), panel.forecast(k).end());
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());

    std::size_t n = 0;
    if (spec.request == GridSpec::Request::Subsample) {
      require(spec.n >= 2, ErrorKind::InvalidArgument, "grid: subsample needs n >= 2");
      require(spec.n <= base.size(), ErrorKind::InvalidArgument,
              "grid: subsample size " + std::to_string(spec.n) + " exceeds the " +
                  std::to_string(base.size()) + " distinct sample points");
      n = spec.n;
    } else if (spec.request == GridSpec::Request::Auto && base.size() > spec.max_points) {
      n = spec.max_points;
    }
    if (n > 0) {
      // Partial Fisher-Yates draw without replacement.
      Rng rng(spec.seed, {0x67726964ULL});
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(base.size() - i));
        std::swap(base[i], base[j]);
      }
      base.resize(n);
      std::sort(base.begin(), base.end());
      g.mode = GridMode::Subsample;
      g.n = n;
      g.seed = spec.seed;
    } else {
      g.mode = GridMode::AllSamplePoints;
      g.n = base.size();
    }
  }

  g.points = base;
  if (spec.augment) {
    g.points.reserve(2 * base.size());
    for (double p : base) g.points.push_back(left_limit_point(p));
    std::sort(g.points.begin(), g.points.end());
    g.points.erase(std::unique(g.points.begin(), g.points.end()), g.points.end());
  }
  return g;
}

DiffCurve loss_diff_curve(const ForecastPanel& panel, const PanelSlice& pair, Functional kind,
                          FunctionalLevel alpha, const ThetaGrid& grid) {
  pair.validate(panel);
  kernels::CurveEvaluator ev(panel, kind, alpha, grid.points);
  kernels::Workspace ws;
  std::vector<double> ck(grid.size()), cl(grid.size());
  ev.mean_curve(pair.benchmark, ck, ws);
  ev.mean_curve(pair.competitor, cl, ws);
  DiffCurve d{grid, std::vector<double>(grid.size()), pair, alpha.value(), kind};
  for (std::size_t j = 0; j < grid.size(); ++j) d.values[j] = ck[j] - cl[j];
  return d;
}

SupResult sup_statistic(const ForecastPanel& panel, const std::vector<PanelSlice>& pairs,
                        Functional kind, FunctionalLevel alpha, const ThetaGrid& grid) {
  require(!pairs.empty(), ErrorKind::InvalidArgument, "sup statistic needs at least one pair");
  for (const auto& p : pairs) p.validate(panel);
  kernels::CurveEvaluator ev(panel, kind, alpha, grid.points);
  kernels::Workspace ws;
  std::vector<std::vector<double>> curves(panel.series_count());
  auto curve = [&](std::size_t k) -> const std::vector<double>& {
    if (curves[k].empty()) {
      curves[k].resize(grid.size());
      ev.mean_curve(k, curves[k], ws);
    }
    return curves[k];
  };
  const double root_t = std::sqrt(static_cast<double>(panel.size()));
  SupResult best{-std::numeric_limits<double>::infinity(), pairs.front(), grid.points.front(), 0};
  for (const auto& p : pairs) {
    const auto& ck = curve(p.benchmark);
    const auto& cl = curve(p.competitor);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double v = root_t * (ck[j] - cl[j]);
      if (v > best.statistic) best = SupResult{v, p, grid.points[j], j};
    }
  }
  return best;
}

MurphyTable murphy_curve(const ForecastPanel& panel, Functional kind, FunctionalLevel alpha,
                         const ThetaGrid& grid) {
  require(panel.size() > 0, ErrorKind::EmptyInput, "murphy curve: empty panel");
  kernels::CurveEvaluator ev(panel, kind, alpha, grid.points);
  kernels::Workspace ws;
  MurphyTable m{grid.points, panel.names(), {}};
  m.mean_loss.assign(panel.series_count(), std::vector<double>(grid.size()));
  for (std::size_t k = 0; k < panel.series_count(); ++k) ev.mean_curve(k, m.mean_loss[k], ws);
  return m;
}

}  // namespace fcmp

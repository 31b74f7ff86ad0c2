#include "fcmp/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "fcmp/error.hpp"

namespace fcmp::kernels {

CurveEvaluator::CurveEvaluator(const ForecastPanel& panel, Functional kind, FunctionalLevel alpha,
                               std::vector<double> grid)
    : kind_(kind), alpha_(alpha.value()), rows_(panel.size()), grid_(std::move(grid)) {
  require(!grid_.empty(), ErrorKind::InvalidArgument, "theta grid is empty");
  require(std::is_sorted(grid_.begin(), grid_.end()), ErrorKind::InvalidArgument,
          "theta grid must be sorted");
  const auto& y = panel.realized();
  const double a = alpha_;
  series_.resize(panel.series_count());
  for (std::size_t k = 0; k < panel.series_count(); ++k) {
    const auto& x = panel.forecast(k);
    Series& s = series_[k];
    s.begin.resize(rows_);
    s.end.resize(rows_);
    if (kind_ == Functional::Expectile) {
      s.c0.resize(rows_);
      s.c1.resize(rows_);
    } else {
      s.up.resize(rows_);
    }
    for (std::size_t t = 0; t < rows_; ++t) {
      const double lo = std::min(x[t], y[t]);
      const double hi = std::max(x[t], y[t]);
      const auto b = std::lower_bound(grid_.begin(), grid_.end(), lo) - grid_.begin();
      const auto e = std::lower_bound(grid_.begin(), grid_.end(), hi) - grid_.begin();
      s.begin[t] = static_cast<std::uint32_t>(b);
      s.end[t] = static_cast<std::uint32_t>(x[t] == y[t] ? b : e);
      if (kind_ == Functional::Expectile) {
        if (x[t] < y[t]) {
          // weight alpha, value alpha * (y - theta)
          s.c0[t] = a * y[t];
          s.c1[t] = -a;
        } else {
          // weight 1 - alpha, value (1 - alpha) * (theta - y)
          s.c0[t] = -(1.0 - a) * y[t];
          s.c1[t] = 1.0 - a;
        }
      } else {
        s.up[t] = x[t] < y[t] ? 1 : 0;
      }
    }
  }
}

void CurveEvaluator::mean_curve(std::size_t k, std::span<double> out, Workspace& ws) const {
  require(out.size() == grid_.size(), ErrorKind::InvalidArgument, "output size mismatch");
  sweep(series_.at(k), nullptr, out, ws);
}

void CurveEvaluator::mean_curve(std::size_t k, std::span<const std::uint32_t> counts,
                                std::span<double> out, Workspace& ws) const {
  require(out.size() == grid_.size(), ErrorKind::InvalidArgument, "output size mismatch");
  require(counts.size() == rows_, ErrorKind::InvalidArgument, "counts size mismatch");
  sweep(series_.at(k), counts.data(), out, ws);
}

void CurveEvaluator::sweep(const Series& s, const std::uint32_t* counts, std::span<double> out,
                           Workspace& ws) const {
  const std::size_t G = grid_.size();
  const double inv_t = 1.0 / static_cast<double>(rows_);
  ws.dn_up.assign(G + 1, 0);
  ws.dn_down.assign(G + 1, 0);
  if (kind_ == Functional::Expectile) {
    ws.da.assign(G + 1, 0.0);
    ws.ds.assign(G + 1, 0.0);
  }
  for (std::size_t t = 0; t < rows_; ++t) {
    const std::uint32_t b = s.begin[t], e = s.end[t];
    if (b == e) continue;
    const std::int64_t n = counts ? counts[t] : 1;
    if (n == 0) continue;
    if (kind_ == Functional::Expectile) {
      const double w = static_cast<double>(n);
      ws.da[b] += w * s.c0[t];
      ws.da[e] -= w * s.c0[t];
      ws.ds[b] += w * s.c1[t];
      ws.ds[e] -= w * s.c1[t];
      ws.dn_up[b] += n;
      ws.dn_up[e] -= n;
    } else {
      auto& dn = s.up[t] ? ws.dn_up : ws.dn_down;
      dn[b] += n;
      dn[e] -= n;
    }
  }
  std::int64_t nu = 0, nd = 0;
  if (kind_ == Functional::Expectile) {
    double A = 0.0, S = 0.0;
    for (std::size_t j = 0; j < G; ++j) {
      A += ws.da[j];
      S += ws.ds[j];
      nu += ws.dn_up[j];
      // The running sums carry rounding residue once every row has left;
      // the active count tells when the curve is exactly zero.
      const double v = nu == 0 ? 0.0 : (A + S * grid_[j]) * inv_t;
      out[j] = v > 0.0 ? v : 0.0;
    }
  } else {
    const double wa = alpha_, wb = 1.0 - alpha_;
    for (std::size_t j = 0; j < G; ++j) {
      nu += ws.dn_up[j];
      nd += ws.dn_down[j];
      out[j] = (wa * static_cast<double>(nu) + wb * static_cast<double>(nd)) * inv_t;
    }
  }
}

std::vector<std::uint32_t> index_counts(std::span<const std::size_t> idx, std::size_t rows) {
  std::vector<std::uint32_t> c(rows, 0);
  for (std::size_t i : idx) ++c.at(i);
  return c;
}

std::vector<double> mean_curve_reference(Functional kind, FunctionalLevel alpha,
                                         std::span<const double> x, std::span<const double> y,
                                         std::span<const double> grid) {
  require(x.size() == y.size() && !x.empty(), ErrorKind::InvalidArgument, "series size mismatch");
  std::vector<double> out(grid.size());
  const double inv_t = 1.0 / static_cast<double>(x.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double acc = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) acc += extremal_loss(kind, grid[j], alpha, x[t], y[t]);
    out[j] = acc * inv_t;
  }
  return out;
}

std::vector<double> mean_curve_direct_omp(Functional kind, FunctionalLevel alpha,
                                          std::span<const double> x, std::span<const double> y,
                                          std::span<const double> grid) {
  require(x.size() == y.size() && !x.empty(), ErrorKind::InvalidArgument, "series size mismatch");
  for (std::size_t t = 0; t < x.size(); ++t)
    require(std::isfinite(x[t]) && std::isfinite(y[t]), ErrorKind::InvalidArgument,
            "non-finite panel value");
  std::vector<double> out(grid.size());
  const double inv_t = 1.0 / static_cast<double>(x.size());
  const auto G = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < G; ++j) {
    double acc = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) acc += extremal_loss(kind, grid[j], alpha, x[t], y[t]);
    out[j] = acc * inv_t;
  }
  return out;
}

}  // namespace fcmp::kernels

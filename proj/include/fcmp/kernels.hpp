#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fcmp/loss.hpp"
#include "fcmp/panel.hpp"

namespace fcmp::kernels {

// Every extremal loss is (intercept + slope * theta) for theta in [lo, hi) and
// zero elsewhere, where lo/hi are min/max of (x, y). Rows are reduced to grid
// index ranges once; a mean curve is then a difference-array sweep costing
// O(T + G) instead of O(T * G).
struct Workspace {
  std::vector<double> da, ds;
  std::vector<std::int64_t> dn_up, dn_down;
};

class CurveEvaluator {
 public:
  CurveEvaluator(const ForecastPanel& panel, Functional kind, FunctionalLevel alpha,
                 std::vector<double> grid);

  std::size_t rows() const { return rows_; }
  std::size_t series() const { return series_.size(); }
  const std::vector<double>& grid() const { return grid_; }

  // Mean extremal loss of series k at each grid point. With counts, row t
  // enters counts[t] times and the divisor stays the panel length.
  void mean_curve(std::size_t k, std::span<double> out, Workspace& ws) const;
  void mean_curve(std::size_t k, std::span<const std::uint32_t> counts, std::span<double> out,
                  Workspace& ws) const;

 private:
  struct Series {
    std::vector<std::uint32_t> begin, end;
    std::vector<double> c0, c1;  // intercept and slope (expectile)
    std::vector<std::uint8_t> up;  // x < y (quantile)
  };
  void sweep(const Series& s, const std::uint32_t* counts, std::span<double> out, Workspace& ws) const;

  Functional kind_;
  double alpha_;
  std::size_t rows_;
  std::vector<double> grid_;
  std::vector<Series> series_;
};

// Row multiplicities of a resample index vector.
std::vector<std::uint32_t> index_counts(std::span<const std::size_t> idx, std::size_t rows);

// Reference kernels: direct double loop over theta and t, summing sequentially in t.
std::vector<double> mean_curve_reference(Functional kind, FunctionalLevel alpha,
                                         std::span<const double> x, std::span<const double> y,
                                         std::span<const double> grid);
// Same loop with theta points split across OpenMP threads.
std::vector<double> mean_curve_direct_omp(Functional kind, FunctionalLevel alpha,
                                          std::span<const double> x, std::span<const double> y,
                                          std::span<const double> grid);

}  // namespace fcmp::kernels

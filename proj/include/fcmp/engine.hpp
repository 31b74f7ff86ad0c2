#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fcmp/loss.hpp"
#include "fcmp/panel.hpp"

namespace fcmp {

enum class GridMode { AllSamplePoints, Subsample, Linspace };

// How to build the theta grid. Auto resolves to AllSamplePoints, or to
// Subsample(max_points) when the panel has more distinct values than that.
struct GridSpec {
  enum class Request { Auto, AllSamplePoints, Subsample, Linspace };
  Request request = Request::Auto;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool augment = true;
  std::size_t max_points = 10000;

  static GridSpec automatic(std::uint64_t seed = 0);
  static GridSpec all(bool augment = true);
  static GridSpec subsample(std::size_t n, std::uint64_t seed, bool augment = true);
  static GridSpec linspace(double lo, double hi, std::size_t n, bool augment = false);
  // Parses "auto", "all", "subsample:N" or "linspace:lo:hi:N".
  static GridSpec parse(const std::string& text, std::uint64_t seed);
};

struct ThetaGrid {
  std::vector<double> points;
  GridMode mode = GridMode::AllSamplePoints;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool left_limit_augmented = false;

  std::size_t size() const { return points.size(); }
  std::string describe() const;
};

// Point just below p that stands in for the left limit at p.
double left_limit_point(double p);

ThetaGrid build_theta_grid(const ForecastPanel& panel, const std::vector<PanelSlice>& pairs,
                           const GridSpec& spec);

struct DiffCurve {
  ThetaGrid theta;
  std::vector<double> values;
  PanelSlice pair;
  double alpha;
  Functional kind;
};

DiffCurve loss_diff_curve(const ForecastPanel& panel, const PanelSlice& pair, Functional kind,
                          FunctionalLevel alpha, const ThetaGrid& grid);

struct SupResult {
  double statistic;
  PanelSlice pair;
  double theta;
  std::size_t theta_index;
};

// max over pairs and grid of sqrt(T) * D(theta); ties go to the first pair, then smallest theta.
SupResult sup_statistic(const ForecastPanel& panel, const std::vector<PanelSlice>& pairs,
                        Functional kind, FunctionalLevel alpha, const ThetaGrid& grid);

struct MurphyTable {
  std::vector<double> theta;
  std::vector<std::string> names;
  std::vector<std::vector<double>> mean_loss;  // [series][theta]
};

MurphyTable murphy_curve(const ForecastPanel& panel, Functional kind, FunctionalLevel alpha,
                         const ThetaGrid& grid);

}  // namespace fcmp

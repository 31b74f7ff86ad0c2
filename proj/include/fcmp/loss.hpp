#pragma once

#include <string>
#include <variant>
#include <vector>

namespace fcmp {

enum class Functional { Expectile, Quantile };

const char* to_string(Functional kind);
Functional parse_functional(const std::string& text);

class FunctionalLevel {
 public:
  explicit FunctionalLevel(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

namespace family {
struct SquaredError {};
struct ExponentialBregman { double a; };
struct HomogeneousBregman { double b; };
struct Qlike {};
struct HomogeneousPatton { double c; };
struct LogisticBregman {};
struct LinLin {};
struct ScaledLinLin {};
struct HomogeneousPower { double c; };
struct LogPower {};
struct ExtremalExpectile { double theta; };
struct ExtremalQuantile { double theta; };
}  // namespace family

using LossFamily = std::variant<family::SquaredError, family::ExponentialBregman,
                                family::HomogeneousBregman, family::Qlike,
                                family::HomogeneousPatton, family::LogisticBregman,
                                family::LinLin, family::ScaledLinLin, family::HomogeneousPower,
                                family::LogPower, family::ExtremalExpectile,
                                family::ExtremalQuantile>;

Functional functional_of(const LossFamily& f);
std::string family_name(const LossFamily& f);
bool is_extremal(const LossFamily& f);

class LossSpec {
 public:
  // Validates the family parameters. When `expected` is given, a family
  // tagged for the other functional is rejected.
  LossSpec(LossFamily family, FunctionalLevel alpha);
  LossSpec(LossFamily family, FunctionalLevel alpha, Functional expected);

  const LossFamily& family() const { return family_; }
  FunctionalLevel alpha() const { return alpha_; }
  Functional functional() const { return functional_of(family_); }

 private:
  LossFamily family_;
  FunctionalLevel alpha_;
};

double extremal_expectile_loss(double theta, FunctionalLevel alpha, double x, double y);
double extremal_quantile_loss(double theta, FunctionalLevel alpha, double x, double y);
double extremal_loss(Functional kind, double theta, FunctionalLevel alpha, double x, double y);

// Left limit in theta of the extremal losses (the losses are right-continuous).
double extremal_expectile_loss_left(double theta, FunctionalLevel alpha, double x, double y);
double extremal_quantile_loss_left(double theta, FunctionalLevel alpha, double x, double y);

double consistent_loss(const LossSpec& spec, double x, double y);

// Cumulative mixing function: H = phi' for expectile families, G = zeta for
// quantile families. Defined on the family domain.
double mixing_function(const LossFamily& f, FunctionalLevel alpha, double theta);

struct FixedWeight { double w; };
// Weight b * |x|^(b-1), depending on the forecast value.
struct ForecastPowerWeight { double b; };
using WeightRule = std::variant<FixedWeight, ForecastPowerWeight>;

struct PointMass {
  double location;
  WeightRule weight;
};

class MixtureSpec {
 public:
  MixtureSpec(LossFamily target, double lo, double hi, int node_count = 2001,
              std::vector<PointMass> point_masses = {});

  // Range [min - 1, max + 1] over the supplied sample values.
  static MixtureSpec auto_range(LossFamily target, const std::vector<double>& sample,
                                int node_count = 2001);

  const LossFamily& target() const { return target_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int node_count() const { return nodes_; }
  const std::vector<PointMass>& point_masses() const { return masses_; }

 private:
  LossFamily target_;
  double lo_;
  double hi_;
  int nodes_;
  std::vector<PointMass> masses_;
};

// Point mass at zero with weight b|x|^(b-1) for the homogeneous Bregman family,
// as written in the literature. Not part of the default mixture.
PointMass homogeneous_bregman_dirac(double b);

double mixture_loss(const MixtureSpec& mix, FunctionalLevel alpha, double x, double y);

}  // namespace fcmp

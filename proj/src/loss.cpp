#include "fcmp/loss.hpp"

#include <algorithm>
#include <cmath>

#include "fcmp/error.hpp"

namespace fcmp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, std::string(what) + " must be finite");
}

void check_inputs(double x, double y) {
  check_finite(x, "forecast");
  check_finite(y, "realization");
}

double pos(double v) { return v > 0.0 ? v : 0.0; }

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void domain_positive(const std::string& name, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    fail(ErrorKind::Domain, name + ": forecast and realization must be positive");
}

double expectile_weight(FunctionalLevel alpha, double x, double y) {
  return std::abs((y < x ? 1.0 : 0.0) - alpha.value());
}

double quantile_weight(FunctionalLevel alpha, double x, double y) {
  return (y < x ? 1.0 : 0.0) - alpha.value();
}

}  // namespace

const char* to_string(Functional kind) {
  return kind == Functional::Expectile ? "expectile" : "quantile";
}

Functional parse_functional(const std::string& text) {
  if (text == "expectile") return Functional::Expectile;
  if (text == "quantile") return Functional::Quantile;
  fail(ErrorKind::InvalidArgument, "kind must be 'expectile' or 'quantile', got '" + text + "'");
}

FunctionalLevel::FunctionalLevel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorKind::InvalidArgument, "alpha must lie in the open interval (0,1)");
}

Functional functional_of(const LossFamily& f) {
  return std::visit(
      overloaded{[](const family::LinLin&) { return Functional::Quantile; },
                 [](const family::ScaledLinLin&) { return Functional::Quantile; },
                 [](const family::HomogeneousPower&) { return Functional::Quantile; },
                 [](const family::LogPower&) { return Functional::Quantile; },
                 [](const family::ExtremalQuantile&) { return Functional::Quantile; },
                 [](const auto&) { return Functional::Expectile; }},
      f);
}

std::string family_name(const LossFamily& f) {
  return std::visit(
      overloaded{[](const family::SquaredError&) { return std::string("squared-error"); },
                 [](const family::ExponentialBregman&) { return std::string("exp-bregman"); },
                 [](const family::HomogeneousBregman&) { return std::string("hom-bregman"); },
                 [](const family::Qlike&) { return std::string("qlike"); },
                 [](const family::HomogeneousPatton&) { return std::string("patton"); },
                 [](const family::LogisticBregman&) { return std::string("logistic"); },
                 [](const family::LinLin&) { return std::string("linlin"); },
                 [](const family::ScaledLinLin&) { return std::string("scaled-linlin"); },
                 [](const family::HomogeneousPower&) { return std::string("power"); },
                 [](const family::LogPower&) { return std::string("log-power"); },
                 [](const family::ExtremalExpectile&) { return std::string("extremal-expectile"); },
                 [](const family::ExtremalQuantile&) { return std::string("extremal-quantile"); }},
      f);
}

bool is_extremal(const LossFamily& f) {
  return std::holds_alternative<family::ExtremalExpectile>(f) ||
         std::holds_alternative<family::ExtremalQuantile>(f);
}

LossSpec::LossSpec(LossFamily fam, FunctionalLevel alpha) : family_(std::move(fam)), alpha_(alpha) {
  std::visit(overloaded{[](const family::ExponentialBregman& p) {
                          require(std::isfinite(p.a) && p.a != 0.0, ErrorKind::InvalidArgument,
                                  "exp-bregman: a must be finite and nonzero");
                        },
                        [](const family::HomogeneousBregman& p) {
                          require(std::isfinite(p.b) && p.b > 1.0, ErrorKind::InvalidArgument,
                                  "hom-bregman: b must exceed 1");
                        },
                        [](const family::HomogeneousPatton& p) {
                          require(std::isfinite(p.c) && p.c != 0.0 && p.c != 1.0,
                                  ErrorKind::InvalidArgument, "patton: c must not be 0 or 1");
                        },
                        [](const family::HomogeneousPower& p) {
                          require(std::isfinite(p.c) && p.c != 0.0, ErrorKind::InvalidArgument,
                                  "power: c must be nonzero");
                        },
                        [](const family::ExtremalExpectile& p) { check_finite(p.theta, "theta"); },
                        [](const family::ExtremalQuantile& p) { check_finite(p.theta, "theta"); },
                        [](const auto&) {}},
             family_);
}

LossSpec::LossSpec(LossFamily fam, FunctionalLevel alpha, Functional expected)
    : LossSpec(std::move(fam), alpha) {
  if (functional() != expected)
    fail(ErrorKind::Spec, family_name(family_) + " is " + to_string(functional()) +
                              "-consistent, not " + to_string(expected) + "-consistent");
}

double extremal_expectile_loss(double theta, FunctionalLevel alpha, double x, double y) {
  check_finite(theta, "theta");
  check_inputs(x, y);
  // (y-t)+ - (x-t)+ - 1{t<x}(y-x), simplified so rounding cannot make it negative
  const double bracket = theta < x ? pos(theta - y) : pos(y - theta);
  return expectile_weight(alpha, x, y) * bracket;
}

double extremal_quantile_loss(double theta, FunctionalLevel alpha, double x, double y) {
  check_finite(theta, "theta");
  check_inputs(x, y);
  const double ind = (theta < x ? 1.0 : 0.0) - (theta < y ? 1.0 : 0.0);
  return quantile_weight(alpha, x, y) * ind;
}

double extremal_loss(Functional kind, double theta, FunctionalLevel alpha, double x, double y) {
  return kind == Functional::Expectile ? extremal_expectile_loss(theta, alpha, x, y)
                                       : extremal_quantile_loss(theta, alpha, x, y);
}

double extremal_expectile_loss_left(double theta, FunctionalLevel alpha, double x, double y) {
  check_inputs(x, y);
  const double bracket = theta <= x ? pos(theta - y) : pos(y - theta);
  return expectile_weight(alpha, x, y) * bracket;
}

double extremal_quantile_loss_left(double theta, FunctionalLevel alpha, double x, double y) {
  check_inputs(x, y);
  const double ind = (theta <= x ? 1.0 : 0.0) - (theta <= y ? 1.0 : 0.0);
  return quantile_weight(alpha, x, y) * ind;
}

double consistent_loss(const LossSpec& spec, double x, double y) {
  check_inputs(x, y);
  const FunctionalLevel alpha = spec.alpha();
  const double we = expectile_weight(alpha, x, y);
  const double wq = quantile_weight(alpha, x, y);
  const double out = std::visit(
      overloaded{
          [&](const family::SquaredError&) { return we * (x - y) * (x - y); },
          [&](const family::ExponentialBregman& p) {
            const double a = p.a;
            const double eax = std::exp(a * x);
            return we * ((std::exp(a * y) - eax) / (a * a) - eax * (y - x) / a);
          },
          [&](const family::HomogeneousBregman& p) {
            const double b = p.b;
            const double ax = std::abs(x);
            return we * (std::pow(std::abs(y), b) - std::pow(ax, b) -
                         b * sgn(x) * std::pow(ax, b - 1.0) * (y - x));
          },
          [&](const family::Qlike&) {
            domain_positive("qlike", x, y);
            const double r = y / x;
            return we * (r - std::log(r) - 1.0);
          },
          [&](const family::HomogeneousPatton& p) {
            domain_positive("patton", x, y);
            const double c = p.c;
            return we * ((std::pow(y, c) - std::pow(x, c)) / (c * c - c) -
                         std::pow(x, c - 1.0) * (y - x) / (c - 1.0));
          },
          [&](const family::LogisticBregman&) {
            if (!(x >= 0.0 && x <= 1.0) || !(y == 0.0 || y == 1.0))
              fail(ErrorKind::Domain, "logistic: forecast must lie in [0,1], realization in {0,1}");
            if (x == y) return 0.0;
            const double v = y == 1.0 ? -std::log(x) : -std::log1p(-x);
            if (!std::isfinite(v)) fail(ErrorKind::Domain, "logistic: loss is infinite at this forecast");
            return we * v;
          },
          [&](const family::LinLin&) { return wq * (x - y); },
          [&](const family::ScaledLinLin&) { return wq * (x - y) / alpha.value(); },
          [&](const family::HomogeneousPower& p) {
            domain_positive("power", x, y);
            return wq * (std::pow(x, p.c) - std::pow(y, p.c)) / p.c;
          },
          [&](const family::LogPower&) {
            domain_positive("log-power", x, y);
            return wq * (std::log(x) - std::log(y));
          },
          [&](const family::ExtremalExpectile& p) {
            return extremal_expectile_loss(p.theta, alpha, x, y);
          },
          [&](const family::ExtremalQuantile& p) {
            return extremal_quantile_loss(p.theta, alpha, x, y);
          }},
      spec.family());
  if (!std::isfinite(out)) fail(ErrorKind::Domain, family_name(spec.family()) + ": non-finite loss");
  // Rounding in the Bregman forms can leave a tiny negative residue.
  return out < 0.0 ? 0.0 : out;
}

double mixing_function(const LossFamily& f, FunctionalLevel alpha, double theta) {
  auto need_positive = [&](const char* name) {
    if (!(theta > 0.0))
      fail(ErrorKind::Domain, std::string(name) + ": mixing function needs theta > 0");
  };
  return std::visit(
      overloaded{[&](const family::SquaredError&) { return 2.0 * theta; },
                 [&](const family::ExponentialBregman& p) { return std::exp(p.a * theta) / p.a; },
                 [&](const family::HomogeneousBregman& p) {
                   return p.b * sgn(theta) * std::pow(std::abs(theta), p.b - 1.0);
                 },
                 [&](const family::Qlike&) {
                   need_positive("qlike");
                   return -1.0 / theta;
                 },
                 [&](const family::HomogeneousPatton& p) {
                   need_positive("patton");
                   return std::pow(theta, p.c - 1.0) / (p.c - 1.0);
                 },
                 [&](const family::LogisticBregman&) -> double {
                   fail(ErrorKind::Spec, "logistic: mixing measure is unbounded on [0,1]");
                 },
                 [&](const family::LinLin&) { return theta; },
                 [&](const family::ScaledLinLin&) { return theta / alpha.value(); },
                 [&](const family::HomogeneousPower& p) {
                   need_positive("power");
                   return std::pow(theta, p.c) / p.c;
                 },
                 [&](const family::LogPower&) {
                   need_positive("log-power");
                   return std::log(theta);
                 },
                 [&](const family::ExtremalExpectile&) -> double {
                   fail(ErrorKind::Spec, "extremal losses have no mixture representation");
                 },
                 [&](const family::ExtremalQuantile&) -> double {
                   fail(ErrorKind::Spec, "extremal losses have no mixture representation");
                 }},
      f);
}

MixtureSpec::MixtureSpec(LossFamily target, double lo, double hi, int node_count,
                         std::vector<PointMass> point_masses)
    : target_(std::move(target)), lo_(lo), hi_(hi), nodes_(node_count),
      masses_(std::move(point_masses)) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, ErrorKind::InvalidArgument,
          "mixture: need finite lo < hi");
  require(node_count >= 3, ErrorKind::InvalidArgument, "mixture: node_count must be at least 3");
  if (is_extremal(target_)) fail(ErrorKind::Spec, "mixture target must be a non-extremal family");
  if (std::holds_alternative<family::LogisticBregman>(target_))
    fail(ErrorKind::Spec, "logistic: mixing measure is unbounded on [0,1]");
  LossSpec(target_, FunctionalLevel(0.5));  // parameter validation
  for (const auto& m : masses_) check_finite(m.location, "point mass location");
}

MixtureSpec MixtureSpec::auto_range(LossFamily target, const std::vector<double>& sample,
                                    int node_count) {
  require(!sample.empty(), ErrorKind::EmptyInput, "mixture: empty sample for auto range");
  const auto [mn, mx] = std::minmax_element(sample.begin(), sample.end());
  return MixtureSpec(std::move(target), *mn - 1.0, *mx + 1.0, node_count);
}

PointMass homogeneous_bregman_dirac(double b) { return PointMass{0.0, ForecastPowerWeight{b}}; }

double mixture_loss(const MixtureSpec& mix, FunctionalLevel alpha, double x, double y) {
  check_inputs(x, y);
  const double m = std::min(x, y);
  const double M = std::max(x, y);
  if (m < mix.lo() || M > mix.hi())
    fail(ErrorKind::Range, "mixture: integration range does not cover [min(x,y), max(x,y)]");
  const Functional kind = functional_of(mix.target());
  // Validate domain through the direct loss; it throws on violations.
  LossSpec spec(mix.target(), alpha);
  (void)consistent_loss(spec, x, y);

  auto right = [&](double t) { return extremal_loss(kind, t, alpha, x, y); };
  auto left = [&](double t) {
    return kind == Functional::Expectile ? extremal_expectile_loss_left(t, alpha, x, y)
                                         : extremal_quantile_loss_left(t, alpha, x, y);
  };

  double total = 0.0;
  if (m < M) {
    // The integrand vanishes outside [m, M), so only nodes inside matter.
    std::vector<double> knots{m};
    const int n = mix.node_count();
    const double h = (mix.hi() - mix.lo()) / (n - 1);
    const int first = std::max(0, static_cast<int>(std::floor((m - mix.lo()) / h)));
    for (int i = first; i < n; ++i) {
      const double t = mix.lo() + h * i;
      if (t >= M) break;
      if (t > m) knots.push_back(t);
    }
    knots.push_back(M);

    double h_prev = mixing_function(mix.target(), alpha, knots[0]);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const double h_next = mixing_function(mix.target(), alpha, knots[i + 1]);
      const double dh = h_next - h_prev;
      if (dh < 0.0) fail(ErrorKind::Spec, "mixture: negative density encountered");
      total += 0.5 * (right(knots[i]) + left(knots[i + 1])) * dh;
      h_prev = h_next;
    }
  }

  for (const auto& pm : mix.point_masses()) {
    const double w = std::visit(
        overloaded{[&](const FixedWeight& r) { return r.w; },
                   [&](const ForecastPowerWeight& r) {
                     return r.b * std::pow(std::abs(x), r.b - 1.0);
                   }},
        pm.weight);
    if (w < 0.0) fail(ErrorKind::Spec, "mixture: negative point-mass weight");
    total += w * right(pm.location);
  }
  return total;
}

}  // namespace fcmp

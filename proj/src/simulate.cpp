#include "fcmp/simulate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "fcmp/error.hpp"
#include "fcmp/normal.hpp"
#include "fcmp/risk.hpp"
#include "fcmp/rng.hpp"

namespace fcmp {

namespace {

constexpr double kGamma = 0.4;
constexpr double kBeta1 = 0.5;
constexpr double kBeta2 = 0.2;

void check_alpha(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
}

// E[(Z - t)+] for standard normal Z.
double upper_partial(double t) { return norm_pdf(t) - t * norm_sf(t); }

}  // namespace

double normal_expectile(double alpha) {
  check_alpha(alpha);
  // (1 - alpha) E[(t - Z)+] - alpha E[(Z - t)+] is increasing in t, and
  // E[(t - Z)+] = E[(Z - t)+] + t.
  auto g = [&](double t) {
    const double up = upper_partial(t);
    return (1.0 - alpha) * (up + t) - alpha * up;
  };
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 300 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double normal_expectile_scale(double alpha) {
  check_alpha(alpha);
  const double e = normal_expectile(alpha);
  using boost::math::quadrature::gauss_kronrod;
  auto sq = [e](double z) { return (z - e) * (z - e) * norm_pdf(z); };
  const double inf = std::numeric_limits<double>::infinity();
  const double below = gauss_kronrod<double, 61>::integrate(sq, -inf, e, 15, 1e-13);
  const double above = gauss_kronrod<double, 61>::integrate(sq, e, inf, 15, 1e-13);
  const double num = (1.0 - alpha) * (1.0 - alpha) * below + alpha * alpha * above;
  const double pe = norm_cdf(e);
  const double den = (1.0 - alpha) * pe + alpha * (1.0 - pe);
  return std::sqrt(num) / den;
}

double normal_quantile_scale(double alpha) {
  check_alpha(alpha);
  return std::sqrt(alpha * (1.0 - alpha)) / norm_pdf(norm_quantile(alpha));
}

const char* to_string(Design d) {
  switch (d) {
    case Design::MseVsBregman: return "mse";
    case Design::E1: return "e1";
    case Design::E2: return "e2";
    case Design::E3: return "e3";
    case Design::Q1: return "q1";
    case Design::Q2: return "q2";
  }
  return "";
}

Design parse_design(const std::string& text) {
  for (Design d : {Design::MseVsBregman, Design::E1, Design::E2, Design::E3, Design::Q1, Design::Q2})
    if (text == to_string(d)) return d;
  fail(ErrorKind::InvalidArgument, "design must be one of mse, e1, e2, e3, q1, q2; got '" + text + "'");
}

Functional design_functional(Design d) {
  return (d == Design::Q1 || d == Design::Q2) ? Functional::Quantile : Functional::Expectile;
}

int setting_count(Design d) {
  switch (d) {
    case Design::MseVsBregman: return 3;
    case Design::E1: return 6;
    case Design::E2: return 6;
    case Design::E3: return 4;
    case Design::Q1: return 6;
    case Design::Q2: return 5;
  }
  return 0;
}

int lfc_setting(Design d) {
  switch (d) {
    case Design::MseVsBregman: return 0;
    case Design::E1:
    case Design::Q1: return 3;
    default: return 1;
  }
}

int parse_setting(Design d, const std::string& text) {
  if (text == "lfc") {
    const int s = lfc_setting(d);
    require(s > 0, ErrorKind::InvalidArgument, std::string("design ") + to_string(d) + " has no lfc setting");
    return s;
  }
  int s = 0;
  try {
    std::size_t used = 0;
    s = std::stoi(text, &used);
    if (used != text.size()) s = 0;
  } catch (const std::exception&) {
    s = 0;
  }
  require(s >= 1 && s <= setting_count(d), ErrorKind::InvalidArgument,
          "setting must be 'lfc' or an index in 1.." + std::to_string(setting_count(d)) + " for design " +
              to_string(d) + "; got '" + text + "'");
  return s;
}

double design_alpha(const ScenarioSpec& spec) {
  switch (spec.design) {
    case Design::E1:
    case Design::Q1:
    case Design::Q2: return spec.alpha;
    default: return 0.5;
  }
}

ScenarioCoefficients mse_scenario(int scenario) {
  switch (scenario) {
    case 1: return {2 * kGamma, 2 * kBeta1, 2 * kGamma, 2 * kBeta2};
    case 2: return {2 * kGamma, 2 * kBeta1, kGamma, kBeta2};
    case 3: return {kGamma, kBeta1, 2 * kGamma, 2 * kBeta2};
    default: fail(ErrorKind::InvalidArgument, "scenario must be 1, 2 or 3");
  }
}

namespace {

ForecastPanel make_panel(std::vector<double> y, std::vector<double> x1, std::vector<double> x2) {
  return ForecastPanel(std::move(y), {"x1", "x2"}, {std::move(x1), std::move(x2)});
}

ForecastPanel gen_mse(const ScenarioSpec& s, Rng& rng) {
  const auto c = mse_scenario(s.setting);
  std::vector<double> y(s.tp), x1(s.tp), x2(s.tp);
  for (std::size_t t = 0; t < s.tp; ++t) {
    const double w1 = rng.normal(), w2 = rng.normal(), eps = rng.normal();
    y[t] = kGamma + kBeta1 * w1 + kBeta2 * w2 + eps;
    x1[t] = c.c1 + c.b1 * w1;
    x2[t] = c.c2 + c.b2 * w2;
  }
  return make_panel(std::move(y), std::move(x1), std::move(x2));
}

// E1 and Q1 share the data generating process and the competitor layout;
// only the centre (expectile or quantile of N(0,1)) and the noise scale differ.
ForecastPanel gen_noisy_target(const ScenarioSpec& s, Rng& rng, double centre, double scale) {
  // competitor noise sd and whether it keeps the conditional mean
  static const double kSd[] = {0.0, 0.2, 0.5, 1.0, 0.5, 1.0};
  static const bool kConditional[] = {true, true, true, true, false, false};
  const double sd2 = kSd[s.setting - 1];
  const bool cond = kConditional[s.setting - 1];
  std::vector<double> y(s.tp), x1(s.tp), x2(s.tp);
  for (std::size_t t = 0; t < s.tp; ++t) {
    const double mu = rng.normal();
    const double eps = rng.normal();
    const double z1 = 0.5 * rng.normal();
    const double z2 = sd2 * rng.normal();
    y[t] = mu + eps;
    x1[t] = mu + centre + scale * z1;
    x2[t] = (cond ? mu : 0.0) + centre + scale * z2;
  }
  return make_panel(std::move(y), std::move(x1), std::move(x2));
}

ForecastPanel gen_e2(const ScenarioSpec& s, Rng& rng) {
  constexpr std::size_t kBurn = 200, kWindow = 100;
  double beta2 = 0.45, s23 = 0.0;
  switch (s.setting) {
    case 2: beta2 = 0.1; break;
    case 4: beta2 = 0.75; break;
    case 5: s23 = 0.3; break;
    case 6: s23 = 0.8; break;
    default: break;
  }
  Eigen::Matrix3d omega;
  omega << 1, 0, 0, 0, 1, s23, 0, s23, 1;
  const Eigen::Matrix3d L = omega.llt().matrixL();

  // Y, W1, W2 at times 0 .. n-1; forecasts are made at origins t and target t + 1.
  const std::size_t n = kBurn + kWindow + s.tp + 1;
  std::vector<double> Y(n), W1(n), W2(n);
  Y[0] = 0.1 / 0.7;
  W1[0] = 0.2 / 0.4;
  W2[0] = 0.3 / 0.6;
  for (std::size_t t = 1; t < n; ++t) {
    const Eigen::Vector3d z(rng.normal(), rng.normal(), rng.normal());
    const Eigen::Vector3d e = L * z;
    Y[t] = 0.1 + 0.3 * Y[t - 1] + beta2 * W1[t - 1] + e(0);
    W1[t] = 0.2 + 0.6 * W1[t - 1] + e(1);
    W2[t] = 0.3 + 0.4 * W2[t - 1] + e(2);
  }

  std::vector<double> y(s.tp), x1(s.tp), x2(s.tp);
  std::vector<double> resp(kWindow), lagy(kWindow), reg(kWindow);
  for (std::size_t i = 0; i < s.tp; ++i) {
    const std::size_t t = kBurn + kWindow + i;  // forecast origin
    for (std::size_t j = 0; j < kWindow; ++j) {
      const std::size_t u = t - kWindow + j;  // regress Y[u+1] on data at u
      resp[j] = Y[u + 1];
      lagy[j] = Y[u];
      reg[j] = s.setting == 5 || s.setting == 6 ? W2[u] : W1[u];
    }
    const auto small = ols_fit({lagy}, resp);
    const double z1 = 0.05 * rng.normal(), z2 = 0.15 * rng.normal();
    const double z3 = 0.05 * rng.normal(), z4 = 0.15 * rng.normal();
    x1[i] = (small[0] + z1) + (small[1] + z2) * Y[t];
    if (s.setting == 1) {
      x2[i] = (small[0] + z3) + (small[1] + z4) * Y[t];
    } else {
      const auto big = ols_fit({lagy, reg}, resp);
      const double w = s.setting == 5 || s.setting == 6 ? W2[t] : W1[t];
      x2[i] = big[0] + big[1] * Y[t] + big[2] * w;
    }
    y[i] = Y[t + 1];
  }
  return make_panel(std::move(y), std::move(x1), std::move(x2));
}

ForecastPanel gen_e3(const ScenarioSpec& s, Rng& rng) {
  constexpr std::size_t kBurn = 200, kWindow = 100;
  const std::size_t n = kBurn + kWindow + s.tp + 1;
  std::vector<double> V(n);
  double s2 = 1.0;  // unconditional variance 0.05 / (1 - 0.95)
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) s2 = 0.05 + 0.75 * s2 + 0.2 * V[t - 1] * V[t - 1];
    V[t] = std::sqrt(s2) * rng.normal();
  }
  std::size_t p = 0, q = 0;
  switch (s.setting) {
    case 2: p = 0; q = 1; break;
    case 3: p = 1; q = 1; break;
    case 4: p = 2; q = 2; break;
    default: break;
  }
  const double shrink = std::exp(-0.045);
  std::vector<double> y(s.tp), x1(s.tp), x2(s.tp);
  std::optional<GarchFit> warm;
  for (std::size_t i = 0; i < s.tp; ++i) {
    const std::size_t t = kBurn + kWindow + i;
    const double yt = V[t] * V[t];
    const double u1 = 0.3 * rng.normal(), u2 = 0.3 * rng.normal();
    x1[i] = shrink * std::exp(u1) * yt;
    if (s.setting == 1) {
      x2[i] = shrink * std::exp(u2) * yt;
    } else {
      const std::vector<double> w(V.begin() + static_cast<std::ptrdiff_t>(t + 1 - kWindow),
                                  V.begin() + static_cast<std::ptrdiff_t>(t + 1));
      warm = garch_fit(w, p, q, warm);
      x2[i] = warm->next_variance;
    }
    y[i] = V[t + 1] * V[t + 1];
  }
  return make_panel(std::move(y), std::move(x1), std::move(x2));
}

ForecastPanel gen_q2(const ScenarioSpec& s, Rng& rng) {
  constexpr std::size_t kWindow = 100;
  const std::size_t n = kWindow + s.tp + 1;
  std::vector<double> Y(n), W1(n), W2(n);
  for (std::size_t t = 0; t < n; ++t) {
    W1[t] = rng.normal();
    W2[t] = rng.normal();
    const double eps = rng.normal();
    Y[t] = t == 0 ? 0.5 + eps : 0.5 + 1.2 * W1[t - 1] + 1.5 * W2[t - 1] + eps;
  }
  const double a = s.alpha;
  std::vector<double> y(s.tp), x1(s.tp), x2(s.tp);
  std::vector<double> resp(kWindow), r1(kWindow), r2(kWindow), res(kWindow);
  for (std::size_t i = 0; i < s.tp; ++i) {
    const std::size_t t = kWindow + i;
    for (std::size_t j = 0; j < kWindow; ++j) {
      const std::size_t u = t - kWindow + j;
      resp[j] = Y[u + 1];
      r1[j] = W1[u];
      r2[j] = W2[u];
    }
    const auto mis = ols_fit({r1}, resp);
    for (std::size_t j = 0; j < kWindow; ++j) res[j] = resp[j] - mis[0] - mis[1] * r1[j];
    const double mu_mis = mis[0] + mis[1] * W1[t];
    const double q_mis = sample_quantile(res, a);
    const double z1 = rng.normal(), z2 = rng.normal();
    x1[i] = mu_mis + q_mis + z1;
    switch (s.setting) {
      case 1: x2[i] = mu_mis + q_mis + z2; break;
      case 2: x2[i] = mu_mis + q_mis; break;
      case 3: {
        const auto full = ols_fit({r1, r2}, resp);
        for (std::size_t j = 0; j < kWindow; ++j) res[j] = resp[j] - full[0] - full[1] * r1[j] - full[2] * r2[j];
        x2[i] = full[0] + full[1] * W1[t] + full[2] * W2[t] + sample_quantile(res, a);
        break;
      }
      case 4: {
        for (std::size_t j = 0; j < kWindow; ++j) res[j] = resp[j] - mis[0] - mis[1] * r1[j] - 1.5 * r2[j];
        x2[i] = mu_mis + 1.5 * W2[t] + sample_quantile(res, a);
        break;
      }
      default: {
        for (std::size_t j = 0; j < kWindow; ++j) res[j] = resp[j] - 0.5 - 1.2 * r1[j] - 1.5 * r2[j];
        x2[i] = 0.5 + 1.2 * W1[t] + 1.5 * W2[t] + sample_quantile(res, a);
        break;
      }
    }
    y[i] = Y[t + 1];
  }
  return make_panel(std::move(y), std::move(x1), std::move(x2));
}

}  // namespace

ForecastPanel generate_scenario(const ScenarioSpec& spec) {
  require(spec.tp >= 1, ErrorKind::InvalidArgument, "scenario: T_P must be positive");
  require(spec.setting >= 1 && spec.setting <= setting_count(spec.design), ErrorKind::InvalidArgument,
          "scenario: setting " + std::to_string(spec.setting) + " out of range for design " + to_string(spec.design));
  check_alpha(spec.alpha);
  Rng rng(spec.seed, {static_cast<std::uint64_t>(spec.design), static_cast<std::uint64_t>(spec.setting)});
  switch (spec.design) {
    case Design::MseVsBregman: return gen_mse(spec, rng);
    case Design::E1:
      return gen_noisy_target(spec, rng, normal_expectile(spec.alpha), normal_expectile_scale(spec.alpha));
    case Design::Q1:
      return gen_noisy_target(spec, rng, norm_quantile(spec.alpha), normal_quantile_scale(spec.alpha));
    case Design::E2: return gen_e2(spec, rng);
    case Design::E3: return gen_e3(spec, rng);
    case Design::Q2: return gen_q2(spec, rng);
  }
  fail(ErrorKind::InvalidArgument, "unknown design");
}

namespace {

// E[1{theta < c + b W} (Y - theta)] where Y loads beta on the same W.
double truncated_first(double c, double b, double beta, double theta) {
  const double u = (theta - c) / b;
  return (kGamma - theta) * norm_sf(u) + beta * norm_pdf(u);
}

}  // namespace

double analytic_loss_diff(int scenario, const LossFamily& loss) {
  const auto c = mse_scenario(scenario);
  if (std::holds_alternative<family::SquaredError>(loss)) {
    const double mse1 = (c.c1 - kGamma) * (c.c1 - kGamma) + (c.b1 - kBeta1) * (c.b1 - kBeta1) + kBeta2 * kBeta2 + 1.0;
    const double mse2 = (c.c2 - kGamma) * (c.c2 - kGamma) + kBeta1 * kBeta1 + (c.b2 - kBeta2) * (c.b2 - kBeta2) + 1.0;
    return 0.5 * (mse1 - mse2);
  }
  if (const auto* e = std::get_if<family::ExponentialBregman>(&loss)) {
    const double a = e->a;
    require(a != 0.0, ErrorKind::InvalidArgument, "exp-bregman: a must be nonzero");
    // Part of E[L(X, Y)] that depends on X = c + b W, with Y loading beta on W.
    auto part = [&](double ci, double bi, double beta) {
      const double m = std::exp(a * ci + 0.5 * a * a * bi * bi);
      const double eyx = m * (kGamma + beta * a * bi);
      const double exx = m * (ci + a * bi * bi);
      return -m / (a * a) - (eyx - exx) / a;
    };
    return 0.5 * (part(c.c1, c.b1, kBeta1) - part(c.c2, c.b2, kBeta2));
  }
  if (const auto* x = std::get_if<family::ExtremalExpectile>(&loss)) {
    return 0.5 * (truncated_first(c.c2, c.b2, kBeta2, x->theta) - truncated_first(c.c1, c.b1, kBeta1, x->theta));
  }
  fail(ErrorKind::InvalidArgument, "analytic_loss_diff supports squared-error, exp-bregman and extremal-expectile");
}

double analytic_extremal_diff_sd(int scenario, double theta) {
  const auto c = mse_scenario(scenario);
  const double k = kGamma - theta;
  const double u1 = (theta - c.c1) / c.b1, u2 = (theta - c.c2) / c.b2;
  const double P1 = norm_sf(u1), M1 = norm_pdf(u1), S1 = P1 + u1 * M1;
  const double P2 = norm_sf(u2), M2 = norm_pdf(u2), S2 = P2 + u2 * M2;
  // E[1{W > u} (k + beta W)^2] plus the variance of the independent remainder.
  const double a2 = k * k * P2 + 2 * k * kBeta2 * M2 + kBeta2 * kBeta2 * S2 + P2 * (kBeta1 * kBeta1 + 1.0);
  const double a1 = k * k * P1 + 2 * k * kBeta1 * M1 + kBeta1 * kBeta1 * S1 + P1 * (kBeta2 * kBeta2 + 1.0);
  const double cross = P1 * P2 * (k * k + 1.0) + 2 * k * (kBeta1 * M1 * P2 + kBeta2 * M2 * P1) +
                       kBeta1 * kBeta1 * S1 * P2 + kBeta2 * kBeta2 * S2 * P1 + 2 * kBeta1 * kBeta2 * M1 * M2;
  const double second = 0.25 * (a1 + a2 - 2.0 * cross);
  const double mean = analytic_loss_diff(scenario, family::ExtremalExpectile{theta});
  return std::sqrt(std::max(0.0, second - mean * mean));
}

StudyResult run_rejection_study(const StudySpec& spec) {
  require(spec.replications >= 1, ErrorKind::InvalidArgument, "study: need at least one replication");
  spec.bootstrap.validate();
  const ScenarioSpec& base = spec.scenario;
  const Functional kind = design_functional(base.design);
  const FunctionalLevel alpha(design_alpha(base));
  const std::size_t R = spec.replications;

  std::vector<double> pv(R, 1.0), dmp(R, 1.0);
  std::vector<std::map<double, bool>> rej(R);
  std::exception_ptr error;
  const auto RR = static_cast<std::ptrdiff_t>(R);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < RR; ++r) {
    try {
      const auto ur = static_cast<std::uint64_t>(r);
      ScenarioSpec sc = base;
      sc.seed = stream_seed(base.seed, {ur, 0});
      const ForecastPanel panel = generate_scenario(sc);
      const PanelSlice pair = spec.reverse ? PanelSlice(1, 0) : PanelSlice(0, 1);
      BootstrapConfig bc = spec.bootstrap;
      bc.seed = stream_seed(base.seed, {ur, 1});
      const ThetaGrid grid = build_theta_grid(panel, {pair}, GridSpec::automatic(stream_seed(base.seed, {ur, 2})));
      const TestReport rep = recentered_bootstrap_test(panel, {pair}, kind, alpha, grid, bc, Exec::Serial);
      pv[static_cast<std::size_t>(r)] = rep.p_value;
      rej[static_cast<std::size_t>(r)] = rep.reject;
      if (spec.with_dm) {
        const DmLoss dl = kind == Functional::Expectile ? DmLoss::Squared : DmLoss::Tick;
        try {
          dmp[static_cast<std::size_t>(r)] = dm_test(panel, pair, dl, alpha).p_value;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Degenerate) throw;
          dmp[static_cast<std::size_t>(r)] = 1.0;
        }
      }
    } catch (...) {
#pragma omp critical(fcmp_study_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  StudyResult out;
  out.design = to_string(base.design);
  out.setting = base.setting;
  out.alpha = alpha.value();
  out.tp = base.tp;
  out.replications = R;
  out.bootstrap_m = spec.bootstrap.M;
  out.reverse = spec.reverse;
  out.levels = spec.bootstrap.levels;
  for (double g : out.levels) {
    std::size_t np = 0, nd = 0;
    for (std::size_t r = 0; r < R; ++r) {
      if (rej[r].at(g)) ++np;
      if (spec.with_dm && dmp[r] <= g) ++nd;
    }
    out.proposed[g] = static_cast<double>(np) / static_cast<double>(R);
    if (spec.with_dm) out.dm[g] = static_cast<double>(nd) / static_cast<double>(R);
  }
  out.p_values = std::move(pv);
  if (spec.with_dm) out.dm_p_values = std::move(dmp);
  return out;
}

std::string study_csv(const std::vector<StudyResult>& results) {
  std::ostringstream os;
  os.precision(17);
  os << "design,setting,alpha,tp,reps,m,reverse,level,proposed,dm\n";
  for (const auto& r : results) {
    for (double g : r.levels) {
      os << r.design << ',' << r.setting << ',' << r.alpha << ',' << r.tp << ',' << r.replications << ','
         << r.bootstrap_m << ',' << (r.reverse ? 1 : 0) << ',' << g << ',' << r.proposed.at(g) << ',';
      if (!r.dm.empty()) os << r.dm.at(g);
      os << '\n';
    }
  }
  return os.str();
}

SizePowerCurve size_power_curve(const std::vector<double>& p_null, const std::vector<double>& p_alt,
                                const std::vector<double>& gammas) {
  require(!p_null.empty() && !p_alt.empty(), ErrorKind::EmptyInput, "size-power: empty p-value vector");
  for (const auto* v : {&p_null, &p_alt})
    for (double p : *v) require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidArgument, "size-power: p-values must lie in [0,1]");
  std::vector<double> sorted_null = p_null;
  std::sort(sorted_null.begin(), sorted_null.end());
  std::vector<double> sorted_alt = p_alt;
  std::sort(sorted_alt.begin(), sorted_alt.end());
  SizePowerCurve c;
  const double N = static_cast<double>(sorted_null.size());
  for (double g : gammas) {
    require(g >= 0.0 && g <= 1.0, ErrorKind::InvalidArgument, "size-power: gamma must lie in [0,1]");
    double power = 0.0;
    if (g > 0.0) {
      // inf{x : #{p0 <= x} / N >= g}
      const double x = g * N;
      const double r = std::round(x);
      double k = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
      k = std::clamp(k, 1.0, N);
      const double thr = sorted_null[static_cast<std::size_t>(k) - 1];
      const auto cnt = std::upper_bound(sorted_alt.begin(), sorted_alt.end(), thr) - sorted_alt.begin();
      power = static_cast<double>(cnt) / static_cast<double>(sorted_alt.size());
    }
    c.size.push_back(g);
    c.power.push_back(power);
  }
  return c;
}

std::string size_power_csv(const SizePowerCurve& curve) {
  std::ostringstream os;
  os.precision(17);
  os << "size,power\n";
  for (std::size_t i = 0; i < curve.size.size(); ++i) os << curve.size[i] << ',' << curve.power[i] << '\n';
  return os.str();
}

}  // namespace fcmp

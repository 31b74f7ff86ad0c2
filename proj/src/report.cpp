#include "fcmp/report.hpp"

#include <cmath>
#include <sstream>

#include "fcmp/error.hpp"

namespace fcmp {

Json json_number(double v) {
  if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "report contains a non-finite value");
  if (v == std::floor(v) && std::abs(v) < 9007199254740992.0) return Json(static_cast<std::int64_t>(v));
  return Json(v);
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

std::string level_key(double g) { return json_number(g).dump(); }

double key_level(const std::string& k) {
  std::size_t used = 0;
  const double v = std::stod(k, &used);
  if (used != k.size()) fail(ErrorKind::Parse, "bad level key '" + k + "'");
  return v;
}

void check_finite_tree(const Json& j) {
  if (j.is_number_float() && !std::isfinite(j.get<double>()))
    fail(ErrorKind::InvalidArgument, "report contains a non-finite value");
  if (j.is_structured())
    for (const auto& e : j) check_finite_tree(e);
}

}  // namespace

void to_json(Json& j, const TestReport& r) {
  Json cv = Json::object(), rej = Json::object(), pairs = Json::array();
  for (const auto& [g, h] : r.critical_values) cv[level_key(g)] = json_number(h);
  for (const auto& [g, b] : r.reject) rej[level_key(g)] = b;
  for (const auto& [b, c] : r.pairs) pairs.push_back(Json{{"benchmark", b}, {"competitor", c}});
  j = Json{{"statistic", json_number(r.statistic)},
           {"argmax_theta", json_number(r.argmax_theta)},
           {"argmax_pair", Json{{"benchmark", r.argmax_benchmark}, {"competitor", r.argmax_competitor}}},
           {"pairs", pairs},
           {"p_value", json_number(r.p_value)},
           {"critical_values", cv},
           {"reject", rej},
           {"bootstrap_m", r.bootstrap_m},
           {"block_p", json_number(r.block_p)},
           {"seed", r.seed},
           {"kind", r.kind},
           {"alpha", json_number(r.alpha)},
           {"sample_size", r.sample_size},
           {"grid_size", r.grid_size},
           {"grid", r.grid}};
}

void from_json(const Json& j, TestReport& r) {
  r = TestReport{};
  r.statistic = j.at("statistic").get<double>();
  r.argmax_theta = j.at("argmax_theta").get<double>();
  r.argmax_benchmark = j.at("argmax_pair").at("benchmark").get<std::string>();
  r.argmax_competitor = j.at("argmax_pair").at("competitor").get<std::string>();
  for (const auto& p : j.at("pairs"))
    r.pairs.emplace_back(p.at("benchmark").get<std::string>(), p.at("competitor").get<std::string>());
  r.p_value = j.at("p_value").get<double>();
  for (const auto& [k, v] : j.at("critical_values").items()) r.critical_values[key_level(k)] = v.get<double>();
  for (const auto& [k, v] : j.at("reject").items()) r.reject[key_level(k)] = v.get<bool>();
  r.bootstrap_m = j.at("bootstrap_m").get<std::size_t>();
  r.block_p = j.at("block_p").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.kind = j.at("kind").get<std::string>();
  r.alpha = j.at("alpha").get<double>();
  r.sample_size = j.at("sample_size").get<std::size_t>();
  r.grid_size = j.at("grid_size").get<std::size_t>();
  r.grid = j.at("grid").get<std::string>();
}

void to_json(Json& j, const DmReport& r) {
  j = Json{{"statistic", json_number(r.statistic)},
           {"p_value", json_number(r.p_value)},
           {"nw_lag", r.nw_lag},
           {"mean_diff", json_number(r.mean_diff)}};
  if (r.drmse_x100) j["drmse_x100"] = json_number(*r.drmse_x100);
}

void from_json(const Json& j, DmReport& r) {
  r = DmReport{};
  r.statistic = j.at("statistic").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.nw_lag = j.at("nw_lag").get<std::size_t>();
  r.mean_diff = j.at("mean_diff").get<double>();
  if (j.contains("drmse_x100")) r.drmse_x100 = j.at("drmse_x100").get<double>();
}

void to_json(Json& j, const BacktestReport& r) {
  j = Json{{"method", r.method},
           {"alpha", json_number(r.alpha)},
           {"window", r.window},
           {"var_series", numbers(r.var_series)},
           {"hit_proportion", json_number(r.hit_proportion)},
           {"avg_tick_loss", json_number(r.avg_tick_loss)},
           {"mean", json_number(r.mean)},
           {"std", json_number(r.stdev)},
           {"min", json_number(r.min)},
           {"max", json_number(r.max)}};
}

void from_json(const Json& j, BacktestReport& r) {
  r = BacktestReport{};
  r.method = j.at("method").get<std::string>();
  r.alpha = j.at("alpha").get<double>();
  r.window = j.at("window").get<std::size_t>();
  r.var_series = j.at("var_series").get<std::vector<double>>();
  r.hit_proportion = j.at("hit_proportion").get<double>();
  r.avg_tick_loss = j.at("avg_tick_loss").get<double>();
  r.mean = j.at("mean").get<double>();
  r.stdev = j.at("std").get<double>();
  r.min = j.at("min").get<double>();
  r.max = j.at("max").get<double>();
}

void to_json(Json& j, const StudyResult& r) {
  Json prop = Json::object(), dm = Json::object();
  for (const auto& [g, f] : r.proposed) prop[level_key(g)] = json_number(f);
  for (const auto& [g, f] : r.dm) dm[level_key(g)] = json_number(f);
  j = Json{{"design", r.design}, {"setting", r.setting}, {"alpha", json_number(r.alpha)},
           {"tp", r.tp}, {"replications", r.replications}, {"bootstrap_m", r.bootstrap_m},
           {"reverse", r.reverse}, {"proposed", prop}, {"dm", dm}};
}

std::string write_json(Json doc) {
  check_finite_tree(doc);
  if (doc.is_object()) doc["schema"] = 1;
  return doc.dump() + "\n";
}

std::string write_report_json(const TestReport& r) { return write_json(Json(r)); }

TestReport read_report_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorKind::Parse, std::string("json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema") || j["schema"] != 1)
    fail(ErrorKind::Schema, "json: expected \"schema\": 1");
  try {
    return j.get<TestReport>();
  } catch (const Json::exception& e) {
    fail(ErrorKind::Schema, std::string("json: ") + e.what());
  }
}

Json backtest_table_row(const BacktestReport& r) {
  return Json{{"method", r.method},
              {"mean_pct", json_number(100.0 * r.mean)},
              {"std_pct", json_number(100.0 * r.stdev)},
              {"min_pct", json_number(100.0 * r.min)},
              {"max_pct", json_number(100.0 * r.max)},
              {"hit_prop", json_number(r.hit_proportion)},
              {"tick_loss_pct", json_number(100.0 * r.avg_tick_loss)}};
}

namespace {

std::string fmt(double v) {
  if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "csv output contains a non-finite value");
  return json_number(v).dump();
}

}  // namespace

std::string murphy_csv(const MurphyTable& table, bool with_difference) {
  std::ostringstream os;
  os << "theta";
  for (const auto& n : table.names) os << ',' << csv_escape("loss_" + n);
  if (with_difference)
    for (std::size_t k = 1; k < table.names.size(); ++k) os << ',' << csv_escape("diff_" + table.names[k]);
  os << '\n';
  for (std::size_t j = 0; j < table.theta.size(); ++j) {
    os << fmt(table.theta[j]);
    for (const auto& col : table.mean_loss) os << ',' << fmt(col[j]);
    if (with_difference)
      for (std::size_t k = 1; k < table.mean_loss.size(); ++k)
        os << ',' << fmt(table.mean_loss[0][j] - table.mean_loss[k][j]);
    os << '\n';
  }
  return os.str();
}

std::string diff_curve_csv(const DiffCurve& curve) {
  std::ostringstream os;
  os << "theta,value\n";
  for (std::size_t j = 0; j < curve.values.size(); ++j)
    os << fmt(curve.theta.points[j]) << ',' << fmt(curve.values[j]) << '\n';
  return os.str();
}

}  // namespace fcmp

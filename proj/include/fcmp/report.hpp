#pragma once

#include <json.hpp>
#include <string>

#include "fcmp/bootstrap.hpp"
#include "fcmp/dm.hpp"
#include "fcmp/engine.hpp"
#include "fcmp/risk.hpp"
#include "fcmp/simulate.hpp"

namespace fcmp {

using Json = nlohmann::json;

// Integral doubles become JSON integers; NaN and infinities are rejected.
Json json_number(double v);

void to_json(Json& j, const TestReport& r);
void from_json(const Json& j, TestReport& r);
void to_json(Json& j, const DmReport& r);
void from_json(const Json& j, DmReport& r);
void to_json(Json& j, const BacktestReport& r);
void from_json(const Json& j, BacktestReport& r);
void to_json(Json& j, const StudyResult& r);

// Compact, key-sorted, byte-deterministic output with a top-level "schema": 1.
std::string write_json(Json doc);
std::string write_report_json(const TestReport& r);
TestReport read_report_json(const std::string& text);

// Backtest summary in the usual table layout, percentages where returns are in percent.
Json backtest_table_row(const BacktestReport& r);

// theta,loss_<name>... rows sorted by theta; with_difference appends
// diff_<name> = first series minus each later series.
std::string murphy_csv(const MurphyTable& table, bool with_difference);
std::string diff_curve_csv(const DiffCurve& curve);

}  // namespace fcmp

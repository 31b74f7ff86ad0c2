#include "fcmp/panel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "fcmp/error.hpp"

namespace fcmp {

ForecastPanel::ForecastPanel(std::vector<double> realized, std::vector<std::string> names,
                             std::vector<std::vector<double>> forecasts,
                             std::optional<std::string> horizon_label,
                             std::vector<std::string> row_labels)
    : realized_(std::move(realized)), names_(std::move(names)), forecasts_(std::move(forecasts)),
      horizon_(std::move(horizon_label)), row_labels_(std::move(row_labels)) {
  require(!realized_.empty(), ErrorKind::EmptyInput, "panel has no rows");
  require(!forecasts_.empty(), ErrorKind::InvalidArgument, "panel needs at least one forecast series");
  require(names_.size() == forecasts_.size(), ErrorKind::InvalidArgument,
          "panel: one name per forecast series required");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    require(!n.empty(), ErrorKind::InvalidArgument, "panel: series names must be non-empty");
    require(seen.insert(n).second, ErrorKind::InvalidArgument, "panel: duplicate series name '" + n + "'");
  }
  const std::size_t T = realized_.size();
  for (std::size_t t = 0; t < T; ++t)
    require(std::isfinite(realized_[t]), ErrorKind::InvalidArgument,
            "panel: non-finite realization at row " + std::to_string(t + 1));
  for (std::size_t k = 0; k < forecasts_.size(); ++k) {
    require(forecasts_[k].size() == T, ErrorKind::InvalidArgument,
            "panel: series '" + names_[k] + "' length differs from realizations");
    for (std::size_t t = 0; t < T; ++t)
      require(std::isfinite(forecasts_[k][t]), ErrorKind::InvalidArgument,
              "panel: non-finite value in '" + names_[k] + "' at row " + std::to_string(t + 1));
  }
  require(row_labels_.empty() || row_labels_.size() == T, ErrorKind::InvalidArgument,
          "panel: row labels must match row count");
}

std::size_t ForecastPanel::index_of(const std::string& name) const {
  for (std::size_t k = 0; k < names_.size(); ++k)
    if (names_[k] == name) return k;
  fail(ErrorKind::Schema, "unknown series '" + name + "'");
}

ForecastPanel ForecastPanel::resample(const std::vector<std::size_t>& rows) const {
  std::vector<double> y(rows.size());
  std::vector<std::vector<double>> f(forecasts_.size(), std::vector<double>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y[i] = realized_.at(rows[i]);
    for (std::size_t k = 0; k < f.size(); ++k) f[k][i] = forecasts_[k][rows[i]];
  }
  return ForecastPanel(std::move(y), names_, std::move(f), horizon_);
}

PanelSlice::PanelSlice(std::size_t k, std::size_t l) : benchmark(k), competitor(l) {
  require(k != l, ErrorKind::InvalidArgument, "pair: benchmark and competitor must differ");
}

void PanelSlice::validate(const ForecastPanel& panel) const {
  require(benchmark < panel.series_count() && competitor < panel.series_count(),
          ErrorKind::InvalidArgument, "pair index out of range");
}

std::vector<PanelSlice> default_pairs(const ForecastPanel& panel, std::size_t benchmark,
                                      bool all_pairs) {
  const std::size_t K = panel.series_count();
  require(K >= 2, ErrorKind::InvalidArgument, "need at least two forecast series");
  require(benchmark < K, ErrorKind::InvalidArgument, "benchmark index out of range");
  std::vector<PanelSlice> out;
  if (all_pairs) {
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t l = 0; l < K; ++l)
        if (k != l) out.emplace_back(k, l);
  } else {
    for (std::size_t l = 0; l < K; ++l)
      if (l != benchmark) out.emplace_back(benchmark, l);
  }
  return out;
}

CsvTable read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool any = false;
  char c;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A blank line yields a single empty field; skip it.
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  require(!in_quotes, ErrorKind::Parse, "csv: unterminated quoted field");
  if (any && (field_started || !field.empty() || !record.empty())) end_record();
  require(!records.empty(), ErrorKind::Schema, "csv: missing header row");

  CsvTable table;
  table.header = std::move(records.front());
  if (!table.header.empty() && table.header[0].rfind("\xEF\xBB\xBF", 0) == 0)
    table.header[0].erase(0, 3);
  for (std::size_t i = 1; i < records.size(); ++i) {
    require(records[i].size() == table.header.size(), ErrorKind::Parse,
            "csv: row " + std::to_string(i) + " has " + std::to_string(records[i].size()) +
                " fields, header has " + std::to_string(table.header.size()));
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

namespace {

std::size_t column_index(const CsvTable& table, const std::string& column) {
  for (std::size_t j = 0; j < table.header.size(); ++j)
    if (table.header[j] == column) return j;
  fail(ErrorKind::Schema, "csv: missing column '" + column + "'");
}

double parse_real(const std::string& cell, const std::string& column, std::size_t row) {
  std::size_t b = 0, e = cell.size();
  while (b < e && (cell[b] == ' ' || cell[b] == '\t')) ++b;
  while (e > b && (cell[e - 1] == ' ' || cell[e - 1] == '\t')) --e;
  double v = 0.0;
  const char* first = cell.data() + b;
  const char* last = cell.data() + e;
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (first == last || ec != std::errc() || ptr != last || !std::isfinite(v))
    fail(ErrorKind::Parse, "csv: row " + std::to_string(row) + ", column '" + column +
                               "': cannot parse '" + cell + "' as a finite real");
  return v;
}

}  // namespace

std::vector<double> numeric_column(const CsvTable& table, const std::string& column) {
  const std::size_t j = column_index(table, column);
  std::vector<double> out(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    out[i] = parse_real(table.rows[i][j], column, i + 1);
  return out;
}

ForecastPanel read_panel_csv(std::istream& in, const std::string& realized_column,
                             const std::vector<std::string>& forecast_columns,
                             const std::optional<std::string>& label_column) {
  const CsvTable table = read_csv(in);
  // Check the schema before looking at any data.
  column_index(table, realized_column);
  for (const auto& c : forecast_columns) column_index(table, c);
  if (label_column) column_index(table, *label_column);
  require(!forecast_columns.empty(), ErrorKind::InvalidArgument, "no forecast columns selected");
  require(!table.rows.empty(), ErrorKind::EmptyInput, "csv: no data rows");

  std::vector<double> y = numeric_column(table, realized_column);
  std::vector<std::vector<double>> f;
  for (const auto& c : forecast_columns) f.push_back(numeric_column(table, c));
  std::vector<std::string> labels;
  if (label_column) {
    const std::size_t j = column_index(table, *label_column);
    for (const auto& r : table.rows) labels.push_back(r[j]);
  }
  return ForecastPanel(std::move(y), forecast_columns, std::move(f), std::nullopt, std::move(labels));
}

ForecastPanel read_panel_csv(const std::string& path, const std::string& realized_column,
                             const std::vector<std::string>& forecast_columns,
                             const std::optional<std::string>& label_column) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "'");
  return read_panel_csv(in, realized_column, forecast_columns, label_column);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace fcmp

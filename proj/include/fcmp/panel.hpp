#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace fcmp {

// Realizations and K aligned forecast series. Row t of every forecast targets
// realized[t]. Immutable once built.
class ForecastPanel {
 public:
  ForecastPanel(std::vector<double> realized, std::vector<std::string> names,
                std::vector<std::vector<double>> forecasts,
                std::optional<std::string> horizon_label = std::nullopt,
                std::vector<std::string> row_labels = {});

  std::size_t size() const { return realized_.size(); }
  std::size_t series_count() const { return forecasts_.size(); }
  const std::vector<double>& realized() const { return realized_; }
  const std::vector<double>& forecast(std::size_t k) const { return forecasts_.at(k); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t k) const { return names_.at(k); }
  std::size_t index_of(const std::string& name) const;
  const std::optional<std::string>& horizon_label() const { return horizon_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }

  // Copy with rows taken in the given order (indices may repeat).
  ForecastPanel resample(const std::vector<std::size_t>& rows) const;

 private:
  std::vector<double> realized_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> forecasts_;
  std::optional<std::string> horizon_;
  std::vector<std::string> row_labels_;
};

// Benchmark k against competitor l.
struct PanelSlice {
  std::size_t benchmark;
  std::size_t competitor;

  PanelSlice(std::size_t k, std::size_t l);
  PanelSlice reversed() const { return PanelSlice(competitor, benchmark); }
  void validate(const ForecastPanel& panel) const;
  bool operator==(const PanelSlice&) const = default;
};

// Benchmark against each other series, or every ordered pair when all_pairs.
std::vector<PanelSlice> default_pairs(const ForecastPanel& panel, std::size_t benchmark,
                                      bool all_pairs = false);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
CsvTable read_csv(std::istream& in);

ForecastPanel read_panel_csv(std::istream& in, const std::string& realized_column,
                             const std::vector<std::string>& forecast_columns,
                             const std::optional<std::string>& label_column = std::nullopt);
ForecastPanel read_panel_csv(const std::string& path, const std::string& realized_column,
                             const std::vector<std::string>& forecast_columns,
                             const std::optional<std::string>& label_column = std::nullopt);

// Column of reals from an already parsed table; parse errors cite the data row (1-based).
std::vector<double> numeric_column(const CsvTable& table, const std::string& column);

std::string csv_escape(const std::string& field);

}  // namespace fcmp

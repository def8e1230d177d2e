#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace twinbeam {

/// Null (undefined value), number, or text label.
using Cell = std::variant<std::monostate, double, std::string>;

struct Column {
  std::string name;
  std::vector<Cell> values;
};

class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> names);

  void add_row(std::vector<Cell> row);

  const std::vector<Column>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().values.size(); }
  const Column& column(std::string_view name) const;
  /// Numeric entry; throws on null or text.
  double number(std::string_view name, std::size_t row) const;

  /// Returns a table with the named columns only, metadata copied.
  ResultTable select(const std::vector<std::string>& names) const;

  nlohmann::ordered_json metadata;

 private:
  std::vector<Column> columns_;
};

enum class Format { csv, json };

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

std::string to_csv(const ResultTable& table);
std::string to_json_text(const ResultTable& table);

/// Writes `table` to `path`; byte-deterministic for identical tables.
void emit(const ResultTable& table, Format format, const std::filesystem::path& path);

}  // namespace twinbeam

#include "twinbeam/result_table.hpp"

#include "twinbeam/error.hpp"

#include <array>
#include <charconv>
#include <fstream>

namespace twinbeam {

ResultTable::ResultTable(std::vector<std::string> names) {
  columns_.reserve(names.size());
  for (auto& name : names) columns_.push_back(Column{std::move(name), {}});
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw InvalidArgument("ResultTable::add_row: row width does not match columns");
  for (std::size_t k = 0; k < row.size(); ++k) columns_[k].values.push_back(std::move(row[k]));
}

const Column& ResultTable::column(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("ResultTable: no column named " + std::string(name));
}

double ResultTable::number(std::string_view name, std::size_t row) const {
  const Column& c = column(name);
  if (row >= c.values.size()) throw InvalidArgument("ResultTable: row out of range");
  if (const double* x = std::get_if<double>(&c.values[row])) return *x;
  throw InvalidArgument("ResultTable: entry in " + std::string(name) + " is not a number");
}

ResultTable ResultTable::select(const std::vector<std::string>& names) const {
  ResultTable out;
  for (const auto& name : names) out.columns_.push_back(column(name));
  out.metadata = metadata;
  return out;
}

std::string format_number(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw InvalidArgument("format_number: conversion failed");
  return std::string(buf.data(), end);
}

namespace {

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string csv_cell(const Cell& cell) {
  if (const double* x = std::get_if<double>(&cell)) return format_number(*x);
  if (const std::string* s = std::get_if<std::string>(&cell)) return csv_field(*s);
  return {};
}

}  // namespace

std::string to_csv(const ResultTable& table) {
  std::string out;
  const auto& columns = table.columns();
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (k > 0) out += ',';
    out += csv_field(columns[k].name);
  }
  out += "\r\n";
  for (std::size_t row = 0; row < table.rows(); ++row) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (k > 0) out += ',';
      out += csv_cell(columns[k].values[row]);
    }
    out += "\r\n";
  }
  return out;
}

std::string to_json_text(const ResultTable& table) {
  nlohmann::ordered_json root;
  root["metadata"] = table.metadata.is_null() ? nlohmann::ordered_json::object() : table.metadata;
  auto& columns = root["columns"];
  columns = nlohmann::ordered_json::object();
  for (const auto& c : table.columns()) {
    auto values = nlohmann::ordered_json::array();
    for (const auto& cell : c.values) {
      if (const double* x = std::get_if<double>(&cell)) {
        values.push_back(*x);  // non-finite values serialize as null
      } else if (const std::string* s = std::get_if<std::string>(&cell)) {
        values.push_back(*s);
      } else {
        values.push_back(nullptr);
      }
    }
    columns[c.name] = std::move(values);
  }
  return root.dump(2) + "\n";
}

void emit(const ResultTable& table, Format format, const std::filesystem::path& path) {
  const std::string bytes = format == Format::csv ? to_csv(table) : to_json_text(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace twinbeam

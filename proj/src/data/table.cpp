#include "fairspec/data/table.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "fairspec/error.hpp"

namespace fairspec::data
{

namespace
{

bool is_decimal(std::string_view s)
{
  // [+-]? (digits [. digits*]? | . digits) ([eE] [+-]? digits)?
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t int_digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++int_digits;
  std::size_t frac_digits = 0;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac_digits;
  }
  if (int_digits + frac_digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == s.size();
}

}  // namespace

Cell Cell::num(double v, std::string raw)
{
  Cell c;
  c.type = Type::Number;
  c.number = v;
  c.text = std::move(raw);
  return c;
}

Cell Cell::parse(std::string raw)
{
  if (raw.empty()) return missing();
  if (is_decimal(raw)) {
    std::string_view body = raw;
    if (body.front() == '+') body.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec == std::errc{} && ptr == body.data() + body.size()) return num(v, std::move(raw));
  }
  return str(std::move(raw));
}

bool operator==(const Cell & a, const Cell & b)
{
  if (a.type != b.type || a.text != b.text) return false;
  return a.type != Cell::Type::Number || a.number == b.number;
}

Table::Table(std::vector<std::string> header) : header_(std::move(header))
{
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (std::find(header_.begin(), header_.begin() + static_cast<std::ptrdiff_t>(i), header_[i]) !=
        header_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw Error(ErrorCode::DuplicateColumn, "duplicate column '" + header_[i] + "'");
    }
  }
  columns_.resize(header_.size());
}

void Table::add_row(std::vector<Cell> row)
{
  if (row.size() != header_.size()) {
    throw Error(
      ErrorCode::CsvError, "row has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(header_.size()));
  }
  for (std::size_t c = 0; c < row.size(); ++c) columns_[c].push_back(std::move(row[c]));
  ++rows_;
}

void Table::add_column(std::string name, std::vector<Cell> cells)
{
  if (column_index(name)) throw Error(ErrorCode::DuplicateColumn, "duplicate column '" + name + "'");
  if (cells.size() != rows_) {
    throw Error(ErrorCode::CsvError, "column '" + name + "' has the wrong number of cells");
  }
  header_.push_back(std::move(name));
  columns_.push_back(std::move(cells));
}

std::optional<std::size_t> Table::column_index(std::string_view name) const
{
  auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header_.begin());
}

std::size_t Table::require_column(std::string_view name) const
{
  if (auto idx = column_index(name)) return *idx;
  throw Error(ErrorCode::MissingColumn, "dataset has no column '" + std::string(name) + "'");
}

Table Table::select_rows(const std::vector<std::size_t> & rows) const
{
  Table out(header_);
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    out.columns_[c].reserve(rows.size());
    for (std::size_t r : rows) out.columns_[c].push_back(columns_[c][r]);
  }
  out.rows_ = rows.size();
  return out;
}

bool operator==(const Table & a, const Table & b)
{
  return a.header_ == b.header_ && a.rows_ == b.rows_ && a.columns_ == b.columns_;
}

Table parse_csv(std::string_view text)
{
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_record = [&] {
    if (field_started || !record.empty()) {
      record.push_back(std::move(field));
      records.push_back(std::move(record));
    }
    record.clear();
    field.clear();
    field_started = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        in_quotes = false;
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      end_record();
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      field += c;
      field_started = true;
    }
    ++i;
  }
  if (in_quotes) {
    throw Error(
      ErrorCode::CsvError,
      "unterminated quoted field in record " + std::to_string(records.size() + 1));
  }
  end_record();

  if (records.empty()) throw Error(ErrorCode::CsvError, "missing header row");
  for (const auto & name : records.front()) {
    if (name.rfind("__", 0) == 0) {
      throw Error(
        ErrorCode::ReservedColumnName,
        "column '" + name + "' uses the reserved '__' prefix");
    }
  }
  Table table(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto & rec = records[r];
    if (rec.size() != table.column_count()) {
      // Record numbers are 1-based and count the header.
      throw Error(
        ErrorCode::CsvError, "row " + std::to_string(r + 1) + " has " + std::to_string(rec.size()) +
                               " cells, header has " + std::to_string(table.column_count()));
    }
    std::vector<Cell> cells;
    cells.reserve(rec.size());
    for (auto & f : rec) cells.push_back(Cell::parse(std::move(f)));
    table.add_row(std::move(cells));
  }
  return table;
}

Table load_table(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read dataset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "error reading dataset '" + path.string() + "'");
  try {
    return parse_csv(buf.str());
  } catch (const Error & e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

}  // namespace fairspec::data

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairspec::data
{

/// One CSV cell. `text` always holds the raw cell contents.
struct Cell
{
  enum class Type : unsigned char { Missing, Number, Text };
  Type type = Type::Missing;
  double number = 0;
  std::string text;

  static Cell missing() { return {}; }
  static Cell num(double v, std::string raw = {});
  static Cell str(std::string s) { return {Type::Text, 0, std::move(s)}; }
  /// Number when the whole cell parses as a decimal number, Missing when empty, else Text.
  static Cell parse(std::string raw);

  [[nodiscard]] bool is_missing() const noexcept { return type == Type::Missing; }
  [[nodiscard]] bool is_number() const noexcept { return type == Type::Number; }
};

/// Column-major table with unique column names. Immutable once built.
class Table
{
public:
  Table() = default;
  /// Throws DuplicateColumn on repeated names.
  explicit Table(std::vector<std::string> header);

  /// Throws CsvError if the row width does not match the header.
  void add_row(std::vector<Cell> row);
  /// Appends a column of exactly row_count() cells; throws DuplicateColumn on a name clash.
  void add_column(std::string name, std::vector<Cell> cells);

  [[nodiscard]] const std::vector<std::string> & header() const noexcept { return header_; }
  [[nodiscard]] std::size_t row_count() const noexcept { return rows_; }
  [[nodiscard]] std::size_t column_count() const noexcept { return header_.size(); }
  [[nodiscard]] std::optional<std::size_t> column_index(std::string_view name) const;
  /// Throws MissingColumn.
  [[nodiscard]] std::size_t require_column(std::string_view name) const;
  [[nodiscard]] const std::vector<Cell> & column(std::size_t idx) const { return columns_[idx]; }
  [[nodiscard]] const Cell & cell(std::size_t row, std::size_t col) const
  {
    return columns_[col][row];
  }

  /// New table holding the given rows, in the given order.
  [[nodiscard]] Table select_rows(const std::vector<std::size_t> & rows) const;

  friend bool operator==(const Table & a, const Table & b);

private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> columns_;
  std::size_t rows_ = 0;
};

bool operator==(const Cell & a, const Cell & b);

/// RFC-4180 CSV: first record is the header; `\n` or `\r\n` line endings; blank lines
/// are ignored. Rejects ragged rows, duplicate and `__`-prefixed column names.
Table parse_csv(std::string_view text);

/// Reads and parses a CSV file. Throws IoError when unreadable.
Table load_table(const std::filesystem::path & path);

}  // namespace fairspec::data

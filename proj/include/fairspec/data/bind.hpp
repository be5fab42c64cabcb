#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fairspec/data/table.hpp"
#include "fairspec/model/spec_model.hpp"

namespace fairspec::data
{

/// Dataset after applying a binding: only rows with every referenced cell present, plus
/// 0/1 indicator columns `__outcome`, `__truth` (when a ground-truth column is bound),
/// `__sv_<variable>_<value>`, `__priv` and `__unpriv`.
struct BoundTable
{
  Table table;
  std::size_t rows_skipped = 0;

  [[nodiscard]] std::size_t rows_used() const noexcept { return table.row_count(); }

  friend bool operator==(const BoundTable &, const BoundTable &) = default;
};

/// Nearest-rank quantile: the element at 1-based position ceil(p * n) of the sorted values.
/// Throws EmptyColumn on an empty list.
double quantile_threshold(std::span<const double> values, double p);

/// 1-based nearest rank ceil(p * n), clamped to [1, n]. The product is nudged down by 1e-9
/// so that decimal fractions like 0.7 * 10 land on 7 rather than 8.
std::size_t nearest_rank(double p, std::size_t n);

/// Non-missing values of a column. Throws NonNumericColumn if any of them is text.
std::vector<double> numeric_values(const Table & table, std::size_t column);

/// Row mask of cells matching the selector. Relative selectors are thresholded over all
/// non-missing cells of the column; missing cells never match.
std::vector<bool> select_rows(
  const Table & table, std::size_t column, const model::ValueSelector & selector);

/// Materializes the indicator columns for one analysis. Throws MissingColumn when the binding
/// names a column the table lacks and TypeMismatch for relative selectors on text columns.
BoundTable bind(const Table & table, const model::BiasSpec & bias, const model::DatasetBinding & binding);

}  // namespace fairspec::data

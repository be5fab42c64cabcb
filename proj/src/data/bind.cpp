#include "fairspec/data/bind.hpp"

#include <algorithm>
#include <cmath>

#include "fairspec/error.hpp"

namespace fairspec::data
{

namespace
{

constexpr double k_rank_slack = 1e-9;

std::vector<Cell> indicator_cells(const std::vector<bool> & mask, const std::vector<std::size_t> & rows)
{
  std::vector<Cell> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(mask[r] ? Cell::num(1, "1") : Cell::num(0, "0"));
  return out;
}

}  // namespace

std::size_t nearest_rank(double p, std::size_t n)
{
  const double k = std::ceil(p * static_cast<double>(n) - k_rank_slack);
  if (!(k >= 1.0)) return 1;
  return std::min(n, static_cast<std::size_t>(k));
}

double quantile_threshold(std::span<const double> values, double p)
{
  if (values.empty()) throw Error(ErrorCode::EmptyColumn, "cannot take a quantile of an empty column");
  std::vector<double> sorted(values.begin(), values.end());
  const std::size_t k = nearest_rank(p, sorted.size());
  auto nth = sorted.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(sorted.begin(), nth, sorted.end());
  return *nth;
}

std::vector<double> numeric_values(const Table & table, std::size_t column)
{
  std::vector<double> out;
  for (const Cell & c : table.column(column)) {
    if (c.is_missing()) continue;
    if (!c.is_number()) {
      throw Error(
        ErrorCode::NonNumericColumn,
        "column '" + table.header()[column] + "' holds non-numeric value '" + c.text + "'");
    }
    out.push_back(c.number);
  }
  return out;
}

std::vector<bool> select_rows(
  const Table & table, std::size_t column, const model::ValueSelector & selector)
{
  using K = model::ValueSelector::Kind;
  const auto & cells = table.column(column);
  std::vector<bool> mask(cells.size(), false);
  if (selector.kind == K::Absolute) {
    if (const auto * num = std::get_if<double>(&selector.literal)) {
      for (std::size_t r = 0; r < cells.size(); ++r) {
        mask[r] = cells[r].is_number() && cells[r].number == *num;
      }
    } else {
      const auto & text = std::get<std::string>(selector.literal);
      for (std::size_t r = 0; r < cells.size(); ++r) {
        mask[r] = !cells[r].is_missing() && cells[r].text == text;
      }
    }
    return mask;
  }

  std::vector<double> values;
  try {
    values = numeric_values(table, column);
  } catch (const Error & e) {
    throw Error(ErrorCode::TypeMismatch, "relative selector on text data: " + e.detail());
  }
  if (values.empty()) return mask;
  if (selector.kind == K::RelativeTop) {
    const double q = quantile_threshold(values, selector.fraction);
    for (std::size_t r = 0; r < cells.size(); ++r) mask[r] = cells[r].is_number() && cells[r].number > q;
  } else {
    const double q = quantile_threshold(values, 1.0 - selector.fraction);
    for (std::size_t r = 0; r < cells.size(); ++r) mask[r] = cells[r].is_number() && cells[r].number < q;
  }
  return mask;
}

BoundTable bind(const Table & table, const model::BiasSpec & bias, const model::DatasetBinding & binding)
{
  std::vector<std::size_t> referenced;
  auto reference = [&](const std::string & name) {
    const std::size_t idx = table.require_column(name);
    if (std::find(referenced.begin(), referenced.end(), idx) == referenced.end()) {
      referenced.push_back(idx);
    }
    return idx;
  };
  const std::size_t outcome_col = reference(binding.outcome.column);
  std::optional<std::size_t> truth_col;
  if (binding.prediction_column) reference(*binding.prediction_column);
  if (binding.ground_truth_column) truth_col = reference(*binding.ground_truth_column);
  std::vector<std::size_t> var_cols;
  for (const auto & vb : binding.variables) var_cols.push_back(reference(vb.column));
  for (const auto & other : binding.other_columns) reference(other);

  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const bool complete = std::none_of(referenced.begin(), referenced.end(), [&](std::size_t c) {
      return table.cell(r, c).is_missing();
    });
    if (complete) kept.push_back(r);
  }

  BoundTable out;
  out.table = table.select_rows(kept);
  out.rows_skipped = table.row_count() - kept.size();

  out.table.add_column(
    std::string(model::k_outcome_column),
    indicator_cells(select_rows(table, outcome_col, binding.outcome.positive), kept));
  if (truth_col) {
    out.table.add_column(
      std::string(model::k_truth_column),
      indicator_cells(select_rows(table, *truth_col, binding.outcome.positive), kept));
  }

  // Value masks over the full table, keyed by (variable, value).
  std::vector<std::pair<std::string, std::vector<bool>>> value_masks;
  for (std::size_t i = 0; i < binding.variables.size(); ++i) {
    const auto & vb = binding.variables[i];
    for (const auto & v : vb.values) {
      auto mask = select_rows(table, var_cols[i], v.selector);
      const std::string name = model::indicator_column(vb.variable, v.value);
      out.table.add_column(name, indicator_cells(mask, kept));
      value_masks.emplace_back(name, std::move(mask));
    }
  }

  auto group_mask = [&](const model::SensitiveGroup & g) {
    std::vector<bool> mask(table.row_count(), true);
    for (const auto & m : g.members) {
      const std::string name = model::indicator_column(m.variable, m.value);
      auto it = std::find_if(value_masks.begin(), value_masks.end(), [&](const auto & p) {
        return p.first == name;
      });
      if (it == value_masks.end()) {
        throw Error(
          ErrorCode::MissingColumn,
          "no binding for group member " + m.variable + " = " + m.value);
      }
      for (std::size_t r = 0; r < mask.size(); ++r) mask[r] = mask[r] && it->second[r];
    }
    return mask;
  };
  out.table.add_column(std::string(model::k_privileged_column), indicator_cells(group_mask(bias.privileged), kept));
  out.table.add_column(
    std::string(model::k_unprivileged_column), indicator_cells(group_mask(bias.unprivileged), kept));
  return out;
}

}  // namespace fairspec::data

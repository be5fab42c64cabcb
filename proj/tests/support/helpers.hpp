#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fairspec/cli/cli.hpp"
#include "fairspec/data/bind.hpp"
#include "fairspec/model/validate.hpp"
#include "oracle.hpp"

namespace testing
{

inline std::filesystem::path source_path(const std::string & rel)
{
  return std::filesystem::path(FAIRSPEC_SOURCE_DIR) / rel;
}

inline std::string read_text(const std::filesystem::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline const std::vector<std::string> & bundled_specs()
{
  static const std::vector<std::string> specs = {
    "usecases/compas/compas.fspec",
    "usecases/german_biased/german_biased.fspec",
    "usecases/german_debiased/german_debiased.fspec",
    "usecases/resyduo/resyduo.fspec",
    "usecases/tpl/tpl.fspec",
    "tests/fixtures/toy10.fspec",
  };
  return specs;
}

inline fairspec::model::SpecModel load_model(const std::string & rel)
{
  const auto path = source_path(rel);
  auto r = fairspec::model::load_spec(read_text(path), path.string());
  if (!r.ok()) throw std::runtime_error("fixture spec does not validate: " + rel);
  return std::move(*r.value);
}

// Indicator-only bound table, as bind() would produce it.
inline fairspec::data::BoundTable bound_from_rows(const std::vector<oracle::Row> & rows)
{
  using fairspec::data::Cell;
  fairspec::data::Table t({"__outcome", "__truth", "__priv", "__unpriv"});
  for (const auto & r : rows) {
    t.add_row({Cell::num(r.yhat), Cell::num(r.y), Cell::num(r.priv ? 1 : 0), Cell::num(r.unpriv ? 1 : 0)});
  }
  return {std::move(t), 0};
}

// Rows with both groups non-empty; priv and unpriv are disjoint.
inline std::vector<oracle::Row> random_rows(std::mt19937_64 & rng, std::size_t max_rows = 60)
{
  std::uniform_int_distribution<std::size_t> size(4, max_rows);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<int> grp(0, 2);
  std::vector<oracle::Row> rows(size(rng));
  for (auto & r : rows) {
    r.y = bit(rng);
    r.yhat = bit(rng);
    const int g = grp(rng);
    r.priv = g == 0;
    r.unpriv = g == 1;
  }
  rows[0].priv = true, rows[0].unpriv = false;
  rows[1].priv = false, rows[1].unpriv = true;
  return rows;
}

struct CliResult
{
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args)
{
  args.insert(args.begin(), "fairspec");
  std::ostringstream out;
  std::ostringstream err;
  const int code = fairspec::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

inline std::filesystem::path scratch_dir(const std::string & name)
{
  auto dir = std::filesystem::temp_directory_path() / ("fairspec_test_" + std::to_string(getpid()) + "_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing

#include "fairspec/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "fairspec/codegen/codegen.hpp"
#include "fairspec/error.hpp"
#include "fairspec/metrics/evaluate.hpp"
#include "fairspec/model/validate.hpp"

namespace fairspec::cli
{

namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

struct Styler
{
  bool color;

  std::string error(std::string_view s) const { return color ? "\x1b[1;31m" + std::string(s) + "\x1b[0m" : std::string(s); }
  std::string warning(std::string_view s) const
  {
    return color ? "\x1b[1;33m" + std::string(s) + "\x1b[0m" : std::string(s);
  }
};

bool is_io_error(ErrorCode c)
{
  return c == ErrorCode::IoError || c == ErrorCode::CsvError || c == ErrorCode::DuplicateColumn ||
         c == ErrorCode::ReservedColumnName;
}

std::optional<std::string> read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

// Reads and validates a spec. Returns an exit code on failure.
std::variant<model::SpecModel, int> load(const std::string & path, std::ostream & err, const Styler & st)
{
  const auto text = read_file(path);
  if (!text || fs::is_directory(path)) {
    err << st.error("error") << ": cannot read spec '" << path << "'\n";
    return k_io_error;
  }
  auto result = model::load_spec(*text, path);
  for (const auto & d : result.diagnostics) err << format_diagnostic(d, st.color) << "\n";
  if (!result.ok()) return k_spec_error;
  return std::move(*result.value);
}

json threshold_json(const model::Comparator & c)
{
  if (c.op == model::Comparator::Op::Range) return json::array({c.lower, c.upper});
  return c.value;
}

json report_json(const metrics::EvaluationReport & r)
{
  json j;
  j["analysis"] = r.analysis;
  j["metric"] = r.metric;
  j["value"] = r.value ? json(*r.value) : json(nullptr);
  j["comparator"] = std::string(model::to_string(r.comparator.op));
  j["threshold"] = threshold_json(r.comparator);
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.verdict ? json(std::string(metrics::to_string(*r.verdict))) : json(nullptr);
  j["rows_used"] = r.rows_used;
  j["rows_skipped"] = r.rows_skipped;
  j["warnings"] = r.warnings;
  return j;
}

int cmd_validate(const std::string & spec, std::ostream & err, const Styler & st)
{
  const auto loaded = load(spec, err, st);
  if (const auto * code = std::get_if<int>(&loaded)) return *code;
  return k_ok;
}

int cmd_eval(
  const std::string & spec, const std::optional<std::string> & only, const std::optional<std::string> & json_path,
  bool fail_on_bias, std::ostream & out, std::ostream & err, const Styler & st)
{
  const auto loaded = load(spec, err, st);
  if (const auto * code = std::get_if<int>(&loaded)) return *code;
  const auto & model = std::get<model::SpecModel>(loaded);

  std::vector<model::SpecModel::AnalysisRef> selected;
  if (only) {
    const auto ref = model.find_analysis(*only);
    if (!ref) {
      err << st.error("error[UnknownAnalysis]") << ": no analysis named '" << *only << "'\n";
      return k_spec_error;
    }
    selected.push_back(*ref);
  } else {
    selected = model.analyses();
  }

  const fs::path base = fs::path(spec).parent_path();
  bool io_failed = false;
  bool metric_failed = false;
  bool biased = false;
  json reports = json::array();
  for (const auto & ref : selected) {
    std::vector<metrics::EvaluationReport> results;
    try {
      results = metrics::evaluate_analysis(model, ref.analysis->name, base);
    } catch (const Error & e) {
      (is_io_error(e.code()) ? io_failed : metric_failed) = true;
      err << st.error("error") << ": analysis '" << ref.analysis->name << "': " << e.what() << "\n";
      for (const auto & m : ref.analysis->metrics) {
        metrics::EvaluationReport r;
        r.analysis = ref.analysis->name;
        r.metric = m.name;
        r.comparator = m.comparator;
        r.tolerance = m.tolerance;
        r.warnings.push_back(e.what());
        r.error = e.code();
        reports.push_back(report_json(r));
      }
      continue;
    }
    for (const auto & r : results) {
      for (const auto & w : r.warnings) {
        err << st.warning("warning") << ": " << r.analysis << "/" << r.metric << ": " << w << "\n";
      }
      if (r.value && r.verdict) {
        out << metrics::format_value(*r.value) << "\n" << metrics::to_string(*r.verdict) << "\n";
        biased = biased || *r.verdict == metrics::Verdict::Biased;
      } else {
        metric_failed = true;
      }
      reports.push_back(report_json(r));
    }
  }

  if (json_path) {
    std::ofstream f(*json_path, std::ios::binary | std::ios::trunc);
    if (f) f << reports.dump(2) << "\n";
    f.close();
    if (!f) {
      err << st.error("error") << ": cannot write report '" << *json_path << "'\n";
      io_failed = true;
    }
  }

  if (io_failed) return k_io_error;
  if (metric_failed) return k_metric_error;
  if (fail_on_bias && biased) return k_biased;
  return k_ok;
}

int cmd_gen(const std::string & spec, const std::string & out_dir, std::ostream & out, std::ostream & err, const Styler & st)
{
  const auto loaded = load(spec, err, st);
  if (const auto * code = std::get_if<int>(&loaded)) return *code;
  const auto & model = std::get<model::SpecModel>(loaded);
  try {
    const auto artifacts = codegen::generate(model, out_dir, fs::path(spec).parent_path());
    for (const auto & a : artifacts) out << (fs::path(out_dir) / a.relative_path).generic_string() << "\n";
  } catch (const Error & e) {
    err << st.error("error") << ": " << e.what() << "\n";
    return e.code() == ErrorCode::IoError ? k_io_error : k_spec_error;
  }
  return k_ok;
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err, Options options)
{
  const Styler st{options.color && std::getenv("FAIRSPEC_NO_COLOR") == nullptr};

  CLI::App app{"Declarative fairness specifications: validate, evaluate, generate", "fairspec"};
  app.require_subcommand(1);

  std::string spec;
  std::optional<std::string> analysis;
  std::optional<std::string> json_path;
  bool fail_on_bias = false;
  std::string out_dir;

  auto * validate = app.add_subcommand("validate", "Parse and validate a spec");
  validate->add_option("spec", spec, "Spec file")->required();

  auto * eval = app.add_subcommand("eval", "Evaluate metrics and print value/verdict lines");
  eval->add_option("spec", spec, "Spec file")->required();
  eval->add_option("--analysis", analysis, "Only evaluate this analysis");
  eval->add_option("--json", json_path, "Write a JSON report to this path");
  eval->add_flag("--fail-on-bias", fail_on_bias, "Exit 1 if any verdict is Biased");

  auto * gen = app.add_subcommand("gen", "Generate assessment scripts");
  gen->add_option("spec", spec, "Spec file")->required();
  gen->add_option("--out", out_dir, "Output directory")->required();

  std::vector<const char *> argv;
  for (const auto & a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? k_ok : k_spec_error;
  }

  if (validate->parsed()) return cmd_validate(spec, err, st);
  if (eval->parsed()) return cmd_eval(spec, analysis, json_path, fail_on_bias, out, err, st);
  return cmd_gen(spec, out_dir, out, err, st);
}

}  // namespace fairspec::cli

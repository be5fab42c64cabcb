#include "fairspec/codegen/codegen.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "fairspec/error.hpp"

namespace fairspec::codegen
{

namespace
{

namespace fs = std::filesystem;
using model::BuiltinMetric;

constexpr std::array<std::string_view, 35> k_python_keywords = {
  "False", "None",   "True",    "and",      "as",       "assert", "async",  "await",    "break",
  "class", "continue", "def",   "del",      "elif",     "else",   "except", "finally",  "for",
  "from",  "global", "if",      "import",   "in",       "is",     "lambda", "nonlocal", "not",
  "or",    "pass",   "raise",   "return",   "try",      "while",  "with",   "yield"};

std::string py_str(std::string_view s)
{
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\x%02x", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string py_float(double v)
{
  std::string s = format_number(v);
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

std::string py_literal(const Literal & lit)
{
  if (const auto * d = std::get_if<double>(&lit)) return format_number(*d);
  return py_str(std::get<std::string>(lit));
}

std::string py_selector(const model::ValueSelector & s)
{
  switch (s.kind) {
    case model::ValueSelector::Kind::Absolute: return py_literal(s.literal);
    case model::ValueSelector::Kind::RelativeTop: return "top(" + format_number(s.fraction) + ")";
    case model::ValueSelector::Kind::RelativeBottom: return "bottom(" + format_number(s.fraction) + ")";
  }
  return "None";
}

// Columns inside expression strings are parsed by the runtime as Python names.
void require_python_names(const std::vector<std::string> & columns, std::string_view metric)
{
  for (const auto & c : columns) {
    const bool keyword =
      std::find(k_python_keywords.begin(), k_python_keywords.end(), c) != k_python_keywords.end();
    if (keyword) {
      throw Error(
        ErrorCode::UnsupportedConstruct,
        "metric '" + std::string(metric) + "' references column '" + c +
          "', which is a reserved word in generated scripts");
    }
  }
}

std::string expr_arg(const Predicate & p) { return py_str(to_source(p)); }
std::string expr_arg(const RowExpr & e) { return py_str(to_source(e)); }

int precedence(const FunctionExpr & f)
{
  if (f.kind != FunctionExpr::Kind::Binary) return 3;
  return f.op == ArithOp::Add || f.op == ArithOp::Sub ? 1 : 2;
}

std::string render_function(const FunctionExpr & f)
{
  using K = FunctionExpr::Kind;
  switch (f.kind) {
    case K::Constant: return format_number(f.number);
    case K::GroupSize: return "metrics.group_size(" + expr_arg(*f.predicate) + ")";
    case K::Probability: {
      std::string s = "metrics.probability(" + expr_arg(*f.predicate);
      if (f.given) s += ", " + expr_arg(*f.given);
      return s + ")";
    }
    case K::Expected: {
      std::string s = "metrics.expected_value(" + expr_arg(*f.row);
      if (f.given) s += ", " + expr_arg(*f.given);
      return s + ")";
    }
    case K::Sum: return "metrics.summation(" + expr_arg(*f.predicate) + ", " + expr_arg(*f.row) + ")";
    case K::Log:
      return "metrics.logarithm(" + render_function(f.operands[0]) + ", " + format_number(f.number) + ")";
    case K::Binary: break;
  }
  const int prec = precedence(f);
  std::string lhs = render_function(f.operands[0]);
  std::string rhs = render_function(f.operands[1]);
  if (precedence(f.operands[0]) < prec) lhs = "(" + lhs + ")";
  if (precedence(f.operands[1]) <= prec) rhs = "(" + rhs + ")";
  return lhs + " " + to_char(f.op) + " " + rhs;
}

std::string render_metric_call(const model::MetricSpec & m)
{
  if (const auto * call = std::get_if<model::BuiltinCall>(&m.body)) {
    std::string args;
    for (std::size_t i = 0; i < call->params.size(); ++i) {
      if (i) args += ", ";
      args += format_number(call->params[i]);
    }
    return "metrics." + std::string(model::to_string(call->metric)) + "(" + args + ")";
  }
  const auto & f = std::get<FunctionExpr>(m.body);
  require_python_names(referenced_columns(f), m.name);
  return render_function(f);
}

std::string render_threshold(const model::Comparator & c)
{
  if (c.op == model::Comparator::Op::Range) {
    return "(\"in\", (" + py_float(c.lower) + ", " + py_float(c.upper) + "))";
  }
  return "(" + py_str(model::to_string(c.op)) + ", " + py_float(c.value) + ")";
}

std::string render_group(const model::BiasSpec & bias, const model::DatasetBinding & ds, const model::SensitiveGroup & g)
{
  std::set<std::string> seen;
  std::string out = "{";
  for (std::size_t i = 0; i < g.members.size(); ++i) {
    const auto & m = g.members[i];
    const auto * vb = ds.find(m.variable);
    const auto it = vb ? std::find_if(vb->values.begin(), vb->values.end(), [&](const auto & v) {
      return v.value == m.value;
    }) : std::vector<model::ValueBinding>::const_iterator{};
    if (!vb || it == vb->values.end()) {
      throw Error(
        ErrorCode::UnsupportedConstruct,
        "bias '" + bias.name + "': no binding for group member " + m.variable + " = " + m.value);
    }
    if (!seen.insert(vb->column).second) {
      throw Error(
        ErrorCode::UnsupportedConstruct,
        "bias '" + bias.name + "': group uses column '" + vb->column + "' more than once");
    }
    if (i) out += ", ";
    out += py_str(vb->column) + ": " + py_selector(it->selector);
  }
  return out + "}";
}

std::string optional_name(const std::optional<std::string> & s) { return s ? py_str(*s) : "None"; }

}  // namespace

std::string script_file_name(std::string_view analysis)
{
  std::string out;
  for (const char c : analysis) {
    const bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
                      c == '.' || c == '-';
    out += keep ? c : '_';
  }
  return out + ".gen";
}

std::string render_script(
  const model::BiasSpec & bias, const model::AnalysisSpec & analysis, std::string_view data_root)
{
  const auto & ds = analysis.dataset;
  std::ostringstream os;
  os << "# Fairness assessment for analysis " << py_str(analysis.name) << " of bias " << py_str(bias.name)
     << ".\n"
     << "# Generated by fairspec; regenerate instead of editing.\n"
     << "import os\n"
     << "import sys\n\n"
     << "script_dir = os.path.dirname(os.path.abspath(__file__))\n"
     << "sys.path.insert(0, os.path.join(script_dir, \"runtime\"))\n"
     << "from fairness_metric import FairnessMetric, FairnessError, bottom, format_value, read_csv, top, verdict\n\n";

  os << "file_path = " << py_str(ds.file_path) << "\n"
     << "data_root = " << py_str(data_root) << "\n"
     << "predicted_label_name = " << optional_name(ds.prediction_column) << "\n"
     << "ground_truth_label_name = " << optional_name(ds.ground_truth_column) << "\n"
     << "outcome_label_name = " << py_str(ds.outcome.column) << "\n"
     << "other_columns = [";
  for (std::size_t i = 0; i < ds.other_columns.size(); ++i) {
    os << (i ? ", " : "") << py_str(ds.other_columns[i]);
  }
  os << "]\n"
     << "data = read_csv(os.path.join(script_dir, data_root, file_path))\n";

  os << "sensitive_variables = {\n";
  for (const auto & vb : ds.variables) {
    os << "    " << py_str(vb.variable) << ": (" << py_str(vb.column) << ", {";
    for (std::size_t i = 0; i < vb.values.size(); ++i) {
      os << (i ? ", " : "") << py_str(vb.values[i].value) << ": " << py_selector(vb.values[i].selector);
    }
    os << "}),\n";
  }
  os << "}\n"
     << "dataset_unprivileged_group = " << render_group(bias, ds, bias.unprivileged) << "\n"
     << "dataset_privileged_group = " << render_group(bias, ds, bias.privileged) << "\n"
     << "dataset_positive_outcome = " << py_selector(ds.outcome.positive) << "\n";

  os << "thresholds = {\n";
  for (const auto & m : analysis.metrics) os << "    " << py_str(m.name) << ": " << render_threshold(m.comparator) << ",\n";
  os << "}\n"
     << "tolerance_values = {\n";
  for (const auto & m : analysis.metrics) os << "    " << py_str(m.name) << ": " << py_float(m.tolerance) << ",\n";
  os << "}\n";

  os << "metrics = FairnessMetric(data,\n"
     << "    dataset_unprivileged_group,\n"
     << "    dataset_privileged_group,\n"
     << "    ground_truth_label_name,\n"
     << "    predicted_label_name,\n"
     << "    dataset_positive_outcome,\n"
     << "    outcome_label_name=outcome_label_name,\n"
     << "    sensitive_variables=sensitive_variables,\n"
     << "    other_columns=other_columns)\n\n"
     << "failed = False\n";

  for (const auto & m : analysis.metrics) {
    const std::string key = py_str(m.name);
    os << "\n# " << m.name << "\n"
       << "try:\n"
       << "    value = " << render_metric_call(m) << "\n"
       << "    result = verdict(value, *thresholds[" << key << "], tolerance_values[" << key << "])\n"
       << "    print(format_value(value))\n"
       << "    print(result)\n"
       << "except (FairnessError, ZeroDivisionError) as e:\n"
       << "    print(\"error: metric %s: %s: %s\" % (" << key << ", type(e).__name__, e), file=sys.stderr)\n"
       << "    failed = True\n";
  }
  os << "\nsys.exit(1 if failed else 0)\n";
  return os.str();
}

std::vector<GeneratedArtifact> plan(const model::SpecModel & spec, std::string_view data_root)
{
  std::vector<GeneratedArtifact> out;
  std::set<std::string> paths;
  for (const auto & ref : spec.analyses()) {
    GeneratedArtifact a;
    a.relative_path = script_file_name(ref.analysis->name);
    if (!paths.insert(a.relative_path).second) {
      throw Error(
        ErrorCode::UnsupportedConstruct,
        "analysis '" + ref.analysis->name + "' maps to the same file name as another analysis: " +
          a.relative_path);
    }
    a.contents = render_script(*ref.bias, *ref.analysis, data_root);
    a.analysis_name = ref.analysis->name;
    a.kind = ArtifactKind::AssessmentScript;
    out.push_back(std::move(a));
  }
  out.push_back({std::string(k_runtime_path), std::string(runtime_shim()), {}, ArtifactKind::RuntimeShim});
  return out;
}

std::vector<GeneratedArtifact> generate(
  const model::SpecModel & spec, const fs::path & out_dir, const fs::path & spec_dir)
{
  std::error_code ec;
  const fs::path out_abs = fs::weakly_canonical(fs::absolute(out_dir), ec);
  const fs::path spec_abs = fs::weakly_canonical(fs::absolute(spec_dir.empty() ? fs::path(".") : spec_dir), ec);
  std::string data_root = spec_abs.lexically_relative(out_abs).generic_string();
  if (data_root.empty()) data_root = spec_abs.generic_string();

  auto artifacts = plan(spec, data_root);
  for (const auto & a : artifacts) {
    const fs::path target = out_dir / fs::path(a.relative_path);
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create directory '" + target.parent_path().string() + "': " + ec.message());
    std::ofstream f(target, std::ios::binary | std::ios::trunc);
    if (f) f << a.contents;
    f.close();
    if (!f) throw Error(ErrorCode::IoError, "cannot write '" + target.string() + "'");
  }
  return artifacts;
}

}  // namespace fairspec::codegen

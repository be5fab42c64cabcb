#include <algorithm>

#include "fairspec/dsl/ast.hpp"
#include "fairspec/dsl/parser.hpp"

namespace fairspec::dsl
{

namespace
{

template <class T, class Eq>
bool same_list(const std::vector<T> & a, const std::vector<T> & b, Eq && eq)
{
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), eq);
}

bool same(const Ident & a, const Ident & b) { return a.text == b.text; }

bool same(const std::optional<Ident> & a, const std::optional<Ident> & b)
{
  if (a.has_value() != b.has_value()) return false;
  return !a || a->text == b->text;
}

bool same(const RawSelector & a, const RawSelector & b)
{
  return a.kind == b.kind && a.number == b.number && a.text == b.text;
}

bool same(const RawMapping & a, const RawMapping & b)
{
  return a.outcome == b.outcome && same(a.variable, b.variable) && same(a.column, b.column) &&
         same_list(a.values, b.values, [](const RawValueMapping & x, const RawValueMapping & y) {
           return same(x.value, y.value) && same(x.selector, y.selector);
         });
}

bool same(const RawDataset & a, const RawDataset & b)
{
  return a.path.text == b.path.text && same(a.prediction, b.prediction) &&
         same(a.ground_truth, b.ground_truth) &&
         same_list(a.other, b.other, [](const Ident & x, const Ident & y) { return same(x, y); }) &&
         same_list(a.mappings, b.mappings, [](const RawMapping & x, const RawMapping & y) {
           return same(x, y);
         });
}

bool same(const RawMetric & a, const RawMetric & b)
{
  if (!same(a.name, b.name)) return false;
  if (!same_list(a.params, b.params, [](const RawNumber & x, const RawNumber & y) {
        return x.value == y.value;
      })) {
    return false;
  }
  if (a.body.has_value() != b.body.has_value()) return false;
  if (a.body && !same_structure(*a.body, *b.body)) return false;
  const auto & ca = a.require;
  const auto & cb = b.require;
  if (ca.kind != cb.kind) return false;
  if (ca.kind == RawComparator::Kind::Range) {
    if (ca.lower != cb.lower || ca.upper != cb.upper) return false;
  } else if (ca.value != cb.value) {
    return false;
  }
  if (a.tolerance.has_value() != b.tolerance.has_value()) return false;
  return !a.tolerance || a.tolerance->value == b.tolerance->value;
}

bool same(const RawAnalysis & a, const RawAnalysis & b)
{
  if (a.name.text != b.name.text) return false;
  if (a.scope.has_value() != b.scope.has_value()) return false;
  if (a.scope && a.scope->text != b.scope->text) return false;
  return same(a.dataset, b.dataset) &&
         same_list(a.metrics, b.metrics, [](const RawMetric & x, const RawMetric & y) {
           return same(x, y);
         });
}

bool same(const RawBias & a, const RawBias & b)
{
  auto ident_eq = [](const Ident & x, const Ident & y) { return same(x, y); };
  return a.name.text == b.name.text && same(a.kind, b.kind) && a.domain.text == b.domain.text &&
         same_list(a.sources, b.sources, ident_eq) &&
         same_list(
           a.variables, b.variables,
           [&](const RawSensitiveVariable & x, const RawSensitiveVariable & y) {
             return same(x.name, y.name) && same_list(x.values, y.values, ident_eq);
           }) &&
         same(a.positive_outcome, b.positive_outcome) &&
         same_list(
           a.groups, b.groups,
           [](const RawGroup & x, const RawGroup & y) {
             return x.privileged == y.privileged &&
                    same_list(x.members, y.members, [](const auto & m, const auto & n) {
                      return same(m.variable, n.variable) && same(m.value, n.value);
                    });
           }) &&
         same_list(a.analyses, b.analyses, [](const RawAnalysis & x, const RawAnalysis & y) {
           return same(x, y);
         });
}

std::string join_idents(const std::vector<Ident> & ids)
{
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += ids[i].text;
  }
  return out;
}

std::string print_selector(const RawSelector & s)
{
  switch (s.kind) {
    case RawSelector::Kind::Number: return format_number(s.number);
    case RawSelector::Kind::String: return quote_string(s.text);
    case RawSelector::Kind::Top: return "top " + format_number(s.number);
    case RawSelector::Kind::Bottom: return "bottom " + format_number(s.number);
  }
  return {};
}

std::string print_comparator(const RawComparator & c)
{
  switch (c.kind) {
    case RawComparator::Kind::Eq: return "== " + format_number(c.value);
    case RawComparator::Kind::Le: return "<= " + format_number(c.value);
    case RawComparator::Kind::Ge: return ">= " + format_number(c.value);
    case RawComparator::Kind::Lt: return "< " + format_number(c.value);
    case RawComparator::Kind::Gt: return "> " + format_number(c.value);
    case RawComparator::Kind::Range:
      return "in [" + format_number(c.lower) + ", " + format_number(c.upper) + "]";
  }
  return {};
}

void print_analysis(const RawAnalysis & a, std::string & out)
{
  out += "  analysis " + quote_string(a.name.text) + " {\n";
  if (a.scope) out += "    scope: " + quote_string(a.scope->text) + "\n";
  const auto & d = a.dataset;
  out += "    dataset {\n";
  out += "      path: " + quote_string(d.path.text) + "\n";
  if (d.prediction) out += "      prediction: " + d.prediction->text + "\n";
  if (d.ground_truth) out += "      ground_truth: " + d.ground_truth->text + "\n";
  if (!d.other.empty()) out += "      other: [" + join_idents(d.other) + "]\n";
  for (const auto & m : d.mappings) {
    out += "      map " + (m.outcome ? std::string("outcome") : m.variable.text) + " -> column " +
           m.column.text + " {";
    for (const auto & v : m.values) {
      out += ' ' + v.value.text + " = " + print_selector(v.selector);
    }
    out += " }\n";
  }
  out += "    }\n";
  for (const auto & m : a.metrics) {
    out += "    metric " + m.name.text;
    if (!m.params.empty()) {
      out += '(';
      for (std::size_t i = 0; i < m.params.size(); ++i) {
        if (i) out += ", ";
        out += format_number(m.params[i].value);
      }
      out += ')';
    }
    if (m.body) out += " = " + to_source(*m.body);
    out += " { require " + print_comparator(m.require);
    if (m.tolerance) out += " tolerance " + format_number(m.tolerance->value);
    out += " }\n";
  }
  out += "  }\n";
}

}  // namespace

bool same_structure(const RawSpec & a, const RawSpec & b)
{
  return same_list(a.biases, b.biases, [](const RawBias & x, const RawBias & y) {
    return same(x, y);
  });
}

std::string print_spec(const RawSpec & spec)
{
  std::string out;
  for (std::size_t i = 0; i < spec.biases.size(); ++i) {
    const RawBias & b = spec.biases[i];
    if (i) out += '\n';
    out += "bias " + quote_string(b.name.text) + " {\n";
    out += "  kind: " + b.kind.text + "\n";
    out += "  domain: " + quote_string(b.domain.text) + "\n";
    if (!b.sources.empty()) out += "  sources: [" + join_idents(b.sources) + "]\n";
    for (const auto & v : b.variables) {
      out += "  sensitive variable " + v.name.text + " { values: [" + join_idents(v.values) + "] }\n";
    }
    out += "  positive outcome " + b.positive_outcome.text + "\n";
    for (const auto & g : b.groups) {
      out += g.privileged ? "  privileged group {" : "  unprivileged group {";
      for (const auto & m : g.members) out += ' ' + m.variable.text + " = " + m.value.text;
      out += " }\n";
    }
    for (const auto & a : b.analyses) print_analysis(a, out);
    out += "}\n";
  }
  return out;
}

}  // namespace fairspec::dsl

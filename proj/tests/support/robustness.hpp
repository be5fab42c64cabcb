#pragma once

// Parser robustness checks shared by the robustness test binary and the acceptance suite.

#include <algorithm>
#include <filesystem>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "fairspec/codegen/codegen.hpp"
#include "fairspec/dsl/parser.hpp"
#include "fairspec/model/validate.hpp"
#include "helpers.hpp"

namespace robustness
{

using namespace fairspec;

struct Outcome
{
  std::size_t cases = 0;
  std::string failure;

  [[nodiscard]] bool ok() const { return failure.empty(); }
};

inline std::vector<std::string> seed_corpus()
{
  std::vector<std::string> out;
  for (const auto & rel : testing::bundled_specs()) out.push_back(testing::read_text(testing::source_path(rel)));
  return out;
}

// Every input must produce either a spec or at least one diagnostic, and nothing may throw.
inline std::string check_input(const std::string & input)
{
  try {
    const auto r = model::load_spec(input, "fuzz");
    if (!r.ok() && r.diagnostics.empty()) return "rejected input without diagnostics";
    if (r.ok() && !r.diagnostics.empty()) return "accepted input with diagnostics";
  } catch (const std::exception & e) {
    return std::string("exception escaped the parser: ") + e.what();
  } catch (...) {
    return "unknown exception escaped the parser";
  }
  return {};
}

// `cases` inputs of pure random bytes, then as many byte-level mutations and splices of the
// bundled specs so the parser also gets past the first token. `cases` counts the random inputs.
inline Outcome fuzz_parser(std::uint64_t seed, std::size_t cases)
{
  std::mt19937_64 rng(seed);
  const auto corpus = seed_corpus();
  static const std::string alphabet = "{}[]():,=<>+-*/|\"\\#\n .0123456789abz_";
  Outcome o;
  for (std::size_t i = 0; i < 2 * cases; ++i) {
    std::string input;
    if (i < cases) {
      input.resize(rng() % 256);
      for (auto & c : input) c = static_cast<char>(rng() & 0xff);
    } else {
      input = corpus[rng() % corpus.size()];
      const bool printable = i % 2 == 0;
      const std::size_t edits = 1 + rng() % 8;
      for (std::size_t e = 0; e < edits && !input.empty(); ++e) {
        const std::size_t pos = rng() % input.size();
        switch (rng() % 4) {
          case 0: input[pos] = printable ? alphabet[rng() % alphabet.size()] : static_cast<char>(rng() & 0xff); break;
          case 1: input.erase(pos, 1 + rng() % 16); break;
          case 2: input.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
          default: {
            const auto & other = corpus[rng() % corpus.size()];
            const std::size_t from = rng() % other.size();
            input.insert(pos, other.substr(from, rng() % 64));
          }
        }
      }
    }
    if (auto failure = check_input(input); !failure.empty()) {
      o.failure = failure + " (input " + std::to_string(i) + ")";
      return o;
    }
    if (i < cases) ++o.cases;
  }
  return o;
}

// Each malformed spec starts with `# expect: L:C`; some diagnostic must point there.
inline Outcome malformed_corpus()
{
  Outcome o;
  const auto dir = testing::source_path("tests/fixtures/malformed");
  std::vector<std::filesystem::path> files;
  for (const auto & entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".fspec") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  static const std::regex expect(R"(^# expect: (\d+):(\d+))");
  for (const auto & f : files) {
    ++o.cases;
    const std::string text = testing::read_text(f);
    std::smatch m;
    if (!std::regex_search(text, m, expect)) {
      o.failure = f.filename().string() + ": missing expectation header";
      return o;
    }
    const auto line = static_cast<std::uint32_t>(std::stoul(m[1]));
    const auto col = static_cast<std::uint32_t>(std::stoul(m[2]));
    const auto r = model::load_spec(text, f.string());
    if (r.diagnostics.empty()) {
      o.failure = f.filename().string() + ": no diagnostic";
      return o;
    }
    const bool hit = std::any_of(r.diagnostics.begin(), r.diagnostics.end(), [&](const Diagnostic & d) {
      return d.span.line == line && d.span.column == col;
    });
    if (!hit) {
      o.failure = f.filename().string() + ": expected a diagnostic at " + std::to_string(line) + ":" +
                  std::to_string(col) + ", first was " + format_diagnostic(r.diagnostics[0]);
      return o;
    }
  }
  return o;
}

inline Outcome round_trip_bundled()
{
  Outcome o;
  for (const auto & rel : testing::bundled_specs()) {
    ++o.cases;
    const auto first = dsl::parse_spec(testing::read_text(testing::source_path(rel)), rel);
    if (!first.ok()) {
      o.failure = rel + ": does not parse";
      return o;
    }
    const std::string printed = dsl::print_spec(*first.value);
    const auto second = dsl::parse_spec(printed, rel + " (printed)");
    if (!second.ok() || !dsl::same_structure(*first.value, *second.value)) {
      o.failure = rel + ": printed form does not reparse to the same tree";
      return o;
    }
    if (!model::validate(*second.value).ok()) {
      o.failure = rel + ": printed form no longer validates";
      return o;
    }
  }
  return o;
}

inline Outcome codegen_deterministic()
{
  Outcome o;
  for (const auto & rel : testing::bundled_specs()) {
    ++o.cases;
    const auto model = testing::load_model(rel);
    const auto spec_dir = testing::source_path(rel).parent_path();
    const auto dir = testing::scratch_dir("determinism");
    const auto a = codegen::generate(model, dir / "a", spec_dir);
    std::vector<std::string> first;
    for (const auto & art : a) first.push_back(testing::read_text(dir / "a" / art.relative_path));
    const auto b = codegen::generate(model, dir / "a", spec_dir);
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (testing::read_text(dir / "a" / b[i].relative_path) != first[i] || a[i].contents != b[i].contents) {
        o.failure = rel + ": " + b[i].relative_path + " differs between runs";
        return o;
      }
    }
  }
  return o;
}

}  // namespace robustness

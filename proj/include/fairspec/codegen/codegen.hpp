#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fairspec/model/spec_model.hpp"

namespace fairspec::codegen
{

enum class ArtifactKind { AssessmentScript, RuntimeShim };

struct GeneratedArtifact
{
  std::string relative_path;  // '/'-separated, relative to the output directory
  std::string contents;
  std::string analysis_name;  // empty for the runtime shim
  ArtifactKind kind = ArtifactKind::AssessmentScript;
};

/// Path of the runtime shim inside the output directory.
inline constexpr std::string_view k_runtime_path = "runtime/fairness_metric.py";

/// Source of the Python runtime imported by generated scripts.
std::string_view runtime_shim() noexcept;

/// `<name>.gen` with every byte outside [A-Za-z0-9_.-] replaced by '_'.
std::string script_file_name(std::string_view analysis);

/// Standalone assessment script for one analysis. `data_root` is the directory that relative
/// dataset paths resolve against, expressed relative to the script's own directory.
///
/// The script prints two lines per metric (value with up to 12 significant digits, then
/// `Biased` or `Fair`). A failing metric prints nothing to stdout, reports on stderr and makes
/// the script exit with status 1.
std::string render_script(
  const model::BiasSpec & bias, const model::AnalysisSpec & analysis, std::string_view data_root);

/// Every artifact for `spec` without touching the filesystem: one script per analysis in
/// declaration order, then the runtime shim.
std::vector<GeneratedArtifact> plan(const model::SpecModel & spec, std::string_view data_root);

/// Writes plan() under `out_dir` (created on demand). `spec_dir` is the directory relative
/// dataset paths resolve against. Throws IoError naming the failing path.
std::vector<GeneratedArtifact> generate(
  const model::SpecModel & spec, const std::filesystem::path & out_dir, const std::filesystem::path & spec_dir);

}  // namespace fairspec::codegen

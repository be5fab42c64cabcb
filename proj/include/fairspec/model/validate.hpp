#pragma once

#include "fairspec/dsl/ast.hpp"
#include "fairspec/dsl/parser.hpp"
#include "fairspec/model/spec_model.hpp"

namespace fairspec::model
{

/// Resolves every reference in `raw` and checks the model invariants. Collects all
/// violations (no fail-fast); the model is produced only when there are none.
dsl::ParseResult<SpecModel> validate(const dsl::RawSpec & raw);

/// parse_spec followed by validate.
dsl::ParseResult<SpecModel> load_spec(std::string_view text, std::string file_name = "<input>");

}  // namespace fairspec::model

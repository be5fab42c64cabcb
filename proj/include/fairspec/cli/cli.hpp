#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fairspec::cli
{

/// Process exit statuses.
enum ExitCode : int {
  k_ok = 0,
  k_biased = 1,       // --fail-on-bias and at least one Biased verdict
  k_spec_error = 2,   // parse/validation errors, unknown analysis, bad usage
  k_io_error = 3,     // unreadable spec or dataset, unwritable output
  k_metric_error = 4, // binding or metric evaluation failed
};

struct Options
{
  bool color = false;  // ANSI styling on `err`
};

/// Runs one command line; `args[0]` is the program name. stdout carries only the
/// value/verdict lines (and manifest paths for `gen`); everything else goes to `err`.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err, Options options = {});

}  // namespace fairspec::cli

#include <unistd.h>

#include <iostream>

#include "fairspec/cli/cli.hpp"

int main(int argc, char ** argv)
{
  std::vector<std::string> args(argv, argv + argc);
  fairspec::cli::Options options;
  options.color = isatty(STDERR_FILENO) != 0;
  return fairspec::cli::run(args, std::cout, std::cerr, options);
}

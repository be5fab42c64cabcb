#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "robustness.hpp"

namespace
{

void check(const robustness::Outcome & o, std::size_t min_cases)
{
  INFO(o.failure);
  CHECK(o.ok());
  CHECK(o.cases >= min_cases);
}

}  // namespace

TEST_CASE("fuzz: 10000 inputs never crash the parser") { check(robustness::fuzz_parser(7, 10000), 10000); }
TEST_CASE("malformed corpus: each spec is diagnosed at the expected position") { check(robustness::malformed_corpus(), 10); }
TEST_CASE("bundled specs round-trip through the printer") { check(robustness::round_trip_bundled(), 6); }
TEST_CASE("code generation is deterministic") { check(robustness::codegen_deterministic(), 6); }

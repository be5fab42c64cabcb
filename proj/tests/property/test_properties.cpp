#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "properties.hpp"

namespace
{

constexpr std::uint64_t k_seed = 20240611;

void check(const properties::Outcome & o)
{
  INFO(o.failure);
  CHECK(o.ok());
  CHECK(o.cases >= properties::k_cases);
}

}  // namespace

TEST_CASE("quantile: nearest rank matches sort-and-index") { check(properties::quantile_matches_sort_oracle(k_seed)); }
TEST_CASE("group_size: inclusion-exclusion") { check(properties::group_size_inclusion_exclusion(k_seed + 1)); }
TEST_CASE("probability: complement sums to one") { check(properties::probability_complement(k_seed + 2)); }
TEST_CASE("group swap: SPD/EOD/AOD negate, DI inverts") { check(properties::group_swap_antisymmetry(k_seed + 3)); }
TEST_CASE("SPD built-in equals its expression form") { check(properties::spd_equals_expression(k_seed + 4)); }
TEST_CASE("verdict: widening tolerance never turns Fair into Biased") { check(properties::verdict_tolerance_monotone(k_seed + 5)); }
TEST_CASE("built-ins agree with the counting oracle") { check(properties::builtins_match_oracle(k_seed + 6)); }
TEST_CASE("metrics are invariant under row permutation") { check(properties::row_permutation_invariance(k_seed + 7)); }

// Combinatorics of the iterated Duhamel expansion: admissible collapsing
// maps, raw summand counts, and the 4^j class budget.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace cssrad {
namespace boardgame {

using uint128 = unsigned __int128;

std::string to_string(uint128 v);

// A collapsing map sigma: {2,...,j+1} -> {1,...,j} with sigma(2) = 1 and
// sigma(l) < l.  values[l-2] stores sigma(l).
struct SigmaMap {
    int depth = 0;
    std::array<std::uint8_t, 10> values{};

    int sigma(int l) const { return values[l - 2]; } // l in [2, depth+1]
};

inline constexpr int max_enumeration_depth = 10;

// Complete, duplicate-free, lexicographic enumeration; the constraint
// structure gives exactly j! maps.
std::vector<SigmaMap> enumerate_sigma(int j);

// Map count without materializing the enumeration.
uint128 count_sigma(int j);

uint128 factorial(int j);
uint128 pow4(int j);

// Raw summand count of the chain B_2 ... B_{r+1}: each B_k contributes
// 2 (k-1) terms, so the product is 2^r r!.  Exact in 128-bit arithmetic for
// r <= 25; larger depths are rejected rather than silently overflowed.
struct TermCount {
    int depth = 0;
    uint128 raw_count = 0;
    uint128 budget = 0; // 4^depth
};

inline constexpr int max_term_depth = 25;

TermCount raw_term_count(int r);

// Compares the sigma-map count j! with the 4^j class budget.  The budget
// counts post-reduction equivalence classes of integrals, not raw maps, so
// j! overtakes 4^j from j = 9 on; the report records both numbers and flags
// the crossover.
struct BudgetReport {
    int depth = 0;
    uint128 sigma_count = 0;
    uint128 factorial_count = 0;
    uint128 budget = 0;
    bool within_budget = false;
    std::string note;
};

BudgetReport budget_check(int j);

} // namespace boardgame
} // namespace cssrad

#include "cssrad/boardgame.hpp"

#include <algorithm>
#include <stdexcept>

namespace cssrad {
namespace boardgame {

std::string to_string(uint128 v) {
    if (v == 0)
        return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::vector<SigmaMap> enumerate_sigma(int j) {
    if (j < 1 || j > max_enumeration_depth)
        throw std::invalid_argument("enumerate_sigma: depth must lie in [1, " +
                                    std::to_string(max_enumeration_depth) + "]");
    std::vector<SigmaMap> maps;
    maps.reserve(static_cast<size_t>(factorial(j)));
    SigmaMap m;
    m.depth = j;
    m.values.fill(0);
    m.values[0] = 1; // sigma(2) = 1 is forced
    // odometer over sigma(l) in {1, ..., l-1}, most significant digit first
    for (int l = 3; l <= j + 1; ++l)
        m.values[l - 2] = 1;
    while (true) {
        maps.push_back(m);
        int l = j + 1;
        for (; l >= 3; --l) {
            if (m.values[l - 2] < l - 1) {
                ++m.values[l - 2];
                for (int l2 = l + 1; l2 <= j + 1; ++l2)
                    m.values[l2 - 2] = 1;
                break;
            }
        }
        if (l < 3)
            break;
    }
    return maps;
}

uint128 count_sigma(int j) {
    if (j < 1 || j > max_enumeration_depth)
        throw std::invalid_argument("count_sigma: depth out of enumeration range");
    uint128 count = 0;
    SigmaMap m;
    m.depth = j;
    // same odometer as enumerate_sigma, without storage
    std::array<int, 10> digit{};
    for (int l = 3; l <= j + 1; ++l)
        digit[l - 2] = 1;
    while (true) {
        ++count;
        int l = j + 1;
        for (; l >= 3; --l) {
            if (digit[l - 2] < l - 1) {
                ++digit[l - 2];
                for (int l2 = l + 1; l2 <= j + 1; ++l2)
                    digit[l2 - 2] = 1;
                break;
            }
        }
        if (l < 3)
            break;
    }
    return count;
}

uint128 factorial(int j) {
    uint128 f = 1;
    for (int i = 2; i <= j; ++i)
        f *= static_cast<unsigned>(i);
    return f;
}

uint128 pow4(int j) {
    uint128 b = 1;
    for (int i = 0; i < j; ++i)
        b *= 4u;
    return b;
}

TermCount raw_term_count(int r) {
    if (r < 1)
        throw std::invalid_argument("raw_term_count: depth must be positive");
    if (r > max_term_depth)
        throw std::invalid_argument("raw_term_count: depth exceeds the exact-arithmetic cap");
    TermCount tc;
    tc.depth = r;
    tc.raw_count = 1;
    for (int k = 2; k <= r + 1; ++k)
        tc.raw_count *= static_cast<unsigned>(2 * (k - 1));
    tc.budget = pow4(r);
    return tc;
}

BudgetReport budget_check(int j) {
    BudgetReport rep;
    rep.depth = j;
    rep.sigma_count = count_sigma(j);
    rep.factorial_count = factorial(j);
    rep.budget = pow4(j);
    rep.within_budget = rep.sigma_count <= rep.budget;
    rep.note = rep.within_budget
                   ? "sigma-map count within the 4^j class budget"
                   : "sigma-map count exceeds 4^j: the budget bounds post-reduction "
                     "equivalence classes, not raw maps";
    return rep;
}

} // namespace boardgame
} // namespace cssrad

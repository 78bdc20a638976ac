#pragma once

#include "qspectra/substitution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qspectra::test {

// Each check returns the list of violations; empty means it holds.
std::vector<std::string> check_column_stochastic(const Substitution& s);
std::vector<std::string> check_instructions_vs_expansion(const Substitution& s, unsigned max_n = 4);
std::vector<std::string> check_marginals(const Substitution& s, unsigned window_power = 3);
std::vector<std::string> check_scaling(const Substitution& s, unsigned window_power = 2);
std::vector<std::string> check_swap_symmetry(const Substitution& s, unsigned window_power = 3);
std::vector<std::string> check_bicorrelation(const Substitution& s, unsigned window_power = 1);
std::vector<std::string> check_projections(const Substitution& s);
std::vector<std::string> check_extreme_points(const Substitution& s);
// Random 3-letter substitutions with q = 3; the hull must not depend on the cell arrangement.
std::vector<std::string> check_configuration_invariance(std::uint64_t seed, int count);

struct NamedCheck {
    std::string name;
    std::vector<std::string> (*run)(const Substitution&);
};
const std::vector<NamedCheck>& per_substitution_checks();

}  // namespace qspectra::test

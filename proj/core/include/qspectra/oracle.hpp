#pragma once

#include "qspectra/exact.hpp"
#include "qspectra/lattice.hpp"
#include "qspectra/substitution.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace qspectra {

// Pair counts (block(j), block(j+k)) over positions with j and j+k inside S^n(gamma).
struct FrequencyVector {
    unsigned n = 0;
    LatticePoint k;
    std::optional<Letter> gamma;      // empty for the u-averaged variant
    std::vector<std::uint64_t> counts;  // indexed by pair alpha * s + beta
    Integer positions;                // number of valid positions
    ExactVector normalized;           // divided by Q^n
};

// Streams slabs of the first coordinate when d >= 2.
FrequencyVector pair_frequency(const Substitution& s, Letter gamma, unsigned n, const LatticePoint& k);
// sum_gamma u_gamma pair_frequency(gamma); counts are summed without weights.
FrequencyVector averaged_pair_frequency(const Substitution& s, const ExactVector& u, unsigned n, const LatticePoint& k);

struct Comparison {
    Rational l1;
    Rational max_deviation;
    ExactVector deviation;   // oracle - exact
    Rational carry_bound;    // Card Delta_n(k) / Q^n
    Rational budget;         // (s Card Delta_n(k) + boundary) / Q^n
};

Comparison compare(const FrequencyVector& oracle, const ExactVector& exact, std::size_t letters, const Expansion& q);

// Header "n,k,pair,frequency,exact,deviation".
void write_frequency_csv(std::ostream& out, const Alphabet& alphabet, const FrequencyVector& f, const ExactVector& exact);

}  // namespace qspectra

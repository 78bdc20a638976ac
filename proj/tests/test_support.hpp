#pragma once

#include "qspectra/exact.hpp"
#include "qspectra/structure.hpp"
#include "qspectra/substitution.hpp"
#include "qspectra_cli/spec_io.hpp"

#include <string>
#include <vector>

namespace qspectra::test {

inline const std::vector<std::string> kBundled{"thue-morse",    "queffelec-zeta", "table",          "rudin-shapiro",
                                               "tm-rs-product", "height-h3",      "imprimitive-six"};

inline std::string spec_path(const std::string& name) { return std::string(QSPECTRA_SPEC_DIR) + "/" + name + ".yaml"; }

inline Substitution bundled(const std::string& name) { return cli::load_spec(spec_path(name)).substitution; }

// nums / den, entrywise.
inline ExactVector frac(const std::vector<long>& nums, long den = 1)
{
    ExactVector v;
    for (long n : nums) {
        Rational r(n, den);
        r.canonicalize();
        v.push_back(r);
    }
    return v;
}

// d = 1 substitution from words, e.g. {"01", "10"}.
inline Substitution words(const std::vector<std::string>& rules, std::uint32_t q)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < rules.size(); ++i) names.push_back(std::to_string(i));
    std::vector<std::vector<Letter>> r;
    for (const auto& w : rules) {
        std::vector<Letter> cells;
        for (char c : w) cells.push_back(static_cast<Letter>(c - '0'));
        r.push_back(cells);
    }
    return Substitution(Alphabet(names), Expansion({q}), r, AperiodicityPolicy::CheckPansiot);
}

struct Analysed {
    PreparedSubstitution prep;
    InvariantWeights weights;
};

inline Analysed analyse(const Substitution& s)
{
    Analysed a{prepare(s), {}};
    a.weights = invariant_weights(a.prep.telescoped, a.prep.decomposition);
    return a;
}

}  // namespace qspectra::test

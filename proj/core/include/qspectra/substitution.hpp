#pragma once

#include "qspectra/exact.hpp"
#include "qspectra/lattice.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace qspectra {

using Letter = std::uint32_t;
// gamma -> R(gamma), indexed by letter id.
using LetterMap = std::vector<Letter>;

enum class AperiodicityPolicy { CheckPansiot, Asserted, Unknown };

std::string to_string(AperiodicityPolicy p);
std::optional<AperiodicityPolicy> parse_policy(const std::string& text);

// Interned letter names; ids follow the declaration order.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);

    std::size_t size() const { return names_.size(); }
    const std::string& name(Letter id) const { return names_.at(id); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<Letter> index(const std::string& name) const;

    bool operator==(const Alphabet& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Letter> index_;
};

// Block over [0, shape) with cells in lexicographic order, last coordinate fastest.
struct Block {
    std::vector<std::int64_t> shape;
    std::vector<Letter> cells;

    Letter at(const std::vector<std::int64_t>& point) const;
};

// A constant-shape substitution on Z^d: each letter maps to a block over [0,q).
class Substitution {
public:
    Substitution() = default;
    Substitution(Alphabet alphabet, Expansion q, std::vector<std::vector<Letter>> rules,
                 AperiodicityPolicy policy = AperiodicityPolicy::Unknown);

    const Alphabet& alphabet() const { return alphabet_; }
    const Expansion& q() const { return q_; }
    std::size_t size() const { return alphabet_.size(); }
    std::size_t dim() const { return q_.dim(); }
    std::uint64_t Q() const { return q_.Q(); }
    AperiodicityPolicy policy() const { return policy_; }
    void set_policy(AperiodicityPolicy p) { policy_ = p; }

    // rules()[gamma][cell]
    const std::vector<std::vector<Letter>>& rules() const { return rules_; }
    Letter image(Letter gamma, std::size_t cell) const { return rules_[gamma][cell]; }

    // R_j for a cell index in [0,Q).
    LetterMap instruction(std::size_t cell) const;
    // R_j with j reduced mod q.
    LetterMap instruction(const LatticePoint& j) const;
    // R_j^(n) = R_{j_0} R_{j_1} ... R_{j_{n-1}} over the base-q digits of j; identity for n = 0.
    LetterMap generalized_instruction(const LatticePoint& j, unsigned n) const;
    ExactMatrix instruction_matrix(const LatticePoint& j) const;

    bool operator==(const Substitution& o) const
    {
        return alphabet_ == o.alphabet_ && q_ == o.q_ && rules_ == o.rules_;
    }

private:
    Alphabet alphabet_;
    Expansion q_;
    std::vector<std::vector<Letter>> rules_;
    AperiodicityPolicy policy_ = AperiodicityPolicy::Unknown;
};

// Lexicographic cell index of a digit vector in [0,q).
std::size_t cell_index(const Digit& digit, const Expansion& q);
LetterMap identity_map(std::size_t s);
// (outer o inner)(gamma) = outer(inner(gamma)).
LetterMap compose(const LetterMap& outer, const LetterMap& inner);
bool is_permutation(const LetterMap& m);
// Column-stochastic 0/1 matrix with entry (alpha, gamma) = 1 iff alpha = m(gamma).
ExactMatrix letter_map_matrix(const LetterMap& m);

// Maximum number of cells a single expansion may materialize.
inline constexpr std::uint64_t kDefaultCellBudget = std::uint64_t{1} << 26;
inline constexpr const char* kCellBudgetEnv = "QSPECTRA_CELL_BUDGET";
std::uint64_t cell_budget();
// Throws ResourceError naming the limit if Q^n exceeds the cell budget.
void check_cell_budget(const Expansion& q, unsigned n, const std::string& what);

// S^n(gamma) over [0,q^n); cell j holds R_j^(n)(gamma).
Block expand(const Substitution& s, Letter gamma, unsigned n);

// Generalized instructions R_j^(p) for every j in [0,q^p), lexicographic.
class InstructionTable {
public:
    InstructionTable(const Substitution& s, unsigned p);

    unsigned depth() const { return p_; }
    const Box& box() const { return box_; }
    const LetterMap& at(std::uint64_t flat) const { return maps_[flat]; }
    const LetterMap& at(const std::vector<std::int64_t>& j) const { return maps_[box_.flatten(j)]; }

private:
    unsigned p_;
    Box box_;
    std::vector<LetterMap> maps_;
};

// M_S = sum_j R_j; columns sum to Q.
ExactMatrix substitution_matrix(const Substitution& s);
// C_S = sum_j R_j (x) R_j = M_{S (x) S}.
ExactMatrix coincidence_matrix(const Substitution& s);

// Letter-pair id of (alpha, beta) in the lexicographic product alphabet.
inline std::size_t pair_index(Letter alpha, Letter beta, std::size_t s_right)
{
    return static_cast<std::size_t>(alpha) * s_right + beta;
}
std::string pair_name(const Alphabet& left, const Alphabet& right, Letter alpha, Letter beta);

// Substitution product: j-th instruction R_j (x) R'_j. Mismatched q raises InputError.
Substitution product(const Substitution& a, const Substitution& b);
Substitution bisubstitution(const Substitution& s);

// S^h as a substitution with expansion q^h.
Substitution telescope(const Substitution& s, unsigned h);

// Restriction to a letter set closed under S; letters keep their relative order.
Substitution restrict_to(const Substitution& s, const std::vector<Letter>& letters);

// Same letter images, cells relabelled: new cell c takes old cell perm[c].
Substitution permute_configuration(const Substitution& s, const std::vector<std::size_t>& perm);

}  // namespace qspectra

#include "qspectra/substitution.hpp"

#include "qspectra/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace qspectra {

std::string to_string(AperiodicityPolicy p)
{
    switch (p) {
    case AperiodicityPolicy::CheckPansiot: return "check-pansiot";
    case AperiodicityPolicy::Asserted: return "asserted";
    case AperiodicityPolicy::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<AperiodicityPolicy> parse_policy(const std::string& text)
{
    if (text == "check-pansiot") return AperiodicityPolicy::CheckPansiot;
    if (text == "asserted") return AperiodicityPolicy::Asserted;
    if (text == "unknown") return AperiodicityPolicy::Unknown;
    return std::nullopt;
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names))
{
    for (Letter i = 0; i < names_.size(); ++i) {
        if (!index_.emplace(names_[i], i).second) throw InputError("duplicate letter '" + names_[i] + "'");
    }
}

std::optional<Letter> Alphabet::index(const std::string& name) const
{
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Letter Block::at(const std::vector<std::int64_t>& point) const
{
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < shape.size(); ++i) idx = idx * static_cast<std::uint64_t>(shape[i]) + point[i];
    return cells[idx];
}

Substitution::Substitution(Alphabet alphabet, Expansion q, std::vector<std::vector<Letter>> rules,
                           AperiodicityPolicy policy)
    : alphabet_(std::move(alphabet)), q_(std::move(q)), rules_(std::move(rules)), policy_(policy)
{
    if (alphabet_.size() == 0) throw InputError("alphabet is empty");
    if (rules_.size() != alphabet_.size()) throw InputError("one rule per letter is required");
    for (std::size_t g = 0; g < rules_.size(); ++g) {
        if (rules_[g].size() != q_.Q()) {
            throw InputError("rule '" + alphabet_.name(static_cast<Letter>(g)) + "': expected " +
                             std::to_string(q_.Q()) + " cells, found " + std::to_string(rules_[g].size()));
        }
        for (Letter x : rules_[g])
            if (x >= alphabet_.size()) throw InputError("rule uses a letter outside the alphabet");
    }
}

LetterMap Substitution::instruction(std::size_t cell) const
{
    LetterMap m(size());
    for (std::size_t g = 0; g < size(); ++g) m[g] = rules_[g][cell];
    return m;
}

LetterMap Substitution::instruction(const LatticePoint& j) const
{
    auto d = digits(j, q_, 1);
    return instruction(cell_index(d[0], q_));
}

LetterMap Substitution::generalized_instruction(const LatticePoint& j, unsigned n) const
{
    LetterMap m = identity_map(size());
    for (const auto& dig : digits(j, q_, n)) {
        // Digits come least significant first; R_{j_0} is applied last.
        m = compose(m, instruction(cell_index(dig, q_)));
    }
    return m;
}

ExactMatrix Substitution::instruction_matrix(const LatticePoint& j) const
{
    return letter_map_matrix(instruction(j));
}

std::size_t cell_index(const Digit& digit, const Expansion& q)
{
    std::size_t idx = 0;
    for (std::size_t i = 0; i < digit.size(); ++i) idx = idx * q[i] + digit[i];
    return idx;
}

LetterMap identity_map(std::size_t s)
{
    LetterMap m(s);
    std::iota(m.begin(), m.end(), Letter{0});
    return m;
}

LetterMap compose(const LetterMap& outer, const LetterMap& inner)
{
    LetterMap m(inner.size());
    for (std::size_t g = 0; g < inner.size(); ++g) m[g] = outer[inner[g]];
    return m;
}

bool is_permutation(const LetterMap& m)
{
    std::vector<bool> seen(m.size(), false);
    for (Letter x : m) {
        if (seen[x]) return false;
        seen[x] = true;
    }
    return true;
}

ExactMatrix letter_map_matrix(const LetterMap& m)
{
    ExactMatrix r(m.size(), m.size());
    for (std::size_t g = 0; g < m.size(); ++g) r(m[g], g) = 1;
    return r;
}

std::uint64_t cell_budget()
{
    const char* env = std::getenv(kCellBudgetEnv);
    if (env == nullptr || *env == '\0') return kDefaultCellBudget;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
        throw InputError(std::string(kCellBudgetEnv) + " must be a positive integer, got '" + env + "'");
    }
    return v;
}

void check_cell_budget(const Expansion& q, unsigned n, const std::string& what)
{
    Integer cells = q.Q_power(n);
    std::uint64_t budget = cell_budget();
    if (cells > Integer(std::to_string(budget))) {
        throw ResourceError(what + " needs " + cells.get_str() + " cells, above the cell budget of " +
                            std::to_string(budget) + " (set " + kCellBudgetEnv + " to raise it)");
    }
}

namespace {

// Strides of the box q^(m+1) and the child offsets of one parent cell.
struct LevelStep {
    Box parent;
    Box child;
    std::vector<std::uint64_t> offsets;  // flat offset of cell r inside the child box, relative to parent*q
};

LevelStep level_step(const Expansion& q, unsigned m)
{
    LevelStep st{Box(q.small_power(m)), Box(q.small_power(m + 1)), {}};
    Box unit(std::vector<std::int64_t>(q.values().begin(), q.values().end()));
    for (std::uint64_t r = 0; r < unit.size(); ++r) st.offsets.push_back(st.child.flatten(unit.unflatten(r)));
    return st;
}

std::uint64_t scaled_base(const LevelStep& st, const Expansion& q, std::uint64_t parent_flat)
{
    auto p = st.parent.unflatten(parent_flat);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] *= q[i];
    return st.child.flatten(p);
}

}  // namespace

Block expand(const Substitution& s, Letter gamma, unsigned n)
{
    if (gamma >= s.size()) throw InputError("letter outside the alphabet");
    check_cell_budget(s.q(), n, "expansion of depth " + std::to_string(n));
    std::vector<Letter> cur{gamma};
    for (unsigned m = 0; m < n; ++m) {
        LevelStep st = level_step(s.q(), m);
        std::vector<Letter> next(st.child.size());
        for (std::uint64_t i = 0; i < cur.size(); ++i) {
            std::uint64_t base = scaled_base(st, s.q(), i);
            const auto& rule = s.rules()[cur[i]];
            for (std::size_t r = 0; r < rule.size(); ++r) next[base + st.offsets[r]] = rule[r];
        }
        cur.swap(next);
    }
    return Block{s.q().small_power(n), std::move(cur)};
}

InstructionTable::InstructionTable(const Substitution& s, unsigned p) : p_(p), box_(s.q().small_power(p))
{
    check_cell_budget(s.q(), p, "instruction table of depth " + std::to_string(p));
    std::vector<LetterMap> cur{identity_map(s.size())};
    std::vector<LetterMap> instr;
    for (std::size_t c = 0; c < s.Q(); ++c) instr.push_back(s.instruction(c));
    for (unsigned m = 0; m < p; ++m) {
        LevelStep st = level_step(s.q(), m);
        std::vector<LetterMap> next(st.child.size());
        for (std::uint64_t i = 0; i < cur.size(); ++i) {
            std::uint64_t base = scaled_base(st, s.q(), i);
            for (std::size_t r = 0; r < instr.size(); ++r) next[base + st.offsets[r]] = compose(instr[r], cur[i]);
        }
        cur.swap(next);
    }
    maps_ = std::move(cur);
}

ExactMatrix substitution_matrix(const Substitution& s)
{
    ExactMatrix m(s.size(), s.size());
    for (std::size_t g = 0; g < s.size(); ++g)
        for (Letter a : s.rules()[g]) m(a, g) += 1;
    return m;
}

ExactMatrix coincidence_matrix(const Substitution& s) { return substitution_matrix(bisubstitution(s)); }

std::string pair_name(const Alphabet& left, const Alphabet& right, Letter alpha, Letter beta)
{
    auto single = [](const Alphabet& a) {
        return std::all_of(a.names().begin(), a.names().end(), [](const std::string& n) { return n.size() == 1; });
    };
    if (single(left) && single(right)) return left.name(alpha) + right.name(beta);
    return "(" + left.name(alpha) + "," + right.name(beta) + ")";
}

Substitution product(const Substitution& a, const Substitution& b)
{
    if (!(a.q() == b.q())) {
        throw InputError("substitution product needs equal expansions, got " + a.q().str() + " and " + b.q().str());
    }
    const std::size_t sa = a.size(), sb = b.size();
    std::vector<std::string> names;
    std::vector<std::vector<Letter>> rules;
    for (Letter x = 0; x < sa; ++x) {
        for (Letter y = 0; y < sb; ++y) {
            names.push_back(pair_name(a.alphabet(), b.alphabet(), x, y));
            std::vector<Letter> rule(a.Q());
            for (std::size_t c = 0; c < a.Q(); ++c)
                rule[c] = static_cast<Letter>(pair_index(a.image(x, c), b.image(y, c), sb));
            rules.push_back(std::move(rule));
        }
    }
    return Substitution(Alphabet(std::move(names)), a.q(), std::move(rules), AperiodicityPolicy::Unknown);
}

Substitution bisubstitution(const Substitution& s) { return product(s, s); }

Substitution telescope(const Substitution& s, unsigned h)
{
    if (h == 0) throw InputError("telescoping exponent must be positive");
    if (h == 1) return s;
    std::vector<std::vector<Letter>> rules;
    for (Letter g = 0; g < s.size(); ++g) rules.push_back(expand(s, g, h).cells);
    return Substitution(s.alphabet(), s.q().power_expansion(h), std::move(rules), s.policy());
}

Substitution restrict_to(const Substitution& s, const std::vector<Letter>& letters)
{
    std::vector<Letter> sorted = letters;
    std::sort(sorted.begin(), sorted.end());
    std::vector<long> remap(s.size(), -1);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        remap[sorted[i]] = static_cast<long>(i);
        names.push_back(s.alphabet().name(sorted[i]));
    }
    std::vector<std::vector<Letter>> rules;
    for (Letter g : sorted) {
        std::vector<Letter> rule;
        for (Letter x : s.rules()[g]) {
            if (remap[x] < 0) {
                throw InputError("letter set is not closed: '" + s.alphabet().name(g) + "' produces '" +
                                 s.alphabet().name(x) + "'");
            }
            rule.push_back(static_cast<Letter>(remap[x]));
        }
        rules.push_back(std::move(rule));
    }
    return Substitution(Alphabet(std::move(names)), s.q(), std::move(rules), s.policy());
}

Substitution permute_configuration(const Substitution& s, const std::vector<std::size_t>& perm)
{
    if (perm.size() != s.Q()) throw InputError("cell permutation has the wrong length");
    std::vector<std::vector<Letter>> rules(s.size(), std::vector<Letter>(s.Q()));
    for (std::size_t g = 0; g < s.size(); ++g)
        for (std::size_t c = 0; c < s.Q(); ++c) rules[g][c] = s.rules()[g].at(perm[c]);
    return Substitution(s.alphabet(), s.q(), std::move(rules), s.policy());
}

}  // namespace qspectra

#include "properties.hpp"

#include "qspectra/classifier.hpp"
#include "qspectra/fourier.hpp"
#include "qspectra/hull.hpp"
#include "qspectra/structure.hpp"

#include <algorithm>
#include <random>

namespace qspectra::test {

namespace {

struct Engine {
    PreparedSubstitution prep;
    InvariantWeights weights;
    CorrelationEngine engine;

    explicit Engine(const Substitution& s)
        : prep(prepare(s)),
          weights(invariant_weights(prep.telescoped, prep.decomposition)),
          engine(prep.telescoped, weights.u)
    {
    }
};

std::string at(const LatticePoint& k) { return " at k = " + k.str(); }

}  // namespace

std::vector<std::string> check_column_stochastic(const Substitution& s)
{
    std::vector<std::string> out;
    for (const Substitution* t : {&s}) {
        ExactMatrix m = substitution_matrix(*t);
        ExactMatrix c = coincidence_matrix(*t);
        Rational Q(static_cast<unsigned long>(t->Q()));
        for (const ExactMatrix* x : {&m, &c})
            for (std::size_t col = 0; col < x->cols(); ++col) {
                Rational sum = 0;
                for (std::size_t r = 0; r < x->rows(); ++r) {
                    if (sgn((*x)(r, col)) < 0) out.push_back("negative entry");
                    sum += (*x)(r, col);
                }
                if (sum != Q) out.push_back("column " + std::to_string(col) + " sums to " + to_string(sum));
            }
    }
    return out;
}

std::vector<std::string> check_instructions_vs_expansion(const Substitution& s, unsigned max_n)
{
    std::vector<std::string> out;
    for (unsigned n = 1; n <= max_n; ++n) {
        if (s.q().Q_power(n) > 1 << 16) break;
        std::vector<Block> blocks;
        for (Letter g = 0; g < s.size(); ++g) blocks.push_back(expand(s, g, n));
        Box box(blocks[0].shape);
        for (std::uint64_t idx = 0; idx < box.size(); ++idx) {
            auto j = box.unflatten(idx);
            LetterMap r = s.generalized_instruction(LatticePoint::from_small(j), n);
            for (Letter g = 0; g < s.size(); ++g)
                if (r[g] != blocks[g].at(j)) {
                    out.push_back("n = " + std::to_string(n) + at(LatticePoint::from_small(j)));
                    break;
                }
        }
    }
    return out;
}

std::vector<std::string> check_marginals(const Substitution& s, unsigned window_power)
{
    std::vector<std::string> out;
    Engine e(s);
    const std::size_t n = e.prep.telescoped.size();
    const ExactVector& u = e.weights.u;
    for (const auto& k : window(e.prep.telescoped.q(), window_power)) {
        ExactVector v = e.engine.coefficient(k);
        Rational total = 0;
        for (std::size_t a = 0; a < n; ++a) {
            Rational row = 0, col = 0;
            for (std::size_t b = 0; b < n; ++b) {
                row += v[a * n + b];
                col += v[b * n + a];
                if (sgn(v[a * n + b]) < 0) out.push_back("negative coefficient" + at(k));
            }
            if (row != u[a] || col != u[a]) out.push_back("marginal of letter " + std::to_string(a) + at(k));
            total += row;
        }
        if (total != 1) out.push_back("total mass " + to_string(total) + at(k));
    }
    return out;
}

std::vector<std::string> check_scaling(const Substitution& s, unsigned window_power)
{
    std::vector<std::string> out;
    Engine e(s);
    const Substitution& t = e.prep.telescoped;
    ExactMatrix c = coincidence_matrix(t);
    Rational invQ(1, static_cast<unsigned long>(t.Q()));
    for (const auto& a : window(t.q(), window_power)) {
        LatticePoint aq = a;
        for (std::size_t i = 0; i < a.dim(); ++i) aq[i] *= t.q()[i];
        if (e.engine.coefficient(aq) != scaled(c * e.engine.coefficient(a), invQ)) out.push_back("scaling" + at(a));
    }
    return out;
}

std::vector<std::string> check_swap_symmetry(const Substitution& s, unsigned window_power)
{
    std::vector<std::string> out;
    Engine e(s);
    const std::size_t n = e.prep.telescoped.size();
    for (const auto& k : window(e.prep.telescoped.q(), window_power)) {
        ExactVector v = e.engine.coefficient(k), w = e.engine.coefficient(-k);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (v[a * n + b] != w[b * n + a]) {
                    out.push_back("swap" + at(k));
                    a = n;
                    break;
                }
    }
    return out;
}

std::vector<std::string> check_bicorrelation(const Substitution& s, unsigned window_power)
{
    std::vector<std::string> out;
    Engine e(s);
    BicorrelationEngine b(e.prep.telescoped);
    for (const auto& k : window(e.prep.telescoped.q(), window_power))
        if (b.coefficient(k) * e.engine.sigma_zero() != e.engine.coefficient(k)) out.push_back("C_k Sigma(0)" + at(k));
    return out;
}

std::vector<std::string> check_projections(const Substitution& s)
{
    std::vector<std::string> out;
    Substitution t = prepare(s).telescoped;
    Rational Q(static_cast<unsigned long>(t.Q()));
    ExactMatrix m = substitution_matrix(t);
    ExactMatrix c = coincidence_matrix(t);
    for (const auto& [label, x] : {std::pair{"P", &m}, std::pair{"bi-P", &c}}) {
        ExactMatrix p = q_eigen_projection(*x, Q);
        if (!(p * p == p)) out.push_back(std::string(label) + " is not idempotent");
        if (!(*x * p == p.scaled(Q))) out.push_back(std::string(label) + ": M P != Q P");
        if (p.is_zero()) out.push_back(std::string(label) + " is zero");
    }
    return out;
}

std::vector<std::string> check_extreme_points(const Substitution& s)
{
    std::vector<std::string> out;
    PreparedSubstitution prep = prepare(s);
    InvariantWeights w = invariant_weights(prep.telescoped, prep.decomposition);
    for (const auto& comp : analyse_components(prep, w)) {
        const Substitution& cs = comp.substitution;
        ExactMatrix c = coincidence_matrix(cs);
        Rational Q(static_cast<unsigned long>(cs.Q()));
        for (const auto& p : comp.hull_result.points) {
            MembershipReport r = p.exact ? verify_membership(c, Q, comp.u, *p.exact) : verify_membership(c, Q, comp.u, p.v);
            if (!r.eigenvector) out.push_back("extreme point is not a left Q-eigenvector");
            if (!r.positive_semidefinite) out.push_back("extreme point is not strongly semipositive");
            if (!r.normalized) out.push_back("extreme point is not normalized");
            if (comp.hull.dimension() >= 1 && r.rank >= cs.size())
                out.push_back("extreme point has full rank " + std::to_string(r.rank));
        }
    }
    return out;
}

std::vector<std::string> check_configuration_invariance(std::uint64_t seed, int count)
{
    std::vector<std::string> out;
    std::mt19937_64 rng(seed);
    Alphabet abc({"a", "b", "c"});
    int done = 0;
    for (int attempt = 0; attempt < 50 * count && done < count; ++attempt) {
        std::vector<std::vector<Letter>> rules(3, std::vector<Letter>(3));
        for (std::size_t cell = 0; cell < 3; ++cell) {
            std::vector<Letter> perm{0, 1, 2};
            std::shuffle(perm.begin(), perm.end(), rng);
            for (Letter g = 0; g < 3; ++g) rules[g][cell] = perm[g];
        }
        Substitution s(abc, Expansion({3}), rules, AperiodicityPolicy::Unknown);
        if (!ergodic_decomposition(s).primitive()) continue;
        std::vector<std::size_t> cells{0, 1, 2};
        std::shuffle(cells.begin(), cells.end(), rng);
        Substitution t = permute_configuration(s, cells);

        auto hull = [](const Substitution& x) {
            PreparedSubstitution p = prepare(x);
            InvariantWeights w = invariant_weights(p.telescoped, p.decomposition);
            std::vector<ComplexVector> pts;
            for (const auto& c : analyse_components(p, w))
                for (const auto& e : c.hull_result.points) pts.push_back(e.v);
            return pts;
        };
        std::vector<ComplexVector> a, b;
        try {
            a = hull(s);
            b = hull(t);
        } catch (const std::exception& ex) {
            out.push_back(std::string("hull failed: ") + ex.what());
            continue;
        }
        auto contains = [](const std::vector<ComplexVector>& set, const ComplexVector& v) {
            return std::any_of(set.begin(), set.end(), [&](const ComplexVector& o) {
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (std::abs(v[i] - o[i]) > 1e-6) return false;
                return true;
            });
        };
        bool same = a.size() == b.size();
        for (const auto& v : a) same = same && contains(b, v);
        if (!same) out.push_back("hull changed under a cell permutation (sample " + std::to_string(done) + ")");
        ++done;
    }
    if (done < count) out.push_back("only " + std::to_string(done) + " primitive samples generated");
    return out;
}

const std::vector<NamedCheck>& per_substitution_checks()
{
    static const std::vector<NamedCheck> checks{
        {"column-stochastic", [](const Substitution& s) { return check_column_stochastic(s); }},
        {"instructions vs expansion (n <= 4)", [](const Substitution& s) { return check_instructions_vs_expansion(s); }},
        {"marginals and mass (power <= 3)", [](const Substitution& s) { return check_marginals(s); }},
        {"scaling Sigma(aq) = C Sigma(a) / Q", [](const Substitution& s) { return check_scaling(s); }},
        {"swap symmetry", [](const Substitution& s) { return check_swap_symmetry(s); }},
        {"bicorrelation C_k Sigma(0) = Sigma(k)", [](const Substitution& s) { return check_bicorrelation(s); }},
        {"projection idempotence, M P = Q P", [](const Substitution& s) { return check_projections(s); }},
        {"extreme points: eigenvector, PSD, normalized, rank-deficient",
         [](const Substitution& s) { return check_extreme_points(s); }},
    };
    return checks;
}

}  // namespace qspectra::test

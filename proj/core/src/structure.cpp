#include "qspectra/structure.hpp"

#include "qspectra/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

namespace qspectra {

namespace {

using Graph = std::vector<std::vector<std::size_t>>;

Graph graph_of(const std::vector<std::vector<bool>>& adj)
{
    Graph g(adj.size());
    for (std::size_t u = 0; u < adj.size(); ++u)
        for (std::size_t v = 0; v < adj.size(); ++v)
            if (adj[u][v]) g[u].push_back(v);
    return g;
}

// Tarjan's algorithm; components in discovery order.
std::vector<std::vector<std::size_t>> strongly_connected(const Graph& g)
{
    const std::size_t n = g.size();
    std::vector<long> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    long counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next < g[f.v].size()) {
                std::size_t w = g[f.v][f.next++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            std::size_t v = f.v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
        }
    }
    return out;
}

bool is_closed(const Graph& g, const std::vector<std::size_t>& comp)
{
    std::set<std::size_t> members(comp.begin(), comp.end());
    for (auto u : comp)
        for (auto v : g[u])
            if (!members.count(v)) return false;
    // A single vertex without a loop is not recurrent.
    if (comp.size() == 1) {
        const auto& out = g[comp[0]];
        return std::find(out.begin(), out.end(), comp[0]) != out.end();
    }
    return true;
}

unsigned period_of(const Graph& g, const std::vector<std::size_t>& comp)
{
    std::set<std::size_t> members(comp.begin(), comp.end());
    std::vector<long> level(g.size(), -1);
    std::queue<std::size_t> bfs;
    level[comp[0]] = 0;
    bfs.push(comp[0]);
    long period = 0;
    while (!bfs.empty()) {
        auto u = bfs.front();
        bfs.pop();
        for (auto v : g[u]) {
            if (!members.count(v)) continue;
            if (level[v] < 0) {
                level[v] = level[u] + 1;
                bfs.push(v);
            } else {
                period = std::gcd(period, std::labs(level[u] + 1 - level[v]));
            }
        }
    }
    return static_cast<unsigned>(period == 0 ? 1 : period);
}

std::vector<std::vector<bool>> boolean_power(const std::vector<std::vector<bool>>& adj, unsigned h)
{
    const std::size_t n = adj.size();
    std::vector<std::vector<bool>> cur(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) cur[i][i] = true;
    for (unsigned step = 0; step < h; ++step) {
        std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t m = 0; m < n; ++m)
                if (cur[u][m])
                    for (std::size_t v = 0; v < n; ++v)
                        if (adj[m][v]) next[u][v] = true;
        cur.swap(next);
    }
    return cur;
}

std::string word_of(const Alphabet& a, const std::vector<Letter>& w)
{
    bool single = std::all_of(a.names().begin(), a.names().end(), [](const std::string& n) { return n.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!single && i) out += " ";
        out += a.name(w[i]);
    }
    return out;
}

bool injective_on_letters(const Substitution& s)
{
    std::set<std::vector<Letter>> images(s.rules().begin(), s.rules().end());
    return images.size() == s.size();
}

std::optional<AperiodicityWitness> pansiot_search(const Substitution& s, unsigned max_depth)
{
    std::vector<std::set<std::vector<Letter>>> seen(s.size());
    for (unsigned n = 1; n <= max_depth; ++n) {
        Integer cells = s.q().Q_power(n);
        if (cells > Integer(std::to_string(cell_budget()))) break;
        for (Letter g = 0; g < s.size(); ++g) {
            auto w = expand(s, g, n).cells;
            for (std::size_t i = 1; i + 1 < w.size(); ++i) {
                std::vector<Letter> nb{w[i - 1], w[i], w[i + 1]};
                auto& bucket = seen[w[i]];
                bucket.insert(nb);
                if (bucket.size() >= 2) {
                    auto it = bucket.begin();
                    AperiodicityWitness wit;
                    wit.letter = s.alphabet().name(w[i]);
                    wit.first = word_of(s.alphabet(), *it);
                    wit.second = word_of(s.alphabet(), *std::next(it));
                    wit.depth = n;
                    return wit;
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::size_t> ErgodicDecomposition::class_of(Letter a) const
{
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (std::binary_search(classes[i].begin(), classes[i].end(), a)) return i;
    return std::nullopt;
}

ErgodicDecomposition ergodic_decomposition(const ExactMatrix& m)
{
    if (!m.is_square()) throw InputError("decomposition needs a square matrix");
    const std::size_t n = m.rows();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t g = 0; g < n; ++g) {
            if (sgn(m(a, g)) < 0) throw InputError("decomposition needs a nonnegative matrix");
            if (sgn(m(a, g)) > 0) adj[g][a] = true;
        }
    Graph g = graph_of(adj);
    ErgodicDecomposition d;
    unsigned h = 1;
    for (const auto& comp : strongly_connected(g)) {
        if (!is_closed(g, comp)) continue;
        unsigned p = period_of(g, comp);
        d.periods.push_back(p);
        h = std::lcm(h, p);
    }
    d.index = h;
    Graph gh = (h == 1) ? g : graph_of(boolean_power(adj, h));
    for (const auto& comp : strongly_connected(gh)) {
        if (!is_closed(gh, comp)) continue;
        std::vector<Letter> cls(comp.begin(), comp.end());
        d.classes.push_back(std::move(cls));
    }
    std::sort(d.classes.begin(), d.classes.end());
    std::vector<bool> recurrent(n, false);
    for (const auto& c : d.classes)
        for (auto a : c) recurrent[a] = true;
    for (Letter a = 0; a < n; ++a)
        if (!recurrent[a]) d.transient.push_back(a);
    return d;
}

ErgodicDecomposition ergodic_decomposition(const Substitution& s)
{
    return ergodic_decomposition(substitution_matrix(s));
}

InvariantWeights invariant_weights(const Substitution& s, const ErgodicDecomposition& d,
                                   const std::optional<std::vector<Rational>>& class_coefficients)
{
    const std::size_t K = d.classes.size();
    InvariantWeights w;
    if (class_coefficients) {
        if (class_coefficients->size() != K) {
            throw InputError("expected " + std::to_string(K) + " class coefficients, found " +
                             std::to_string(class_coefficients->size()));
        }
        Rational total = 0;
        for (const auto& c : *class_coefficients) {
            if (sgn(c) < 0) throw InputError("class coefficients must be nonnegative");
            total += c;
        }
        if (total != 1) throw InputError("class coefficients must sum to 1");
        w.class_coefficients = *class_coefficients;
    } else {
        w.class_coefficients.assign(K, Rational(1, static_cast<unsigned long>(K)));
    }
    ExactMatrix mh = substitution_matrix(s).pow(d.index);
    Rational qh(s.q().Q_power(d.index));
    w.u = zero_vector(s.size());
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<std::size_t> idx(d.classes[k].begin(), d.classes[k].end());
        ExactMatrix sub = mh.submatrix(idx, idx) - ExactMatrix::identity(idx.size()).scaled(qh);
        ExactMatrix ns = nullspace(sub);
        if (ns.cols() != 1) {
            throw NumericalError("Perron eigenspace of class " + std::to_string(k) + " has dimension " +
                                 std::to_string(ns.cols()));
        }
        ExactVector v = ns.column(0);
        Rational total = 0;
        for (const auto& x : v) total += x;
        ExactVector full = zero_vector(s.size());
        for (std::size_t i = 0; i < idx.size(); ++i) full[idx[i]] = v[i] / total;
        for (std::size_t i = 0; i < s.size(); ++i) w.u[i] += w.class_coefficients[k] * full[i];
        w.per_class.push_back(std::move(full));
    }
    return w;
}

ExactMatrix q_eigen_projection(const ExactMatrix& m, const Rational& q)
{
    ExactMatrix shifted = m - ExactMatrix::identity(m.rows()).scaled(q);
    ExactMatrix a = nullspace(shifted);
    ExactMatrix b = left_nullspace(shifted);
    if (a.cols() == 0) return ExactMatrix(m.rows(), m.cols());
    auto inv = inverse(b * a);
    if (!inv) throw NumericalError("eigenvalue is not semisimple; projection undefined");
    return a * (*inv) * b;
}

std::string to_string(AperiodicityStatus s)
{
    switch (s) {
    case AperiodicityStatus::Verified: return "verified";
    case AperiodicityStatus::Asserted: return "asserted";
    case AperiodicityStatus::Unknown: return "unknown";
    case AperiodicityStatus::Inapplicable: return "inapplicable";
    }
    return "unknown";
}

AperiodicityVerdict check_aperiodicity(const Substitution& s, unsigned max_depth)
{
    AperiodicityVerdict v;
    auto fallback = [&](AperiodicityStatus otherwise, std::string why) {
        if (s.policy() == AperiodicityPolicy::Asserted) {
            v.status = AperiodicityStatus::Asserted;
            v.explanation = why + "; aperiodicity asserted by the input";
        } else {
            v.status = otherwise;
            v.explanation = std::move(why);
        }
        return v;
    };
    if (s.dim() != 1) {
        return fallback(AperiodicityStatus::Unknown, "no neighborhood criterion is available for d > 1");
    }
    ErgodicDecomposition d = ergodic_decomposition(s);
    Substitution t = telescope(s, d.index);
    if (d.primitive()) {
        if (!injective_on_letters(t)) {
            return fallback(AperiodicityStatus::Inapplicable, "substitution is not injective on letters");
        }
        auto wit = pansiot_search(t, max_depth);
        if (!wit) {
            return fallback(AperiodicityStatus::Unknown,
                            "no letter with two neighborhoods up to depth " + std::to_string(max_depth));
        }
        v.status = AperiodicityStatus::Verified;
        v.explanation = "letter '" + wit->letter + "' has neighborhoods " + wit->first + " and " + wit->second;
        v.witnesses.push_back(*wit);
        return v;
    }
    for (const auto& cls : d.classes) {
        Substitution c = restrict_to(t, cls);
        std::string label = "{" + word_of(s.alphabet(), cls) + "}";
        if (!injective_on_letters(c)) {
            return fallback(AperiodicityStatus::Inapplicable, "class " + label + " is not injective on letters");
        }
        auto wit = pansiot_search(c, max_depth);
        if (!wit) {
            return fallback(AperiodicityStatus::Unknown,
                            "class " + label + ": no letter with two neighborhoods up to depth " +
                                std::to_string(max_depth));
        }
        wit->component = label;
        v.witnesses.push_back(*wit);
    }
    v.status = AperiodicityStatus::Verified;
    v.explanation = "verified on each ergodic class of the telescoped substitution";
    return v;
}

StructuralPredicates structural_predicates(const Substitution& s)
{
    StructuralPredicates p;
    std::vector<LetterMap> instr;
    for (std::size_t c = 0; c < s.Q(); ++c) instr.push_back(s.instruction(c));
    p.bijective = std::all_of(instr.begin(), instr.end(), [](const LetterMap& m) { return is_permutation(m); });
    p.commutative = true;
    for (std::size_t i = 0; i < instr.size() && p.commutative; ++i)
        for (std::size_t j = i + 1; j < instr.size(); ++j)
            if (compose(instr[i], instr[j]) != compose(instr[j], instr[i])) {
                p.commutative = false;
                break;
            }
    return p;
}

IndexCrossCheck index_cross_check(const ExactMatrix& m, const Rational& q, const ErgodicDecomposition& d)
{
    IndexCrossCheck c;
    c.graph_index = d.index;
    const auto n = static_cast<Eigen::Index>(m.rows());
    Eigen::MatrixXd md(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) md(i, j) = m(i, j).get_d();
    Eigen::EigenSolver<Eigen::MatrixXd> es(md, false);
    const double qd = q.get_d();
    unsigned h = 1;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::complex<double> z = es.eigenvalues()(i);
        if (std::abs(std::abs(z) - qd) > 1e-7 * qd) continue;
        c.peripheral.push_back(z);
        std::complex<double> u = z / qd, p = u;
        unsigned order = 1;
        while (std::abs(p - 1.0) > 1e-6 && order <= m.rows()) {
            p *= u;
            ++order;
        }
        h = std::lcm(h, order);
    }
    c.eigen_index = h;
    return c;
}

PreparedSubstitution prepare(const Substitution& s)
{
    PreparedSubstitution p;
    p.original = s;
    p.original_decomposition = ergodic_decomposition(s);
    p.index = p.original_decomposition.index;
    p.bi_index = ergodic_decomposition(coincidence_matrix(s)).index;
    p.exponent = std::lcm(p.index, p.bi_index);
    p.telescoped = telescope(s, p.exponent);
    p.decomposition = ergodic_decomposition(p.telescoped);
    p.bi_decomposition = ergodic_decomposition(coincidence_matrix(p.telescoped));
    if (p.decomposition.index != 1 || p.bi_decomposition.index != 1) {
        throw NumericalError("telescoping by " + std::to_string(p.exponent) + " did not reach index one");
    }
    return p;
}

}  // namespace qspectra

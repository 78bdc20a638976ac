#include "qspectra/oracle.hpp"

#include "qspectra/errors.hpp"
#include "qspectra/fourier.hpp"

#include <algorithm>

namespace qspectra {

namespace {

// Row x0 of S^n(gamma) over the remaining coordinates, last coordinate fastest.
std::vector<Letter> slab(const Substitution& s, Letter gamma, unsigned n, std::int64_t x0, const Box& rest_unit)
{
    const auto& q = s.q();
    std::vector<std::uint32_t> dig(n);
    for (unsigned m = 0; m < n; ++m) {
        dig[m] = static_cast<std::uint32_t>(x0 % q[0]);
        x0 /= q[0];
    }
    const std::size_t dr = q.dim() - 1;
    std::vector<Letter> cur{gamma};
    std::vector<std::int64_t> shape(dr, 1);
    for (unsigned lvl = n; lvl-- > 0;) {
        std::vector<std::int64_t> next_shape(dr);
        for (std::size_t i = 0; i < dr; ++i) next_shape[i] = shape[i] * q[i + 1];
        Box from(shape), to(next_shape);
        std::vector<Letter> next(to.size());
        const std::uint64_t offset = static_cast<std::uint64_t>(dig[lvl]) * rest_unit.size();
        for (std::uint64_t c = 0; c < cur.size(); ++c) {
            auto base = from.unflatten(c);
            for (std::size_t i = 0; i < dr; ++i) base[i] *= q[i + 1];
            const auto& rule = s.rules()[cur[c]];
            for (std::uint64_t r = 0; r < rest_unit.size(); ++r) {
                auto pos = rest_unit.unflatten(r);
                for (std::size_t i = 0; i < dr; ++i) pos[i] += base[i];
                next[to.flatten(pos)] = rule[offset + r];
            }
        }
        cur.swap(next);
        shape.swap(next_shape);
    }
    return cur;
}

void check_request(const Substitution& s, unsigned n, const LatticePoint& k)
{
    if (k.dim() != s.dim()) throw InputError("k = " + k.str() + " has the wrong dimension");
    unsigned p = power_of(k, s.q());
    if (n < p + 1) {
        throw InputError("depth " + std::to_string(n) + " is too small for k = " + k.str() + "; need at least " +
                         std::to_string(p + 1));
    }
    check_cell_budget(s.q(), n, "frequency count at depth " + std::to_string(n));
}

}  // namespace

FrequencyVector pair_frequency(const Substitution& s, Letter gamma, unsigned n, const LatticePoint& k)
{
    if (gamma >= s.size()) throw InputError("starting letter outside the alphabet");
    check_request(s, n, k);
    const std::size_t letters = s.size();
    FrequencyVector f;
    f.n = n;
    f.k = k;
    f.gamma = gamma;
    f.counts.assign(letters * letters, 0);
    const auto ks = k.to_small();
    const auto qn = s.q().small_power(n);
    std::uint64_t valid = 0;
    if (s.dim() == 1) {
        Block b = expand(s, gamma, n);
        const std::int64_t len = qn[0];
        for (std::int64_t j = std::max<std::int64_t>(0, -ks[0]); j < len && j + ks[0] < len; ++j) {
            ++f.counts[b.cells[j] * letters + b.cells[j + ks[0]]];
            ++valid;
        }
    } else {
        std::vector<std::int64_t> unit_shape(s.q().values().begin() + 1, s.q().values().end());
        Box rest_unit(unit_shape);
        std::vector<std::int64_t> rest_shape(qn.begin() + 1, qn.end());
        Box rest(rest_shape);
        std::vector<std::int64_t> kr(ks.begin() + 1, ks.end());
        for (std::int64_t x0 = 0; x0 < qn[0]; ++x0) {
            std::int64_t x1 = x0 + ks[0];
            if (x1 < 0 || x1 >= qn[0]) continue;
            auto a = slab(s, gamma, n, x0, rest_unit);
            auto b = ks[0] == 0 ? a : slab(s, gamma, n, x1, rest_unit);
            for (std::uint64_t y = 0; y < rest.size(); ++y) {
                auto pos = rest.unflatten(y);
                for (std::size_t i = 0; i < pos.size(); ++i) pos[i] += kr[i];
                if (!rest.contains(pos)) continue;
                ++f.counts[a[y] * letters + b[rest.flatten(pos)]];
                ++valid;
            }
        }
    }
    f.positions = Integer(std::to_string(valid));
    const Rational total(s.q().Q_power(n));
    f.normalized.resize(f.counts.size());
    for (std::size_t i = 0; i < f.counts.size(); ++i) f.normalized[i] = Rational(Integer(std::to_string(f.counts[i]))) / total;
    return f;
}

FrequencyVector averaged_pair_frequency(const Substitution& s, const ExactVector& u, unsigned n, const LatticePoint& k)
{
    if (u.size() != s.size()) throw InputError("letter-frequency vector has the wrong length");
    check_request(s, n, k);
    FrequencyVector out;
    out.n = n;
    out.k = k;
    out.counts.assign(s.size() * s.size(), 0);
    out.normalized = zero_vector(s.size() * s.size());
    out.positions = 0;
    for (Letter g = 0; g < s.size(); ++g) {
        if (sgn(u[g]) == 0) continue;
        FrequencyVector f = pair_frequency(s, g, n, k);
        for (std::size_t i = 0; i < f.counts.size(); ++i) {
            out.counts[i] += f.counts[i];
            out.normalized[i] += u[g] * f.normalized[i];
        }
        out.positions = f.positions;
    }
    return out;
}

Comparison compare(const FrequencyVector& oracle, const ExactVector& exact, std::size_t letters, const Expansion& q)
{
    if (oracle.normalized.size() != exact.size()) throw InputError("oracle and exact vectors differ in length");
    Comparison c;
    c.deviation = subtract(oracle.normalized, exact);
    c.l1 = 0;
    c.max_deviation = 0;
    for (const auto& d : c.deviation) {
        Rational a = abs(d);
        c.l1 += a;
        if (a > c.max_deviation) c.max_deviation = a;
    }
    const Rational qn(q.Q_power(oracle.n));
    const Rational carry(carry_set_size(oracle.k, q, oracle.n));
    c.carry_bound = carry / qn;
    c.budget = (Rational(static_cast<unsigned long>(letters)) * carry + carry) / qn;
    return c;
}

void write_frequency_csv(std::ostream& out, const Alphabet& alphabet, const FrequencyVector& f, const ExactVector& exact)
{
    const std::size_t s = alphabet.size();
    out << "n,k,pair,frequency,exact,deviation\n";
    for (Letter a = 0; a < s; ++a)
        for (Letter b = 0; b < s; ++b) {
            const std::size_t i = a * s + b;
            Rational dev = f.normalized[i] - exact[i];
            out << f.n << ',' << csv_point(f.k) << ',' << csv_field(pair_name(alphabet, alphabet, a, b)) << ','
                << to_string(f.normalized[i]) << ',' << to_string(exact[i]) << ',' << to_string(dev) << '\n';
        }
}

}  // namespace qspectra

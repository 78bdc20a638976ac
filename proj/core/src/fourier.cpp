#include "qspectra/fourier.hpp"

#include "qspectra/errors.hpp"
#include "qspectra/structure.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>

namespace qspectra {

namespace {

// Carry of j + c out of [0, q^p) per coordinate, and the landing cell.
struct Split {
    std::vector<std::int64_t> quot;
    std::vector<std::int64_t> rem;
};

Split split(const std::vector<std::int64_t>& j, const std::vector<std::int64_t>& k, const std::vector<std::int64_t>& qp)
{
    Split s{std::vector<std::int64_t>(j.size()), std::vector<std::int64_t>(j.size())};
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::int64_t t = j[i] + k[i];
        std::int64_t q = t >= 0 ? t / qp[i] : -((-t + qp[i] - 1) / qp[i]);
        s.quot[i] = q;
        s.rem[i] = t - q * qp[i];
    }
    return s;
}

ExactMatrix as_column(const ExactVector& v) { return ExactMatrix::from_columns({v}, v.size()); }

void add_into(ExactMatrix& acc, const ExactMatrix& x)
{
    for (std::size_t r = 0; r < acc.rows(); ++r)
        for (std::size_t c = 0; c < acc.cols(); ++c)
            if (sgn(x(r, c)) != 0) acc(r, c) += x(r, c);
}

// Solves (Q^p I - sum_{self} K_j) X = sum_{others} K_j X(quot), increasing p until invertible.
ExactMatrix solve_corner(const Substitution& s, const LatticePoint& c, unsigned p_max,
                         const std::function<const ExactMatrix&(const LatticePoint&)>& known, std::size_t cols,
                         unsigned& p_used)
{
    const std::size_t n = s.size() * s.size();
    const auto cs = c.to_small();
    for (unsigned p = 1; p <= p_max; ++p) {
        InstructionTable tab(s, p);
        const auto qp = s.q().small_power(p);
        Rational Qp(s.q().Q_power(p));
        ExactMatrix a = ExactMatrix::identity(n).scaled(Qp);
        ExactMatrix rhs(n, cols);
        for (std::uint64_t f = 0; f < tab.box().size(); ++f) {
            auto j = tab.box().unflatten(f);
            Split sp = split(j, cs, qp);
            const LetterMap& ra = tab.at(f);
            const LetterMap& rb = tab.at(sp.rem);
            LatticePoint quot = LatticePoint::from_small(sp.quot);
            if (quot == c) {
                for (std::size_t g = 0; g < s.size(); ++g)
                    for (std::size_t d = 0; d < s.size(); ++d) a(ra[g] * s.size() + rb[d], g * s.size() + d) -= 1;
            } else {
                add_into(rhs, apply_pair(ra, rb, known(quot)));
            }
        }
        if (auto x = solve(a, rhs)) {
            p_used = p;
            return *x;
        }
    }
    throw NumericalError("corner " + c.str() + ": system is singular up to p_max = " + std::to_string(p_max) +
                         "; increase p_max");
}

ExactVector swapped(const ExactVector& v, std::size_t s)
{
    ExactVector out(v.size());
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < s; ++b) out[b * s + a] = v[a * s + b];
    return out;
}

}  // namespace

ExactVector sigma_zero(const ExactVector& u)
{
    const std::size_t s = u.size();
    ExactVector v = zero_vector(s * s);
    for (std::size_t a = 0; a < s; ++a) v[a * s + a] = u[a];
    return v;
}

std::string to_string(Route r)
{
    switch (r) {
    case Route::Ground: return "ground";
    case Route::Corner: return "corner";
    case Route::Direct: return "direct";
    case Route::Descent: return "descent";
    }
    return "ground";
}

ExactMatrix apply_pair(const LetterMap& a, const LetterMap& b, const ExactMatrix& x)
{
    const std::size_t s = a.size();
    ExactMatrix out(x.rows(), x.cols());
    for (std::size_t g = 0; g < s; ++g)
        for (std::size_t d = 0; d < s; ++d) {
            std::size_t from = g * s + d, to = a[g] * s + b[d];
            for (std::size_t c = 0; c < x.cols(); ++c)
                if (sgn(x(from, c)) != 0) out(to, c) += x(from, c);
        }
    return out;
}

ExactVector apply_pair(const LetterMap& a, const LetterMap& b, const ExactVector& x)
{
    const std::size_t s = a.size();
    ExactVector out = zero_vector(x.size());
    for (std::size_t g = 0; g < s; ++g)
        for (std::size_t d = 0; d < s; ++d)
            if (sgn(x[g * s + d]) != 0) out[a[g] * s + b[d]] += x[g * s + d];
    return out;
}

std::vector<LatticePoint> corners(std::size_t d)
{
    std::vector<LatticePoint> out;
    std::vector<std::int64_t> c(d, -1);
    while (true) {
        LatticePoint p = LatticePoint::from_small(c);
        if (!p.is_zero()) out.push_back(p);
        std::size_t i = d;
        while (i > 0 && c[i - 1] == 1) c[--i] = -1;
        if (i == 0) break;
        ++c[i - 1];
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const LatticePoint& a, const LatticePoint& b) { return a.support_size() < b.support_size(); });
    return out;
}

CorrelationEngine::CorrelationEngine(Substitution s, ExactVector u, unsigned p_max)
    : s_(std::move(s)), u_(std::move(u)), p_max_(p_max)
{
    if (u_.size() != s_.size()) throw InputError("letter-frequency vector has the wrong length");
    if (p_max_ == 0) throw InputError("p_max must be positive");
    zero_ = qspectra::sigma_zero(u_);
    std::map<LatticePoint, ExactMatrix> solved;
    ExactMatrix zero_col = as_column(zero_);
    auto known = [&](const LatticePoint& c) -> const ExactMatrix& {
        if (c.is_zero()) return zero_col;
        return solved.at(c);
    };
    for (const auto& c : corners(s_.dim())) {
        unsigned p = 0;
        ExactMatrix x = solve_corner(s_, c, p_max_, known, 1, p);
        solved.emplace(c, x);
        base_.emplace(c, CorrelationEntry{x.column(0), Provenance{Route::Corner, p}});
    }
    // Negative corners against their positive partners by swap symmetry.
    for (const auto& [c, e] : base_) {
        const auto& partner = base_.at(-c);
        if (!(swapped(partner.value, s_.size()) == e.value)) {
            throw NumericalError("corner " + c.str() + " fails swap symmetry against " + (-c).str());
        }
    }
}

const InstructionTable& CorrelationEngine::table(unsigned p)
{
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = tables_[p];
    if (!slot) slot = std::make_unique<InstructionTable>(s_, p);
    return *slot;
}

ExactVector CorrelationEngine::corner_value(const LatticePoint& c) const
{
    if (c.is_zero()) return zero_;
    return base_.at(c).value;
}

ExactVector CorrelationEngine::direct(const LatticePoint& k, unsigned p)
{
    if (p == 0 || power_of(k, s_.q()) > p) throw InputError("direct sum needs p >= power_of(k) and p >= 1");
    check_cell_budget(s_.q(), p, "coefficient sum of depth " + std::to_string(p));
    const InstructionTable& tab = table(p);
    const auto ks = k.to_small();
    const auto qp = s_.q().small_power(p);
    ExactVector acc = zero_vector(s_.size() * s_.size());
    std::map<LatticePoint, ExactVector> ground;
    for (std::uint64_t f = 0; f < tab.box().size(); ++f) {
        auto j = tab.box().unflatten(f);
        Split sp = split(j, ks, qp);
        LatticePoint quot = LatticePoint::from_small(sp.quot);
        auto it = ground.find(quot);
        if (it == ground.end()) it = ground.emplace(quot, corner_value(quot)).first;
        ExactVector term = apply_pair(tab.at(f), tab.at(sp.rem), it->second);
        for (std::size_t i = 0; i < acc.size(); ++i)
            if (sgn(term[i]) != 0) acc[i] += term[i];
    }
    return scaled(acc, Rational(1) / Rational(s_.q().Q_power(p)));
}

ExactVector CorrelationEngine::descent(const LatticePoint& k)
{
    std::map<LatticePoint, ExactVector> memo;
    std::vector<LetterMap> instr;
    for (std::size_t c = 0; c < s_.Q(); ++c) instr.push_back(s_.instruction(c));
    Box unit(std::vector<std::int64_t>(s_.q().values().begin(), s_.q().values().end()));
    const Rational inv_q = Rational(1) / Rational(static_cast<unsigned long>(s_.Q()));
    std::function<ExactVector(const LatticePoint&)> rec = [&](const LatticePoint& x) -> ExactVector {
        if (x.is_zero()) return zero_;
        if (auto it = base_.find(x); it != base_.end()) return it->second.value;
        if (auto it = memo.find(x); it != memo.end()) return it->second;
        ExactVector acc = zero_vector(zero_.size());
        for (std::uint64_t f = 0; f < unit.size(); ++f) {
            LatticePoint j = LatticePoint::from_small(unit.unflatten(f));
            DivMod dm = divmod_qn(j + x, s_.q(), 1);
            auto rem = dm.rem.to_small();
            ExactVector term = apply_pair(instr[f], instr[unit.flatten(rem)], rec(dm.quot));
            for (std::size_t i = 0; i < acc.size(); ++i)
                if (sgn(term[i]) != 0) acc[i] += term[i];
        }
        acc = scaled(acc, inv_q);
        memo.emplace(x, acc);
        return acc;
    };
    return rec(k);
}

ExactVector CorrelationEngine::coefficient(const LatticePoint& k)
{
    if (k.dim() != s_.dim()) {
        throw InputError("k = " + k.str() + " has dimension " + std::to_string(k.dim()) + ", expected " +
                         std::to_string(s_.dim()));
    }
    if (k.is_zero()) return zero_;
    if (auto it = base_.find(k); it != base_.end()) return it->second.value;
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (auto it = cache_.find(k); it != cache_.end()) return it->second.value;
    }
    unsigned p = power_of(k, s_.q());
    CorrelationEntry e;
    bool small = p <= 64 && s_.q().Q_power(p) <= Integer(std::to_string(std::min<std::uint64_t>(kDirectLimit, cell_budget())));
    if (small) {
        e = {direct(k, p), {Route::Direct, p}};
    } else {
        e = {descent(k), {Route::Descent, 1}};
    }
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(k, std::move(e)).first->second.value;
}

Provenance CorrelationEngine::provenance(const LatticePoint& k)
{
    if (k.is_zero()) return {Route::Ground, 0};
    if (auto it = base_.find(k); it != base_.end()) return it->second.provenance;
    coefficient(k);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.at(k).provenance;
}

std::vector<ExactVector> CorrelationEngine::coefficients(const std::vector<LatticePoint>& ks, unsigned jobs)
{
    std::vector<ExactVector> out(ks.size());
    if (jobs <= 1 || ks.size() < 2) {
        for (std::size_t i = 0; i < ks.size(); ++i) out[i] = coefficient(ks[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex fail_mu;
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= ks.size()) return;
            try {
                out[i] = coefficient(ks[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(fail_mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(ks.size()));
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

BicorrelationEngine::BicorrelationEngine(const Substitution& s, unsigned p_max) : s_(s), p_max_(p_max)
{
    ground_ = q_eigen_projection(coincidence_matrix(s_), Rational(static_cast<unsigned long>(s_.Q())));
    const std::size_t n = s_.size() * s_.size();
    auto known = [&](const LatticePoint& c) -> const ExactMatrix& {
        if (c.is_zero()) return ground_;
        return base_.at(c);
    };
    for (const auto& c : corners(s_.dim())) {
        unsigned p = 0;
        base_.emplace(c, solve_corner(s_, c, p_max_, known, n, p));
    }
}

ExactMatrix BicorrelationEngine::corner_or_ground(const LatticePoint& c) const
{
    if (c.is_zero()) return ground_;
    return base_.at(c);
}

ExactMatrix BicorrelationEngine::coefficient(const LatticePoint& k)
{
    if (k.is_zero()) return ground_;
    if (auto it = base_.find(k); it != base_.end()) return it->second;
    unsigned p = power_of(k, s_.q());
    check_cell_budget(s_.q(), p, "bicorrelation sum of depth " + std::to_string(p));
    InstructionTable tab(s_, p);
    const auto ks = k.to_small();
    const auto qp = s_.q().small_power(p);
    ExactMatrix acc(ground_.rows(), ground_.cols());
    for (std::uint64_t f = 0; f < tab.box().size(); ++f) {
        Split sp = split(tab.box().unflatten(f), ks, qp);
        add_into(acc, apply_pair(tab.at(f), tab.at(sp.rem), corner_or_ground(LatticePoint::from_small(sp.quot))));
    }
    return acc.scaled(Rational(1) / Rational(s_.q().Q_power(p)));
}

std::string csv_field(const std::string& text)
{
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_point(const LatticePoint& k)
{
    std::string out;
    for (std::size_t i = 0; i < k.dim(); ++i) {
        if (i) out += ';';
        out += k[i].get_str();
    }
    return out;
}

void write_coefficient_csv(std::ostream& out, const Alphabet& alphabet, const std::vector<LatticePoint>& ks,
                           const std::vector<ExactVector>& values)
{
    const std::size_t s = alphabet.size();
    out << "k,pair,num,den\n";
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const std::string kp = csv_point(ks[i]);
        for (Letter a = 0; a < s; ++a)
            for (Letter b = 0; b < s; ++b) {
                const Rational& v = values[i][a * s + b];
                out << kp << ',' << csv_field(pair_name(alphabet, alphabet, a, b)) << ',' << v.get_num().get_str() << ','
                    << v.get_den().get_str() << '\n';
            }
    }
}

}  // namespace qspectra

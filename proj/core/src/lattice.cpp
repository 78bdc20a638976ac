#include "qspectra/lattice.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qspectra {

LatticePoint::LatticePoint(std::initializer_list<long> coords)
{
    for (long x : coords) c_.emplace_back(x);
}

LatticePoint LatticePoint::from_small(const std::vector<std::int64_t>& coords)
{
    std::vector<Integer> c;
    c.reserve(coords.size());
    for (auto x : coords) c.emplace_back(static_cast<long>(x));
    return LatticePoint(std::move(c));
}

LatticePoint LatticePoint::constant(std::size_t dim, long value)
{
    return LatticePoint(std::vector<Integer>(dim, Integer(value)));
}

LatticePoint LatticePoint::unit(std::size_t dim, std::size_t axis)
{
    LatticePoint p(dim);
    p[axis] = 1;
    return p;
}

bool LatticePoint::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const Integer& x) { return sgn(x) == 0; });
}

std::size_t LatticePoint::support_size() const
{
    return static_cast<std::size_t>(
        std::count_if(c_.begin(), c_.end(), [](const Integer& x) { return sgn(x) != 0; }));
}

std::vector<std::int64_t> LatticePoint::to_small() const
{
    std::vector<std::int64_t> out;
    out.reserve(c_.size());
    for (const auto& x : c_) {
        if (!x.fits_slong_p()) throw std::overflow_error("lattice coordinate exceeds 64 bits");
        out.push_back(x.get_si());
    }
    return out;
}

std::string LatticePoint::str() const
{
    if (c_.size() == 1) return c_[0].get_str();
    std::string s = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) s += ",";
        s += c_[i].get_str();
    }
    return s + ")";
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const
{
    if (dim() != o.dim()) throw std::invalid_argument("lattice dimension mismatch");
    LatticePoint r(dim());
    for (std::size_t i = 0; i < dim(); ++i) r[i] = c_[i] + o[i];
    return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const
{
    if (dim() != o.dim()) throw std::invalid_argument("lattice dimension mismatch");
    LatticePoint r(dim());
    for (std::size_t i = 0; i < dim(); ++i) r[i] = c_[i] - o[i];
    return r;
}

LatticePoint LatticePoint::operator-() const
{
    LatticePoint r(dim());
    for (std::size_t i = 0; i < dim(); ++i) r[i] = -c_[i];
    return r;
}

LatticePoint LatticePoint::scaled(const Integer& a) const
{
    LatticePoint r(dim());
    for (std::size_t i = 0; i < dim(); ++i) r[i] = c_[i] * a;
    return r;
}

LatticePoint parse_lattice_point(const std::string& text, std::size_t dim)
{
    std::string t;
    for (char ch : text) {
        if (ch == '(' || ch == ')' || ch == ' ') continue;
        t += (ch == ';') ? ',' : ch;
    }
    std::vector<Integer> coords;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Integer z;
        if (item.empty() || z.set_str(item[0] == '+' ? item.substr(1) : item, 10) != 0) {
            throw std::invalid_argument("not a lattice point: '" + text + "'");
        }
        coords.push_back(z);
    }
    if (coords.size() != dim) {
        throw std::invalid_argument("lattice point '" + text + "' has " + std::to_string(coords.size()) +
                                    " coordinates, expected " + std::to_string(dim));
    }
    return LatticePoint(std::move(coords));
}

Expansion::Expansion(std::vector<std::uint32_t> q) : q_(std::move(q))
{
    if (q_.empty()) throw std::invalid_argument("expansion must have at least one coordinate");
    for (auto x : q_)
        if (x < 2) throw std::invalid_argument("expansion entries must be at least 2");
}

std::uint64_t Expansion::Q() const
{
    std::uint64_t p = 1;
    for (auto x : q_) p *= x;
    return p;
}

Integer Expansion::power(std::size_t i, unsigned n) const
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), q_[i], n);
    return r;
}

Integer Expansion::Q_power(unsigned n) const
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), Q(), n);
    return r;
}

std::vector<std::int64_t> Expansion::small_power(unsigned n) const
{
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < q_.size(); ++i) {
        Integer p = power(i, n);
        if (!p.fits_slong_p()) throw std::overflow_error("q^n exceeds 64 bits");
        out.push_back(p.get_si());
    }
    return out;
}

Expansion Expansion::power_expansion(unsigned n) const
{
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < q_.size(); ++i) {
        Integer p = power(i, n);
        if (!p.fits_uint_p()) throw std::overflow_error("telescoped expansion exceeds 32 bits");
        out.push_back(static_cast<std::uint32_t>(p.get_ui()));
    }
    return Expansion(std::move(out));
}

std::string Expansion::str() const
{
    if (q_.size() == 1) return std::to_string(q_[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < q_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(q_[i]);
    }
    return s + ")";
}

DivMod divmod_qn(const LatticePoint& k, const Expansion& q, unsigned n)
{
    if (k.dim() != q.dim()) throw std::invalid_argument("lattice point and expansion dimensions differ");
    DivMod r{LatticePoint(k.dim()), LatticePoint(k.dim())};
    for (std::size_t i = 0; i < k.dim(); ++i) {
        Integer m = q.power(i, n);
        mpz_fdiv_qr(r.quot[i].get_mpz_t(), r.rem[i].get_mpz_t(), k[i].get_mpz_t(), m.get_mpz_t());
    }
    return r;
}

std::vector<Digit> digits(const LatticePoint& k, const Expansion& q, unsigned n)
{
    LatticePoint rem = divmod_qn(k, q, n).rem;
    std::vector<Digit> out(n, Digit(k.dim(), 0));
    for (std::size_t i = 0; i < k.dim(); ++i) {
        Integer x = rem[i];
        for (unsigned t = 0; t < n; ++t) {
            out[t][i] = static_cast<std::uint32_t>(mpz_fdiv_ui(x.get_mpz_t(), q[i]));
            mpz_fdiv_q_ui(x.get_mpz_t(), x.get_mpz_t(), q[i]);
        }
    }
    return out;
}

unsigned power_of(const LatticePoint& k, const Expansion& q)
{
    if (k.dim() != q.dim()) throw std::invalid_argument("lattice point and expansion dimensions differ");
    unsigned p = 0;
    for (std::size_t i = 0; i < k.dim(); ++i) {
        Integer a = abs(k[i]);
        unsigned pi = 0;
        Integer bound = 1;
        while (a >= bound) {
            bound *= q[i];
            ++pi;
        }
        p = std::max(p, pi);
    }
    return p;
}

bool in_carry_set(const LatticePoint& j, const LatticePoint& k, const Expansion& q, unsigned n)
{
    for (std::size_t i = 0; i < k.dim(); ++i) {
        Integer m = q.power(i, n);
        if (sgn(j[i]) < 0 || j[i] >= m) throw std::invalid_argument("carry-set index outside [0,q^n)");
        Integer s = j[i] + k[i];
        if (sgn(s) < 0 || s >= m) return true;
    }
    return false;
}

std::vector<LatticePoint> carry_set(const LatticePoint& k, const Expansion& q, unsigned n)
{
    if (n > kMaxMaterializedDepth) {
        throw std::invalid_argument("carry sets are materialized only for n <= " +
                                    std::to_string(kMaxMaterializedDepth) + "; use in_carry_set");
    }
    Box box(q.small_power(n));
    std::vector<LatticePoint> out;
    for (std::uint64_t idx = 0; idx < box.size(); ++idx) {
        LatticePoint j = LatticePoint::from_small(box.unflatten(idx));
        if (in_carry_set(j, k, q, n)) out.push_back(std::move(j));
    }
    return out;
}

Integer carry_set_size(const LatticePoint& k, const Expansion& q, unsigned n)
{
    Integer stay = 1;
    for (std::size_t i = 0; i < k.dim(); ++i) {
        Integer span = q.power(i, n) - abs(k[i]);
        if (sgn(span) <= 0) return q.Q_power(n);
        stay *= span;
    }
    return q.Q_power(n) - stay;
}

Box::Box(std::vector<std::int64_t> shape) : shape_(std::move(shape)), stride_(shape_.size(), 1)
{
    size_ = 1;
    for (std::size_t i = shape_.size(); i-- > 0;) {
        if (shape_[i] < 0) throw std::invalid_argument("negative box extent");
        stride_[i] = size_;
        size_ *= static_cast<std::uint64_t>(shape_[i]);
    }
}

std::uint64_t Box::flatten(const std::vector<std::int64_t>& p) const
{
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < shape_.size(); ++i) idx += static_cast<std::uint64_t>(p[i]) * stride_[i];
    return idx;
}

std::vector<std::int64_t> Box::unflatten(std::uint64_t index) const
{
    std::vector<std::int64_t> p(shape_.size());
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        p[i] = static_cast<std::int64_t>(index / stride_[i]);
        index %= stride_[i];
    }
    return p;
}

bool Box::contains(const std::vector<std::int64_t>& p) const
{
    for (std::size_t i = 0; i < shape_.size(); ++i)
        if (p[i] < 0 || p[i] >= shape_[i]) return false;
    return true;
}

std::vector<LatticePoint> window(const Expansion& q, unsigned p)
{
    auto qp = q.small_power(p);
    std::vector<std::int64_t> shape;
    for (auto x : qp) shape.push_back(2 * x - 1);
    Box box(shape);
    std::vector<LatticePoint> out;
    out.reserve(box.size());
    for (std::uint64_t idx = 0; idx < box.size(); ++idx) {
        auto pt = box.unflatten(idx);
        for (std::size_t i = 0; i < pt.size(); ++i) pt[i] -= qp[i] - 1;
        out.push_back(LatticePoint::from_small(pt));
    }
    return out;
}

}  // namespace qspectra

#include "qspectra/exact.hpp"

#include <cmath>
#include <regex>
#include <stdexcept>

namespace qspectra {

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& x)
{
    Rational r = x;
    r.canonicalize();
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& text)
{
    static const std::regex pattern(R"(\s*([+-]?\d+)(\s*/\s*(\d+))?\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) {
        throw std::invalid_argument("not a rational number: '" + text + "'");
    }
    std::string num = m[1].str();
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    Integer n(num, 10);
    Integer d(1);
    if (m[3].matched) d = Integer(m[3].str(), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

ExactVector zero_vector(std::size_t n) { return ExactVector(n, Rational(0)); }

ExactVector scaled(const ExactVector& v, const Rational& c)
{
    ExactVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * c;
    return out;
}

ExactVector add(const ExactVector& a, const ExactVector& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    ExactVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

ExactVector subtract(const ExactVector& a, const ExactVector& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    ExactVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Rational dot(const ExactVector& a, const ExactVector& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    Rational acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) acc += a[i] * b[i];
    }
    return acc;
}

bool is_zero(const ExactVector& v)
{
    for (const auto& x : v)
        if (sgn(x) != 0) return false;
    return true;
}

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0))
{
}

ExactMatrix ExactMatrix::identity(std::size_t n)
{
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

ExactMatrix ExactMatrix::from_columns(const std::vector<ExactVector>& columns, std::size_t rows)
{
    ExactMatrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != rows) throw std::invalid_argument("column length mismatch");
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
}

ExactVector ExactMatrix::column(std::size_t c) const
{
    ExactVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

ExactVector ExactMatrix::row(std::size_t r) const
{
    return ExactVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                       data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

ExactMatrix ExactMatrix::transpose() const
{
    ExactMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const
{
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    ExactMatrix p(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(r, k);
            if (sgn(a) == 0) continue;
            for (std::size_t c = 0; c < o.cols_; ++c) {
                const Rational& b = o(k, c);
                if (sgn(b) != 0) p(r, c) += a * b;
            }
        }
    }
    return p;
}

ExactVector ExactMatrix::operator*(const ExactVector& v) const
{
    if (cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
    ExactVector out(rows_, Rational(0));
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            const Rational& a = (*this)(r, c);
            if (sgn(a) != 0 && sgn(v[c]) != 0) out[r] += a * v[c];
        }
    }
    return out;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    ExactMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] + o.data_[i];
    return s;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference shape mismatch");
    ExactMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] - o.data_[i];
    return s;
}

ExactMatrix ExactMatrix::scaled(const Rational& c) const
{
    ExactMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] * c;
    return s;
}

ExactMatrix ExactMatrix::pow(unsigned n) const
{
    if (!is_square()) throw std::invalid_argument("power of non-square matrix");
    ExactMatrix result = identity(rows_);
    ExactMatrix base = *this;
    while (n > 0) {
        if (n & 1u) result = result * base;
        n >>= 1u;
        if (n > 0) base = base * base;
    }
    return result;
}

ExactMatrix ExactMatrix::submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const
{
    ExactMatrix m(rs.size(), cs.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = 0; j < cs.size(); ++j) m(i, j) = (*this)(rs[i], cs[j]);
    return m;
}

bool ExactMatrix::operator==(const ExactMatrix& o) const
{
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool ExactMatrix::is_zero() const
{
    for (const auto& x : data_)
        if (sgn(x) != 0) return false;
    return true;
}

ExactMatrix kronecker(const ExactMatrix& a, const ExactMatrix& b)
{
    ExactMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Rational& x = a(ar, ac);
            if (sgn(x) == 0) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    k(ar * b.rows() + br, ac * b.cols() + bc) = x * b(br, bc);
        }
    return k;
}

std::vector<std::size_t> rref(ExactMatrix& m)
{
    std::vector<std::size_t> pivots;
    std::size_t lead_row = 0;
    for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
        std::size_t p = lead_row;
        while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != lead_row)
            for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(lead_row, k));
        Rational inv = 1 / m(lead_row, c);
        for (std::size_t k = c; k < m.cols(); ++k) m(lead_row, k) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == lead_row || sgn(m(r, c)) == 0) continue;
            Rational f = m(r, c);
            for (std::size_t k = c; k < m.cols(); ++k)
                if (sgn(m(lead_row, k)) != 0) m(r, k) -= f * m(lead_row, k);
        }
        pivots.push_back(c);
        ++lead_row;
    }
    return pivots;
}

std::size_t rank(ExactMatrix m) { return rref(m).size(); }

ExactMatrix nullspace(const ExactMatrix& m)
{
    ExactMatrix r = m;
    auto pivots = rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<ExactVector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        ExactVector v = zero_vector(m.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, free);
        basis.push_back(std::move(v));
    }
    return ExactMatrix::from_columns(basis, m.cols());
}

ExactMatrix left_nullspace(const ExactMatrix& m) { return nullspace(m.transpose()).transpose(); }

std::optional<ExactMatrix> solve(const ExactMatrix& a, const ExactMatrix& b)
{
    if (!a.is_square() || a.rows() != b.rows()) throw std::invalid_argument("solve shape mismatch");
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    ExactMatrix aug(n, n + m);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
        for (std::size_t c = 0; c < m; ++c) aug(r, n + c) = b(r, c);
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(aug(p, c)) == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != c)
            for (std::size_t k = 0; k < n + m; ++k) std::swap(aug(p, k), aug(c, k));
        Rational inv = 1 / aug(c, c);
        for (std::size_t k = c; k < n + m; ++k)
            if (sgn(aug(c, k)) != 0) aug(c, k) *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || sgn(aug(r, c)) == 0) continue;
            Rational f = aug(r, c);
            for (std::size_t k = c; k < n + m; ++k)
                if (sgn(aug(c, k)) != 0) aug(r, k) -= f * aug(c, k);
        }
    }
    ExactMatrix x(n, m);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < m; ++c) x(r, c) = aug(r, n + c);
    return x;
}

std::optional<ExactVector> solve(const ExactMatrix& a, const ExactVector& b)
{
    auto x = solve(a, ExactMatrix::from_columns({b}, b.size()));
    if (!x) return std::nullopt;
    return x->column(0);
}

std::optional<ExactMatrix> inverse(const ExactMatrix& a) { return solve(a, ExactMatrix::identity(a.rows())); }

Rational determinant(ExactMatrix a)
{
    if (!a.is_square()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = a.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(a(p, c)) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a(p, k), a(c, k));
            det = -det;
        }
        det *= a(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (sgn(a(r, c)) == 0) continue;
            Rational f = a(r, c) / a(c, c);
            for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
        }
    }
    return det;
}

std::vector<Rational> charpoly(const ExactMatrix& a)
{
    if (!a.is_square()) throw std::invalid_argument("characteristic polynomial of non-square matrix");
    // Faddeev-LeVerrier.
    const std::size_t n = a.rows();
    std::vector<Rational> c(n + 1, Rational(0));
    c[n] = 1;
    ExactMatrix m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
        ExactMatrix am = a * m;
        Rational trace = 0;
        for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
        c[n - k] = -trace / static_cast<long>(k);
    }
    return c;
}

std::vector<Rational> principal_minor_sums(const ExactMatrix& a)
{
    auto c = charpoly(a);
    const std::size_t n = a.rows();
    std::vector<Rational> e(n + 1);
    for (std::size_t k = 0; k <= n; ++k) e[k] = (k % 2 == 0) ? c[n - k] : Rational(-c[n - k]);
    return e;
}

bool is_psd_symmetric(const ExactMatrix& a)
{
    if (!(a == a.transpose())) return false;
    for (const auto& e : principal_minor_sums(a))
        if (sgn(e) < 0) return false;
    return true;
}

GaussMatrix GaussMatrix::operator*(const GaussMatrix& o) const
{
    GaussMatrix p;
    p.re = re * o.re - im * o.im;
    p.im = re * o.im + im * o.re;
    return p;
}

std::optional<Rational> rational_approximation(double x, long max_denominator, double tolerance)
{
    if (!std::isfinite(x)) return std::nullopt;
    long double value = x;
    long double h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    long double rest = value;
    for (int iter = 0; iter < 64; ++iter) {
        long double a = std::floor(rest);
        long double h2 = a * h1 + h0;
        long double k2 = a * k1 + k0;
        if (k2 > static_cast<long double>(max_denominator)) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (std::fabs(static_cast<double>(value - h1 / k1)) <= tolerance) {
            Rational r(Integer(static_cast<long>(h1)), Integer(static_cast<long>(k1)));
            r.canonicalize();
            return r;
        }
        long double frac = rest - a;
        if (frac == 0) break;
        rest = 1 / frac;
    }
    return std::nullopt;
}

}  // namespace qspectra

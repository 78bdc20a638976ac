#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qspectra {

using Integer = mpz_class;
using Rational = mpq_class;
using ExactVector = std::vector<Rational>;

std::string to_string(const Integer& z);
// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);
// Accepts "p", "-p", "p/q"; throws std::invalid_argument otherwise.
Rational parse_rational(const std::string& text);

ExactVector zero_vector(std::size_t n);
ExactVector scaled(const ExactVector& v, const Rational& c);
ExactVector add(const ExactVector& a, const ExactVector& b);
ExactVector subtract(const ExactVector& a, const ExactVector& b);
Rational dot(const ExactVector& a, const ExactVector& b);
bool is_zero(const ExactVector& v);

// Dense row-major matrix over Q.
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols);

    static ExactMatrix identity(std::size_t n);
    static ExactMatrix from_columns(const std::vector<ExactVector>& columns, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    ExactVector column(std::size_t c) const;
    ExactVector row(std::size_t r) const;

    ExactMatrix transpose() const;
    ExactMatrix operator*(const ExactMatrix& other) const;
    ExactVector operator*(const ExactVector& v) const;
    ExactMatrix operator+(const ExactMatrix& other) const;
    ExactMatrix operator-(const ExactMatrix& other) const;
    ExactMatrix scaled(const Rational& c) const;
    ExactMatrix pow(unsigned n) const;
    ExactMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

    bool operator==(const ExactMatrix& other) const;
    bool is_zero() const;
    bool is_square() const { return rows_ == cols_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

ExactMatrix kronecker(const ExactMatrix& a, const ExactMatrix& b);

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(ExactMatrix& m);
std::size_t rank(ExactMatrix m);
// Columns form a basis of {x : m x = 0}.
ExactMatrix nullspace(const ExactMatrix& m);
// Rows form a basis of {y : y m = 0}.
ExactMatrix left_nullspace(const ExactMatrix& m);

std::optional<ExactMatrix> solve(const ExactMatrix& a, const ExactMatrix& b);
std::optional<ExactVector> solve(const ExactMatrix& a, const ExactVector& b);
std::optional<ExactMatrix> inverse(const ExactMatrix& a);
Rational determinant(ExactMatrix a);

// Coefficients c_0..c_n of det(tI - a), c_n = 1.
std::vector<Rational> charpoly(const ExactMatrix& a);
// E_0..E_n, the sums of principal minors of each size.
std::vector<Rational> principal_minor_sums(const ExactMatrix& a);
// Symmetric a is positive semidefinite iff every principal-minor sum is >= 0.
bool is_psd_symmetric(const ExactMatrix& a);

// Matrix over Q(i), used where conjugate-pair hull parameters appear.
struct GaussMatrix {
    ExactMatrix re;
    ExactMatrix im;

    GaussMatrix() = default;
    GaussMatrix(std::size_t rows, std::size_t cols) : re(rows, cols), im(rows, cols) {}
    explicit GaussMatrix(ExactMatrix real) : re(std::move(real)), im(re.rows(), re.cols()) {}

    std::size_t rows() const { return re.rows(); }
    std::size_t cols() const { return re.cols(); }
    bool is_real() const { return im.is_zero(); }
    GaussMatrix operator*(const GaussMatrix& o) const;
    bool operator==(const GaussMatrix& o) const { return re == o.re && im == o.im; }
};

// Continued-fraction reconstruction with bounded denominator; the caller verifies.
std::optional<Rational> rational_approximation(double x, long max_denominator, double tolerance);

}  // namespace qspectra

#pragma once

#include "qspectra/exact.hpp"

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace qspectra {

// A point of Z^d with arbitrary-precision coordinates.
class LatticePoint {
public:
    LatticePoint() = default;
    explicit LatticePoint(std::size_t dim) : c_(dim, Integer(0)) {}
    LatticePoint(std::initializer_list<long> coords);
    explicit LatticePoint(std::vector<Integer> coords) : c_(std::move(coords)) {}
    static LatticePoint from_small(const std::vector<std::int64_t>& coords);
    static LatticePoint constant(std::size_t dim, long value);
    static LatticePoint unit(std::size_t dim, std::size_t axis);

    std::size_t dim() const { return c_.size(); }
    const Integer& operator[](std::size_t i) const { return c_[i]; }
    Integer& operator[](std::size_t i) { return c_[i]; }
    const std::vector<Integer>& coords() const { return c_; }

    bool is_zero() const;
    // Number of nonzero coordinates.
    std::size_t support_size() const;
    // Coordinates as int64; throws std::overflow_error if any does not fit.
    std::vector<std::int64_t> to_small() const;
    // "5" in dimension one, "(1,0)" otherwise.
    std::string str() const;

    LatticePoint operator+(const LatticePoint& o) const;
    LatticePoint operator-(const LatticePoint& o) const;
    LatticePoint operator-() const;
    LatticePoint scaled(const Integer& a) const;

    bool operator==(const LatticePoint& o) const { return c_ == o.c_; }
    bool operator<(const LatticePoint& o) const { return c_ < o.c_; }

private:
    std::vector<Integer> c_;
};

// Parses "5", "-3", "(1,0)", "1,0" or "1;0".
LatticePoint parse_lattice_point(const std::string& text, std::size_t dim);

// Expansion vector q with every q_i >= 2.
class Expansion {
public:
    Expansion() = default;
    explicit Expansion(std::vector<std::uint32_t> q);

    std::size_t dim() const { return q_.size(); }
    std::uint32_t operator[](std::size_t i) const { return q_[i]; }
    const std::vector<std::uint32_t>& values() const { return q_; }
    // Q = q_1 ... q_d.
    std::uint64_t Q() const;
    // q_i^n.
    Integer power(std::size_t i, unsigned n) const;
    // Q^n.
    Integer Q_power(unsigned n) const;
    // Componentwise q^n as small integers; throws std::overflow_error if too large.
    std::vector<std::int64_t> small_power(unsigned n) const;
    Expansion power_expansion(unsigned n) const;

    bool operator==(const Expansion& o) const { return q_ == o.q_; }
    std::string str() const;

private:
    std::vector<std::uint32_t> q_;
};

struct DivMod {
    LatticePoint quot;
    LatticePoint rem;
};

// Floored division per coordinate: k = rem + quot * q^n with 0 <= rem < q^n.
DivMod divmod_qn(const LatticePoint& k, const Expansion& q, unsigned n);

// Digit vectors k_0..k_{n-1} in [0,q) with sum k_i q^i = rem of divmod_qn(k, q, n).
using Digit = std::vector<std::uint32_t>;
std::vector<Digit> digits(const LatticePoint& k, const Expansion& q, unsigned n);

// Minimal p with every |k_i| < q_i^p.
unsigned power_of(const LatticePoint& k, const Expansion& q);

// Carry set: j in [0,q^n) whose translate j+k leaves [0,q^n).
bool in_carry_set(const LatticePoint& j, const LatticePoint& k, const Expansion& q, unsigned n);
// Materialized carry set in lexicographic order; n must be at most kMaxMaterializedDepth.
inline constexpr unsigned kMaxMaterializedDepth = 8;
std::vector<LatticePoint> carry_set(const LatticePoint& k, const Expansion& q, unsigned n);
// Card(carry set) = Q^n - prod max(0, q_i^n - |k_i|).
Integer carry_set_size(const LatticePoint& k, const Expansion& q, unsigned n);

// Row-major box [0, shape) with the last coordinate varying fastest.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<std::int64_t> shape);

    std::size_t dim() const { return shape_.size(); }
    const std::vector<std::int64_t>& shape() const { return shape_; }
    std::uint64_t size() const { return size_; }
    std::uint64_t flatten(const std::vector<std::int64_t>& point) const;
    std::vector<std::int64_t> unflatten(std::uint64_t index) const;
    bool contains(const std::vector<std::int64_t>& point) const;

private:
    std::vector<std::int64_t> shape_;
    std::vector<std::uint64_t> stride_;
    std::uint64_t size_ = 0;
};

// Lattice points k with power_of(k) <= p, in lexicographic order.
std::vector<LatticePoint> window(const Expansion& q, unsigned p);

}  // namespace qspectra

#pragma once

#include "qspectra/exact.hpp"
#include "qspectra/structure.hpp"
#include "qspectra/substitution.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qspectra {

using ComplexVector = std::vector<std::complex<double>>;

// Vector over Q(i).
struct GaussVector {
    ExactVector re;
    ExactVector im;

    bool is_real() const { return is_zero(im); }
    ComplexVector to_complex() const;
};

enum class ParameterKind { Real, RealPart, ImagPart };

struct HullParameter {
    std::size_t class_id = 0;
    std::size_t partner = 0;  // transposed class; equals class_id when self-paired
    ParameterKind kind = ParameterKind::Real;
};

std::string describe(const HullParameter& p);

// Class of S (x) S mapped to the class of its transpose alpha beta -> beta alpha.
std::vector<std::size_t> transpose_pairing(const ErgodicDecomposition& bi, std::size_t s);

// Affine parametrization v(x) = base + sum_i x_i directions[i] of the normalized,
// self-adjoint left Q-eigenvectors of C_S.
struct HullParametrization {
    std::size_t letters = 0;
    Rational Q;
    ErgodicDecomposition bi;
    std::vector<std::size_t> pairing;
    std::vector<HullParameter> parameters;  // before normalization
    std::size_t pivot = 0;                  // parameter fixed by the normalization
    std::vector<HullParameter> free_parameters;
    GaussVector base;
    std::vector<GaussVector> directions;
    ExactVector u;

    std::size_t dimension() const { return directions.size(); }
    bool is_real() const;
    // Associated s x s matrices.
    GaussMatrix base_matrix() const;
    GaussMatrix direction_matrix(std::size_t i) const;
    GaussVector at(const ExactVector& x) const;
    ComplexVector at(const std::vector<double>& x) const;
};

// Requires the decomposition of S (x) S to have index one; S is usually telescoped first.
HullParametrization hull_parametrization(const Substitution& s, const ErgodicDecomposition& bi,
                                         const ExactVector& u);

// The s x s matrix with entry (alpha, beta) = v_{alpha beta}.
GaussMatrix associated_matrix(const GaussVector& v, std::size_t s);

enum class HullMethod { Auto, Exact1D, CommutativeExact, Numeric, Candidates };
std::string to_string(HullMethod m);
std::optional<HullMethod> parse_hull_method(const std::string& text);

struct ExtremePoint {
    ComplexVector v;
    std::optional<ExactVector> exact;     // present when every coordinate is a verified rational
    std::vector<double> parameters;       // free-parameter coordinates
    std::optional<ExactVector> exact_parameters;
    std::size_t rank = 0;                 // numerical rank of the associated matrix
    bool vertex_polished = true;
};

struct HullResult {
    HullMethod method = HullMethod::Auto;
    std::vector<ExtremePoint> points;
    bool complete = true;   // false for numeric searches
    bool exact = true;      // every point exact rational
    std::vector<std::string> notes;
};

struct NumericHullOptions {
    std::size_t objectives = 0;  // 0 picks a default from the dimension
    std::uint64_t seed = 20240611;
    double tolerance = 1e-9;
};

// Extreme points of the spectral hull. Candidates are full A^2-indexed vectors.
HullResult extreme_points(const HullParametrization& h, HullMethod method = HullMethod::Auto,
                          const std::vector<ExactVector>& candidates = {},
                          const NumericHullOptions& options = {});

struct MembershipReport {
    bool eigenvector = false;
    bool positive_semidefinite = false;
    bool normalized = false;
    bool exact = false;          // decided in exact arithmetic
    double min_eigenvalue = 0.0;
    std::size_t rank = 0;
    bool member() const { return eigenvector && positive_semidefinite && normalized; }
};

// C^t v = Q v, associated matrix PSD, sum_alpha u_alpha v_{alpha alpha} = 1.
MembershipReport verify_membership(const ExactMatrix& coincidence, const Rational& Q, const ExactVector& u,
                                   const ExactVector& v);
MembershipReport verify_membership(const ExactMatrix& coincidence, const Rational& Q, const ExactVector& u,
                                   const ComplexVector& v, double tolerance = 1e-9);

// True when no nonzero parameter direction keeps the point inside the hull.
bool is_extreme(const HullParametrization& h, const std::vector<double>& x, double tolerance = 1e-7);

}  // namespace qspectra

#pragma once

#include "qspectra/exact.hpp"
#include "qspectra/substitution.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace qspectra {

// Ergodic classes and transient letters of a substitution (or of any nonnegative matrix,
// read as the digraph gamma -> alpha when entry (alpha, gamma) is positive).
struct ErgodicDecomposition {
    // Index of imprimitivity: lcm of the periods of the closed components.
    unsigned index = 1;
    // Closed strongly connected components of the h-th power, sorted, ordered by least letter.
    std::vector<std::vector<Letter>> classes;
    std::vector<Letter> transient;
    // Periods of the closed components of the unpowered graph.
    std::vector<unsigned> periods;

    std::optional<std::size_t> class_of(Letter a) const;
    bool primitive() const { return index == 1 && classes.size() == 1 && transient.empty(); }
};

ErgodicDecomposition ergodic_decomposition(const ExactMatrix& m);
ErgodicDecomposition ergodic_decomposition(const Substitution& s);

struct InvariantWeights {
    // Combined letter frequencies u = sum_E c_E u_E.
    ExactVector u;
    // Perron vector of each class, extended by zeros.
    std::vector<ExactVector> per_class;
    std::vector<Rational> class_coefficients;
};

// Exact Perron vectors of each class of S^h. Coefficients default to 1/K.
InvariantWeights invariant_weights(const Substitution& s, const ErgodicDecomposition& d,
                                   const std::optional<std::vector<Rational>>& class_coefficients = std::nullopt);

// P = A (B A)^{-1} B with A, B bases of the right and left eigenspaces for eigenvalue q.
ExactMatrix q_eigen_projection(const ExactMatrix& m, const Rational& q);

enum class AperiodicityStatus { Verified, Asserted, Unknown, Inapplicable };
std::string to_string(AperiodicityStatus s);

struct AperiodicityWitness {
    std::string letter;
    std::string first;
    std::string second;
    unsigned depth = 0;
    std::string component;  // letters of the class when checked per component
};

struct AperiodicityVerdict {
    AperiodicityStatus status = AperiodicityStatus::Unknown;
    std::string explanation;
    std::vector<AperiodicityWitness> witnesses;

    bool established() const
    {
        return status == AperiodicityStatus::Verified || status == AperiodicityStatus::Asserted;
    }
};

// Pansiot search for d = 1 injective substitutions; per ergodic class when not primitive.
AperiodicityVerdict check_aperiodicity(const Substitution& s, unsigned max_depth = 8);

struct StructuralPredicates {
    bool bijective = false;
    bool commutative = false;
};
StructuralPredicates structural_predicates(const Substitution& s);

struct IndexCrossCheck {
    unsigned graph_index = 1;
    unsigned eigen_index = 1;
    std::vector<std::complex<double>> peripheral;  // eigenvalues of modulus Q
    bool agree() const { return graph_index == eigen_index; }
};
IndexCrossCheck index_cross_check(const ExactMatrix& m, const Rational& q, const ErgodicDecomposition& d);

// S telescoped by lcm(index(S), index(S (x) S)), with the decompositions of the result.
struct PreparedSubstitution {
    Substitution original;
    Substitution telescoped;
    unsigned exponent = 1;
    unsigned index = 1;
    unsigned bi_index = 1;
    ErgodicDecomposition original_decomposition;
    ErgodicDecomposition decomposition;
    ErgodicDecomposition bi_decomposition;
};
PreparedSubstitution prepare(const Substitution& s);

}  // namespace qspectra

#pragma once

#include "qspectra/fourier.hpp"
#include "qspectra/hull.hpp"
#include "qspectra/structure.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace qspectra {

// lambda_hat_w(k) = w^t Sigma_hat(k); exact when w is rational.
struct LambdaValue {
    std::optional<Rational> exact;
    std::complex<double> value;
};

LambdaValue lambda_coefficient(const ExactVector& w, const ExactVector& sigma_k);
LambdaValue lambda_coefficient(const ComplexVector& w, const ExactVector& sigma_k);
// Exact comparison when both sides are rational, otherwise |a - b| <= tolerance.
bool same_value(const LambdaValue& a, const LambdaValue& b, double tolerance);
bool is_zero(const LambdaValue& a, double tolerance);
std::string to_string(const LambdaValue& a);

enum class MeasureKind { Lebesgue, Discrete, SingularContinuous, Inconclusive };
std::string to_string(MeasureKind k);

struct Classification {
    MeasureKind kind = MeasureKind::Inconclusive;
    std::vector<unsigned> height;       // h for discrete(h Z^d)
    std::string evidence;               // always names the window
    std::vector<std::string> witnesses;
};

// Evidence-based trichotomy on a finite window; ks and values are parallel.
Classification classify(const std::vector<LatticePoint>& ks, const std::vector<LambdaValue>& values,
                        const Expansion& q, unsigned height_bound, double tolerance = 1e-9);

// Aperiodic, bijective and commutative: no Lebesgue component, by theorem.
bool abc_shortcut(const AperiodicityVerdict& verdict, const StructuralPredicates& predicates);

struct MixingRow {
    LatticePoint a;
    LatticePoint b;
    std::vector<unsigned> powers;
    std::vector<double> deviation;  // |lambda(b + a q^p) - lambda(b) lambda(a)|
    bool nonincreasing = true;
};

struct ExtremalMeasure {
    std::string label;       // v1, v2, ...
    std::size_t component = 0;
    ExtremePoint w;          // indexed by pairs of the component alphabet
    std::vector<LambdaValue> coefficients;  // parallel to the report window
    Classification classification;
    std::vector<MixingRow> mixing;
};

// Analysis of one ergodic class of the telescoped substitution.
struct ComponentAnalysis {
    std::vector<Letter> letters;    // letters of the telescoped substitution
    Substitution substitution;      // restriction, telescoped again if its bisubstitution needed it
    unsigned extra_exponent = 1;
    ExactVector u;
    Rational weight;                // class coefficient in the combined frequency
    HullParametrization hull;
    HullResult hull_result;
    std::vector<std::size_t> measures;  // indices into SpectralReport::measures
};

struct ReportOptions {
    unsigned window_power = 3;
    std::vector<LatticePoint> extra_points;
    unsigned height_bound = 0;      // 0: alphabet size of the component
    unsigned p_max = 6;
    HullMethod method = HullMethod::Auto;
    std::vector<ExactVector> candidates;
    std::optional<std::vector<Rational>> weights;
    unsigned jobs = 1;
    double tolerance = 1e-9;
    NumericHullOptions numeric;
    bool mixing = true;
};

struct SpectralReport {
    PreparedSubstitution prepared;
    InvariantWeights weights;               // of the telescoped substitution
    AperiodicityVerdict aperiodicity;
    StructuralPredicates predicates;
    bool abc = false;
    std::vector<LatticePoint> window;
    std::vector<ComponentAnalysis> components;
    std::vector<ExtremalMeasure> measures;
    std::string generic_statement;          // sigma_max ~ omega_q * (lambda_1 + ...)
    std::string statement;                  // with each lambda replaced by its type
    bool purely_singular = false;           // no Lebesgue component on the evidence or by theorem
    bool complete = true;                   // false when some hull search is uncertified
    std::vector<std::string> caveats;
};

// Lattice points k with power_of(k) <= p plus extras, sorted by max |k_i| then lexicographically.
std::vector<LatticePoint> evidence_window(const Expansion& q, unsigned p, const std::vector<LatticePoint>& extra = {});

// Restriction and spectral hull of every ergodic class of the telescoped substitution.
std::vector<ComponentAnalysis> analyse_components(const PreparedSubstitution& prepared, const InvariantWeights& weights,
                                                  const ReportOptions& options = {});

SpectralReport spectral_report(const Substitution& s, const ReportOptions& options = {});

// Mixing pairs used by the report: (1,1),(1,2),(2,1) for d = 1; (e1,e1),(e1,e2),(1,e1) otherwise.
std::vector<std::pair<LatticePoint, LatticePoint>> mixing_pairs(std::size_t d);

}  // namespace qspectra

#pragma once

#include "qspectra/exact.hpp"
#include "qspectra/lattice.hpp"
#include "qspectra/substitution.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

namespace qspectra {

// Sigma_hat(0) = sum_alpha u_alpha e_{alpha alpha}.
ExactVector sigma_zero(const ExactVector& u);

// How a coefficient was obtained.
enum class Route { Ground, Corner, Direct, Descent };
std::string to_string(Route r);

struct Provenance {
    Route route = Route::Ground;
    unsigned p = 0;
};

struct CorrelationEntry {
    ExactVector value;
    Provenance provenance;
};

// Exact Fourier coefficients of the correlation vector. sigma_hat_{alpha beta}(k) has alpha at 0
// and beta at k. Pair (alpha, beta) sits at index alpha * s + beta.
class CorrelationEngine {
public:
    // s must be telescoped so that u is its invariant letter frequency.
    CorrelationEngine(Substitution s, ExactVector u, unsigned p_max = 6);

    const Substitution& substitution() const { return s_; }
    const ExactVector& weights() const { return u_; }
    const ExactVector& sigma_zero() const { return zero_; }
    unsigned p_max() const { return p_max_; }
    // Corners c in {-1,0,1}^d \ {0}, ordered by support size.
    const std::map<LatticePoint, CorrelationEntry>& base() const { return base_; }

    // Thread-safe; results are cached.
    ExactVector coefficient(const LatticePoint& k);
    Provenance provenance(const LatticePoint& k);
    // Evaluates ks on up to `jobs` threads; output order follows ks.
    std::vector<ExactVector> coefficients(const std::vector<LatticePoint>& ks, unsigned jobs = 1);

    // Direct sum (1/Q^p) sum_j R_j^(p) (x) R_{j+k}^(p) Sigma_hat(quot) for a given p >= power_of(k).
    ExactVector direct(const LatticePoint& k, unsigned p);
    // One-digit descent Sigma_hat(k) = (1/Q) sum_{j in [0,q)} ... ; works for any size of k.
    ExactVector descent(const LatticePoint& k);

    // Largest Q^p handled by a direct sum before falling back to descent.
    static constexpr std::uint64_t kDirectLimit = std::uint64_t{1} << 16;

private:
    struct Cell;
    const InstructionTable& table(unsigned p);
    ExactVector corner_value(const LatticePoint& c) const;

    Substitution s_;
    ExactVector u_;
    unsigned p_max_;
    ExactVector zero_;
    std::map<LatticePoint, CorrelationEntry> base_;
    std::mutex mu_;
    std::map<LatticePoint, CorrelationEntry> cache_;
    std::map<unsigned, std::unique_ptr<InstructionTable>> tables_;
};

// C_k with C_k Sigma_hat(0) = Sigma_hat(k), grounded at C_0 = q_eigen_projection(C_S, Q).
class BicorrelationEngine {
public:
    explicit BicorrelationEngine(const Substitution& s, unsigned p_max = 6);

    const ExactMatrix& projection() const { return ground_; }
    ExactMatrix coefficient(const LatticePoint& k);

private:
    ExactMatrix corner_or_ground(const LatticePoint& c) const;

    Substitution s_;
    unsigned p_max_;
    ExactMatrix ground_;
    std::map<LatticePoint, ExactMatrix> base_;
};

// (R_a (x) R_b) x, where x has s^2 rows.
ExactMatrix apply_pair(const LetterMap& a, const LetterMap& b, const ExactMatrix& x);
ExactVector apply_pair(const LetterMap& a, const LetterMap& b, const ExactVector& x);

// Corners of {-1,0,1}^d other than 0, by support size then lexicographically.
std::vector<LatticePoint> corners(std::size_t d);

// RFC 4180 quoting when the text holds a comma, quote or newline.
std::string csv_field(const std::string& text);
// "1" or "1;0": coordinates joined by ';' so they survive a CSV column.
std::string csv_point(const LatticePoint& k);
// Header "k,pair,num,den", then one row per pair and k.
void write_coefficient_csv(std::ostream& out, const Alphabet& alphabet, const std::vector<LatticePoint>& ks,
                           const std::vector<ExactVector>& values);

}  // namespace qspectra

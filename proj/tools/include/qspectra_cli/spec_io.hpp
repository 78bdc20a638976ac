#pragma once

#include "qspectra/errors.hpp"
#include "qspectra/exact.hpp"
#include "qspectra/substitution.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qspectra::cli {

struct SpecDefaults {
    std::optional<unsigned> window;
    std::optional<unsigned> p_max;
    std::optional<double> tolerance;

    bool operator==(const SpecDefaults&) const = default;
};

struct SubstitutionSpec {
    std::string name;
    Substitution substitution;
    std::optional<std::vector<Rational>> weights;
    std::vector<ExactVector> candidates;
    SpecDefaults defaults;

    bool operator==(const SubstitutionSpec& o) const
    {
        return name == o.name && substitution == o.substitution &&
               substitution.policy() == o.substitution.policy() && weights == o.weights &&
               candidates == o.candidates && defaults == o.defaults;
    }
};

struct Diagnostic {
    std::string origin;
    int line = 0;  // 1-based; 0 when unknown
    std::string message;

    std::string str() const;
};

// Every problem found in one pass over the file.
class SpecError : public InputError {
public:
    explicit SpecError(std::vector<Diagnostic> d);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

SubstitutionSpec parse_spec(const std::string& text, const std::string& origin = "<input>");
SubstitutionSpec load_spec(const std::string& path);
// Canonical form; parse_spec(serialize_spec(x)) == x.
std::string serialize_spec(const SubstitutionSpec& spec);

}  // namespace qspectra::cli

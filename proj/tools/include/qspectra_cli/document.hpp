#pragma once

#include "qspectra/classifier.hpp"
#include "qspectra_cli/spec_io.hpp"

#include <json.hpp>

#include <string>

namespace qspectra::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "qspectra.report/1";
inline constexpr const char* kAnalysisSchema = "qspectra.analysis/1";
inline constexpr const char* kHullSchema = "qspectra.hull/1";

Json substitution_json(const SubstitutionSpec& spec);
Json decomposition_json(const Substitution& s, const ErgodicDecomposition& d);
Json hull_json(const Alphabet& alphabet, const HullParametrization& h, const HullResult& r);
Json classification_json(const Classification& c);

// Full machine document for the report subcommand.
Json report_document(const SubstitutionSpec& spec, const SpectralReport& rep, const ReportOptions& opt);
std::string human_report(const SubstitutionSpec& spec, const SpectralReport& rep);

// Stable text for a double: rounded to 12 significant digits.
double rounded(double x);
std::string vector_text(const ExtremePoint& p);

}  // namespace qspectra::cli

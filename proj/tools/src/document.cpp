#include "qspectra_cli/document.hpp"

#include <cstdio>
#include <sstream>

namespace qspectra::cli {

namespace {

std::string letters_text(const Alphabet& a, const std::vector<Letter>& ls)
{
    std::string out = "{";
    for (std::size_t i = 0; i < ls.size(); ++i) out += (i ? "," : "") + a.name(ls[i]);
    return out + "}";
}

Json names_json(const Alphabet& a, const std::vector<Letter>& ls)
{
    Json j = Json::array();
    for (Letter l : ls) j.push_back(a.name(l));
    return j;
}

Json rationals_json(const ExactVector& v)
{
    Json j = Json::array();
    for (const auto& x : v) j.push_back(to_string(x));
    return j;
}

Json complex_json(const ComplexVector& v)
{
    Json j = Json::array();
    for (const auto& z : v) j.push_back(Json::array({rounded(z.real()), rounded(z.imag())}));
    return j;
}

Json value_json(const LambdaValue& v)
{
    if (v.exact) return to_string(*v.exact);
    return Json::array({rounded(v.value.real()), rounded(v.value.imag())});
}

std::string height_text(const std::vector<unsigned>& h)
{
    std::string out;
    for (std::size_t i = 0; i < h.size(); ++i) out += (i ? "," : "") + std::to_string(h[i]);
    return h.size() == 1 ? out + "Z" : "(" + out + ")Z^" + std::to_string(h.size());
}

std::string kind_text(const Classification& c)
{
    std::string out = to_string(c.kind);
    if (c.kind == MeasureKind::Discrete) out += " (" + height_text(c.height) + ")";
    return out;
}

}  // namespace

double rounded(double x)
{
    if (std::abs(x) < 1e-13) return 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::stod(buf);
}

std::string vector_text(const ExtremePoint& p)
{
    std::string out = "(";
    if (p.exact) {
        for (std::size_t i = 0; i < p.exact->size(); ++i) out += (i ? ", " : "") + to_string((*p.exact)[i]);
        return out + ")";
    }
    for (std::size_t i = 0; i < p.v.size(); ++i) {
        LambdaValue v;
        v.value = p.v[i];
        out += (i ? ", " : "") + to_string(v);
    }
    return out + ")";
}

Json substitution_json(const SubstitutionSpec& spec)
{
    const Substitution& s = spec.substitution;
    Json j;
    j["name"] = spec.name;
    j["dimension"] = s.dim();
    j["q"] = s.q().values();
    j["Q"] = s.Q();
    j["alphabet"] = s.alphabet().names();
    j["aperiodic"] = to_string(s.policy());
    Json rules;
    for (Letter g = 0; g < s.size(); ++g) {
        Json cells = Json::array();
        for (Letter x : s.rules()[g]) cells.push_back(s.alphabet().name(x));
        rules[s.alphabet().name(g)] = cells;
    }
    j["rules"] = rules;
    return j;
}

Json decomposition_json(const Substitution& s, const ErgodicDecomposition& d)
{
    Json j;
    j["index"] = d.index;
    Json cls = Json::array();
    for (const auto& c : d.classes) cls.push_back(names_json(s.alphabet(), c));
    j["classes"] = cls;
    j["transient"] = names_json(s.alphabet(), d.transient);
    j["periods"] = d.periods;
    return j;
}

Json classification_json(const Classification& c)
{
    Json j;
    j["kind"] = to_string(c.kind);
    if (c.kind == MeasureKind::Discrete) j["height"] = c.height;
    j["evidence"] = c.evidence;
    j["witnesses"] = c.witnesses;
    return j;
}

Json hull_json(const Alphabet& alphabet, const HullParametrization& h, const HullResult& r)
{
    Json j;
    j["dimension"] = h.dimension();
    j["bisubstitution_classes"] = h.bi.classes.size();
    Json params = Json::array();
    for (const auto& p : h.free_parameters) params.push_back(describe(p));
    j["parameters"] = params;
    Json pairs = Json::array();
    for (Letter a = 0; a < alphabet.size(); ++a)
        for (Letter b = 0; b < alphabet.size(); ++b) pairs.push_back(pair_name(alphabet, alphabet, a, b));
    j["pairs"] = pairs;
    j["method"] = to_string(r.method);
    j["complete"] = r.complete;
    j["exact"] = r.exact;
    Json pts = Json::array();
    for (const auto& p : r.points) {
        Json e;
        if (p.exact) e["exact"] = rationals_json(*p.exact);
        e["numeric"] = complex_json(p.v);
        e["rank"] = p.rank;
        pts.push_back(e);
    }
    j["extreme_points"] = pts;
    j["notes"] = r.notes;
    return j;
}

Json report_document(const SubstitutionSpec& spec, const SpectralReport& rep, const ReportOptions& opt)
{
    const Substitution& s = spec.substitution;
    const Substitution& t = rep.prepared.telescoped;
    Json doc;
    doc["schema"] = kReportSchema;
    doc["substitution"] = substitution_json(spec);

    Json dec = decomposition_json(s, rep.prepared.original_decomposition);
    dec["telescoping_exponent"] = rep.prepared.exponent;
    dec["bisubstitution_index"] = rep.prepared.bi_index;
    dec["telescoped"] = decomposition_json(t, rep.prepared.decomposition);
    dec["letter_frequencies"] = rationals_json(rep.weights.u);
    dec["class_coefficients"] = rationals_json(rep.weights.class_coefficients);
    Json ap;
    ap["status"] = to_string(rep.aperiodicity.status);
    ap["explanation"] = rep.aperiodicity.explanation;
    Json wit = Json::array();
    for (const auto& w : rep.aperiodicity.witnesses) {
        Json x;
        x["letter"] = w.letter;
        x["neighborhoods"] = Json::array({w.first, w.second});
        x["depth"] = w.depth;
        if (!w.component.empty()) x["class"] = w.component;
        wit.push_back(x);
    }
    ap["witnesses"] = wit;
    dec["aperiodicity"] = ap;
    dec["bijective"] = rep.predicates.bijective;
    dec["commutative"] = rep.predicates.commutative;
    doc["decomposition"] = dec;

    Json classes = Json::array();
    for (std::size_t ci = 0; ci < rep.components.size(); ++ci) {
        const auto& c = rep.components[ci];
        Json j;
        j["letters"] = names_json(t.alphabet(), c.letters);
        j["weight"] = to_string(c.weight);
        j["extra_exponent"] = c.extra_exponent;
        j["letter_frequencies"] = rationals_json(c.u);
        j["hull"] = hull_json(c.substitution.alphabet(), c.hull, c.hull_result);
        Json labels = Json::array();
        for (auto m : c.measures) labels.push_back(rep.measures[m].label);
        j["measures"] = labels;
        classes.push_back(j);
    }
    doc["classes"] = classes;

    Json comps = Json::array();
    for (const auto& m : rep.measures) {
        Json j;
        j["label"] = m.label;
        j["class"] = m.component + 1;
        if (m.w.exact) j["w"] = rationals_json(*m.w.exact);
        else j["w"] = complex_json(m.w.v);
        j["rank"] = m.w.rank;
        j["classification"] = classification_json(m.classification);
        Json coeffs = Json::array();
        for (std::size_t i = 0; i < rep.window.size(); ++i)
            coeffs.push_back(Json::array({csv_point(rep.window[i]), value_json(m.coefficients[i])}));
        j["coefficients"] = coeffs;
        Json mix = Json::array();
        for (const auto& row : m.mixing) {
            Json r;
            r["a"] = csv_point(row.a);
            r["b"] = csv_point(row.b);
            r["powers"] = row.powers;
            Json dev = Json::array();
            for (double d : row.deviation) dev.push_back(rounded(d));
            r["deviation"] = dev;
            r["nonincreasing"] = row.nonincreasing;
            mix.push_back(r);
        }
        j["mixing"] = mix;
        comps.push_back(j);
    }
    doc["components"] = comps;

    Json ev;
    ev["window_power"] = opt.window_power;
    ev["window_size"] = rep.window.size();
    ev["height_bound"] = opt.height_bound;
    ev["p_max"] = opt.p_max;
    ev["tolerance"] = opt.tolerance;
    ev["method"] = to_string(opt.method);
    ev["complete"] = rep.complete;
    ev["abc_theorem"] = rep.abc;
    ev["purely_singular"] = rep.purely_singular;
    ev["caveats"] = rep.caveats;
    doc["evidence"] = ev;

    doc["statement"] = rep.generic_statement;
    doc["spectral_type"] = rep.statement;
    return doc;
}

std::string human_report(const SubstitutionSpec& spec, const SpectralReport& rep)
{
    const Substitution& s = spec.substitution;
    const Substitution& t = rep.prepared.telescoped;
    std::ostringstream out;
    out << "substitution " << (spec.name.empty() ? "(unnamed)" : spec.name) << ": " << s.size() << " letters, q = "
        << s.q().str() << ", Q = " << s.Q() << "\n";
    out << "aperiodicity: " << to_string(rep.aperiodicity.status) << " (" << rep.aperiodicity.explanation << ")\n";
    out << "bijective: " << (rep.predicates.bijective ? "yes" : "no")
        << ", commutative: " << (rep.predicates.commutative ? "yes" : "no") << "\n";
    const auto& od = rep.prepared.original_decomposition;
    out << "index " << od.index << ", classes";
    for (const auto& c : od.classes) out << ' ' << letters_text(s.alphabet(), c);
    out << ", transient " << letters_text(s.alphabet(), od.transient) << "\n";
    out << "telescoped by " << rep.prepared.exponent << "; u = (";
    for (std::size_t i = 0; i < rep.weights.u.size(); ++i) out << (i ? ", " : "") << to_string(rep.weights.u[i]);
    out << ")\n";
    for (std::size_t ci = 0; ci < rep.components.size(); ++ci) {
        const auto& c = rep.components[ci];
        out << "\nclass " << ci + 1 << ' ' << letters_text(t.alphabet(), c.letters) << ": hull dimension "
            << c.hull.dimension() << ", method " << to_string(c.hull_result.method)
            << (c.hull_result.complete ? "" : " (not certified complete)") << "\n";
        for (auto mi : c.measures) {
            const auto& m = rep.measures[mi];
            out << "  " << m.label << " = " << vector_text(m.w) << "  rank " << m.w.rank << "  "
                << kind_text(m.classification) << "\n";
            for (const auto& w : m.classification.witnesses) out << "      " << w << "\n";
            for (const auto& row : m.mixing) {
                out << "      mixing a=" << row.a.str() << " b=" << row.b.str() << ":";
                for (double d : row.deviation) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, " %.3g", d);
                    out << buf;
                }
                out << (row.nonincreasing ? "" : "  (not monotone)") << "\n";
            }
        }
    }
    out << "\n" << rep.generic_statement << "\n" << rep.statement << "\n";
    out << "purely singular: " << (rep.purely_singular ? "yes" : "no");
    if (rep.abc) out << " (aperiodic, bijective and commutative)";
    out << "\n";
    if (!rep.caveats.empty()) {
        out << "caveats:\n";
        for (const auto& c : rep.caveats) out << "  - " << c << "\n";
    }
    return out.str();
}

}  // namespace qspectra::cli

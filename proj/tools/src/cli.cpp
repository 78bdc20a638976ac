#include "qspectra_cli/cli.hpp"

#include "qspectra/classifier.hpp"
#include "qspectra/errors.hpp"
#include "qspectra/oracle.hpp"
#include "qspectra_cli/document.hpp"
#include "qspectra_cli/spec_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace qspectra::cli {

namespace {

struct Flags {
    std::string spec;
    std::optional<unsigned> window;
    std::optional<unsigned> p_max;
    std::string method = "auto";
    std::string weights;
    unsigned jobs = 1;
    std::string emit_csv;
    std::string output;
    std::vector<std::string> ks;
    std::optional<unsigned> height_bound;
    unsigned n = 0;
    std::string gamma;
    bool averaged = false;
};

std::vector<Rational> parse_weights(const std::string& text)
{
    std::vector<Rational> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(parse_rational(item));
        } catch (const std::exception&) {
            throw InputError("--weights: '" + item + "' is not a rational number");
        }
    }
    return out;
}

ReportOptions options_for(const SubstitutionSpec& spec, const Flags& f)
{
    ReportOptions o;
    o.window_power = f.window.value_or(spec.defaults.window.value_or(3));
    o.p_max = f.p_max.value_or(spec.defaults.p_max.value_or(6));
    o.tolerance = spec.defaults.tolerance.value_or(1e-9);
    auto m = parse_hull_method(f.method);
    if (!m) throw InputError("--method: unknown method '" + f.method + "'");
    o.method = *m;
    o.candidates = spec.candidates;
    o.weights = spec.weights;
    if (!f.weights.empty()) o.weights = parse_weights(f.weights);
    o.jobs = std::max(1u, f.jobs);
    o.height_bound = f.height_bound.value_or(0);
    return o;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError(path + ": cannot open for writing");
    out << content;
    if (!out) throw ResourceError(path + ": write failed");
}

std::string matrix_text(const ExactMatrix& m, const std::string& indent)
{
    std::ostringstream out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << indent << '[';
        for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << to_string(m(r, c));
        out << "]\n";
    }
    return out.str();
}

std::string letters_text(const Alphabet& a, const std::vector<Letter>& ls)
{
    std::string out = "{";
    for (std::size_t i = 0; i < ls.size(); ++i) out += (i ? "," : "") + a.name(ls[i]);
    return out + "}";
}

int cmd_analyze(const Flags& f, std::ostream& out)
{
    SubstitutionSpec spec = load_spec(f.spec);
    const Substitution& s = spec.substitution;
    ReportOptions opt = options_for(spec, f);
    PreparedSubstitution prep = prepare(s);
    InvariantWeights w = invariant_weights(prep.telescoped, prep.decomposition, opt.weights);
    AperiodicityVerdict ap = check_aperiodicity(s);
    StructuralPredicates pr = structural_predicates(s);
    ExactMatrix m = substitution_matrix(s);
    IndexCrossCheck cross = index_cross_check(m, Rational(static_cast<unsigned long>(s.Q())), prep.original_decomposition);

    out << "substitution " << spec.name << ": " << s.size() << " letters, q = " << s.q().str() << ", Q = " << s.Q()
        << "\nsubstitution matrix:\n" << matrix_text(m, "  ");
    const auto& d = prep.original_decomposition;
    out << "index of imprimitivity: " << d.index << " (eigenvalue check " << cross.eigen_index << ")\n";
    out << "ergodic classes:";
    for (const auto& c : d.classes) out << ' ' << letters_text(s.alphabet(), c);
    out << "\ntransient: " << letters_text(s.alphabet(), d.transient) << "\n";
    out << "bisubstitution: index " << prep.bi_index << ", " << prep.bi_decomposition.classes.size()
        << " classes after telescoping\n";
    out << "telescoping exponent: " << prep.exponent << "\n";
    out << "letter frequencies u = (";
    for (std::size_t i = 0; i < w.u.size(); ++i) out << (i ? ", " : "") << to_string(w.u[i]);
    out << ")\n";
    out << "aperiodicity: " << to_string(ap.status) << " (" << ap.explanation << ")\n";
    out << "bijective: " << (pr.bijective ? "yes" : "no") << ", commutative: " << (pr.commutative ? "yes" : "no") << "\n";

    if (!f.output.empty()) {
        Json doc;
        doc["schema"] = kAnalysisSchema;
        doc["substitution"] = substitution_json(spec);
        Json dec = decomposition_json(s, d);
        dec["eigen_index"] = cross.eigen_index;
        dec["telescoping_exponent"] = prep.exponent;
        dec["bisubstitution_index"] = prep.bi_index;
        dec["telescoped"] = decomposition_json(prep.telescoped, prep.decomposition);
        dec["bisubstitution"] = decomposition_json(bisubstitution(prep.telescoped), prep.bi_decomposition);
        Json u = Json::array();
        for (const auto& x : w.u) u.push_back(to_string(x));
        dec["letter_frequencies"] = u;
        dec["aperiodicity"] = {{"status", to_string(ap.status)}, {"explanation", ap.explanation}};
        dec["bijective"] = pr.bijective;
        dec["commutative"] = pr.commutative;
        doc["decomposition"] = dec;
        write_file(f.output, doc.dump(2) + "\n");
    }
    return kOk;
}

int cmd_hull(const Flags& f, std::ostream& out)
{
    SubstitutionSpec spec = load_spec(f.spec);
    ReportOptions opt = options_for(spec, f);
    PreparedSubstitution prep = prepare(spec.substitution);
    InvariantWeights w = invariant_weights(prep.telescoped, prep.decomposition, opt.weights);
    auto comps = analyse_components(prep, w, opt);
    bool complete = true;
    Json classes = Json::array();
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        const auto& c = comps[ci];
        const Alphabet& a = c.substitution.alphabet();
        out << "class " << ci + 1 << ' ' << letters_text(prep.telescoped.alphabet(), c.letters) << ": dimension "
            << c.hull.dimension() << ", method " << to_string(c.hull_result.method)
            << (c.hull_result.complete ? "" : " (not certified complete)") << "\n";
        out << "  pairs:";
        for (Letter x = 0; x < a.size(); ++x)
            for (Letter y = 0; y < a.size(); ++y) out << ' ' << pair_name(a, a, x, y);
        out << "\n";
        for (const auto& p : c.hull_result.points) out << "  " << vector_text(p) << "  rank " << p.rank << "\n";
        for (const auto& n : c.hull_result.notes) out << "  note: " << n << "\n";
        complete = complete && c.hull_result.complete;
        Json j = hull_json(a, c.hull, c.hull_result);
        j["letters"] = Json::array();
        for (Letter l : c.letters) j["letters"].push_back(prep.telescoped.alphabet().name(l));
        classes.push_back(j);
    }
    if (!f.output.empty()) {
        Json doc;
        doc["schema"] = kHullSchema;
        doc["substitution"] = substitution_json(spec);
        doc["classes"] = classes;
        write_file(f.output, doc.dump(2) + "\n");
    }
    return complete ? kOk : kIncomplete;
}

int cmd_fourier(const Flags& f, std::ostream& out)
{
    SubstitutionSpec spec = load_spec(f.spec);
    ReportOptions opt = options_for(spec, f);
    const Substitution& s = spec.substitution;
    std::vector<LatticePoint> ks;
    for (const auto& k : f.ks) ks.push_back(parse_lattice_point(k, s.dim()));
    if (ks.empty() || f.window) {
        auto w = evidence_window(s.q(), opt.window_power);
        ks.insert(ks.end(), w.begin(), w.end());
    }
    PreparedSubstitution prep = prepare(s);
    InvariantWeights w = invariant_weights(prep.telescoped, prep.decomposition, opt.weights);
    CorrelationEngine engine(prep.telescoped, w.u, opt.p_max);
    auto values = engine.coefficients(ks, opt.jobs);
    std::ostringstream csv;
    write_coefficient_csv(csv, s.alphabet(), ks, values);
    const std::string path = !f.emit_csv.empty() ? f.emit_csv : f.output;
    if (!path.empty()) {
        write_file(path, csv.str());
        out << "wrote " << ks.size() * s.size() * s.size() << " rows to " << path << "\n";
    } else {
        out << csv.str();
    }
    return kOk;
}

int cmd_classify(const Flags& f, std::ostream& out)
{
    SubstitutionSpec spec = load_spec(f.spec);
    ReportOptions opt = options_for(spec, f);
    opt.mixing = false;
    SpectralReport rep = spectral_report(spec.substitution, opt);
    for (const auto& m : rep.measures) {
        out << m.label << " = " << vector_text(m.w) << ": " << to_string(m.classification.kind);
        if (m.classification.kind == MeasureKind::Discrete) {
            out << " h =";
            for (auto h : m.classification.height) out << ' ' << h;
        }
        out << "  [" << m.classification.evidence << "]\n";
        for (const auto& w : m.classification.witnesses) out << "    " << w << "\n";
    }
    out << rep.statement << "\n";
    if (rep.abc) out << "purely singular by the aperiodic bijective commutative criterion\n";
    if (!f.output.empty()) write_file(f.output, report_document(spec, rep, opt).dump(2) + "\n");
    return rep.complete ? kOk : kIncomplete;
}

int cmd_freq(const Flags& f, std::ostream& out)
{
    SubstitutionSpec spec = load_spec(f.spec);
    ReportOptions opt = options_for(spec, f);
    const Substitution& s = spec.substitution;
    if (f.ks.size() != 1) throw InputError("freq needs exactly one --k");
    LatticePoint k = parse_lattice_point(f.ks[0], s.dim());
    PreparedSubstitution prep = prepare(s);
    InvariantWeights w = invariant_weights(prep.telescoped, prep.decomposition, opt.weights);
    CorrelationEngine engine(prep.telescoped, w.u, opt.p_max);
    ExactVector exact = engine.coefficient(k);
    FrequencyVector fv;
    if (f.averaged) {
        fv = averaged_pair_frequency(s, w.u, f.n, k);
    } else {
        Letter g = 0;
        if (!f.gamma.empty()) {
            auto idx = s.alphabet().index(f.gamma);
            if (!idx) throw InputError("--gamma: unknown letter '" + f.gamma + "'");
            g = *idx;
        }
        fv = pair_frequency(s, g, f.n, k);
    }
    Comparison cmp = compare(fv, exact, s.size(), s.q());
    std::ostringstream csv;
    write_frequency_csv(csv, s.alphabet(), fv, exact);
    const std::string path = !f.emit_csv.empty() ? f.emit_csv : f.output;
    std::ostringstream summary;
    summary << "L1 " << cmp.l1.get_d() << ", max deviation " << cmp.max_deviation.get_d() << ", carry bound "
            << cmp.carry_bound.get_d() << "\n";
    if (!path.empty()) {
        write_file(path, csv.str());
        out << summary.str();
    } else {
        out << csv.str();
    }
    return kOk;
}

int cmd_report(const Flags& f, std::ostream& out)
{
    SubstitutionSpec spec = load_spec(f.spec);
    ReportOptions opt = options_for(spec, f);
    SpectralReport rep = spectral_report(spec.substitution, opt);
    out << human_report(spec, rep);
    if (!f.output.empty()) write_file(f.output, report_document(spec, rep, opt).dump(2) + "\n");
    if (!f.emit_csv.empty()) {
        const Substitution& s = spec.substitution;
        CorrelationEngine engine(rep.prepared.telescoped, rep.weights.u, opt.p_max);
        auto values = engine.coefficients(rep.window, opt.jobs);
        std::ostringstream csv;
        write_coefficient_csv(csv, s.alphabet(), rep.window, values);
        write_file(f.emit_csv, csv.str());
    }
    return rep.complete ? kOk : kIncomplete;
}

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("spec", f.spec, "substitution definition file")->required();
    sub->add_option("--p-max", f.p_max, "largest p tried for the corner systems")->check(CLI::PositiveNumber);
    sub->add_option("--weights", f.weights, "ergodic class coefficients c1,c2,...");
    sub->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", f.output, "output file");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spectral analysis of constant-shape substitutions on Z^d", "qspectra"};
    app.require_subcommand(1);
    Flags f;

    auto* analyze = app.add_subcommand("analyze", "decomposition, matrices and structural predicates");
    add_common(analyze, f);

    auto* hull = app.add_subcommand("hull", "extreme points of the spectral hull");
    add_common(hull, f);
    hull->add_option("--method", f.method, "auto, exact-1d, commutative-exact, numeric or candidates");

    auto* fourier = app.add_subcommand("fourier", "exact correlation coefficients");
    add_common(fourier, f);
    fourier->add_option("--k", f.ks, "lattice point such as 5 or 1,0 (repeatable)");
    fourier->add_option("--window", f.window, "all k with power_of(k) <= P");
    fourier->add_option("--emit-csv", f.emit_csv, "write the CSV here instead of stdout");

    auto* classify = app.add_subcommand("classify", "classify the extremal measures on a window");
    add_common(classify, f);
    classify->add_option("--window", f.window, "window power P");
    classify->add_option("--height-bound", f.height_bound, "largest h_i tried for discrete lattices")->check(CLI::PositiveNumber);
    classify->add_option("--method", f.method, "hull method");

    auto* freq = app.add_subcommand("freq", "pair frequencies of a superblock against the exact coefficients");
    add_common(freq, f);
    freq->add_option("--n", f.n, "depth")->required();
    freq->add_option("--k", f.ks, "lattice point")->required();
    freq->add_option("--gamma", f.gamma, "starting letter (default: the first)");
    freq->add_flag("--averaged", f.averaged, "average over starting letters with weights u");
    freq->add_option("--emit-csv", f.emit_csv, "write the CSV here and print a summary");

    auto* report = app.add_subcommand("report", "full pipeline: human report, machine document, CSV");
    add_common(report, f);
    report->add_option("--window", f.window, "window power P");
    report->add_option("--height-bound", f.height_bound, "largest h_i tried for discrete lattices")->check(CLI::PositiveNumber);
    report->add_option("--method", f.method, "hull method");
    report->add_option("--emit-csv", f.emit_csv, "coefficient CSV for the window");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*analyze) return cmd_analyze(f, out);
        if (*hull) return cmd_hull(f, out);
        if (*fourier) return cmd_fourier(f, out);
        if (*classify) return cmd_classify(f, out);
        if (*freq) return cmd_freq(f, out);
        if (*report) return cmd_report(f, out);
    } catch (const SpecError& e) {
        for (const auto& d : e.diagnostics()) err << d.str() << "\n";
        return kInvalid;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}

}  // namespace qspectra::cli

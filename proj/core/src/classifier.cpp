#include "qspectra/classifier.hpp"

#include "qspectra/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace qspectra {

namespace {

std::string format_double(double x)
{
    if (std::abs(x) < 1e-15) x = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::int64_t floor_mod(const Integer& k, unsigned h)
{
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), k.get_mpz_t(), h);
    return r.get_si();
}

std::string q_label(const Expansion& q)
{
    if (q.dim() == 1) return std::to_string(q[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < q.dim(); ++i) out += (i ? "," : "") + std::to_string(q[i]);
    return out + ")";
}

std::string lattice_label(const std::vector<unsigned>& h)
{
    if (h.size() == 1) return std::to_string(h[0]) + "Z";
    std::string out = "(";
    for (std::size_t i = 0; i < h.size(); ++i) out += (i ? "," : "") + std::to_string(h[i]);
    return out + ")Z^" + std::to_string(h.size());
}

std::vector<std::vector<unsigned>> height_candidates(const Expansion& q, unsigned bound)
{
    std::vector<std::vector<unsigned>> out;
    const std::size_t d = q.dim();
    std::vector<unsigned> h(d, 1);
    while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < d; ++i)
            if (std::gcd(h[i], q[i]) != 1) ok = false;
        if (ok) out.push_back(h);
        std::size_t i = d;
        while (i > 0 && h[i - 1] == bound) h[--i] = 1;
        if (i == 0) break;
        ++h[i - 1];
    }
    auto prod = [](const std::vector<unsigned>& v) {
        return std::accumulate(v.begin(), v.end(), 1UL, [](unsigned long a, unsigned b) { return a * b; });
    };
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        if (prod(a) != prod(b)) return prod(a) < prod(b);
        return a < b;
    });
    return out;
}

LambdaValue evaluate(const ExtremePoint& w, const ExactVector& sigma)
{
    if (w.exact) return lambda_coefficient(*w.exact, sigma);
    return lambda_coefficient(w.v, sigma);
}

LambdaValue product(const LambdaValue& a, const LambdaValue& b)
{
    LambdaValue r;
    if (a.exact && b.exact) r.exact = *a.exact * *b.exact;
    r.value = a.value * b.value;
    return r;
}

double distance(const LambdaValue& a, const LambdaValue& b)
{
    if (a.exact && b.exact) {
        Rational d = *a.exact - *b.exact;
        return std::abs(d.get_d());
    }
    return std::abs(a.value - b.value);
}

bool is_all_ones(const ExtremePoint& p)
{
    return std::all_of(p.v.begin(), p.v.end(), [](const std::complex<double>& z) { return std::abs(z - 1.0) < 1e-9; });
}

// k + a * q^p, coordinatewise.
LatticePoint shifted_point(const LatticePoint& b, const LatticePoint& a, const Expansion& q, unsigned p)
{
    LatticePoint r = b;
    for (std::size_t i = 0; i < b.dim(); ++i) r[i] += a[i] * q.power(i, p);
    return r;
}

std::string term_for(const ExtremalMeasure& m, const Expansion& q)
{
    const std::string omega = "ω_" + q_label(q);
    switch (m.classification.kind) {
    case MeasureKind::Lebesgue: return "m";
    case MeasureKind::Discrete: {
        const auto& h = m.classification.height;
        if (std::all_of(h.begin(), h.end(), [](unsigned x) { return x == 1; })) return omega;
        return omega + "∗ν_{" + lattice_label(h) + "}";
    }
    case MeasureKind::SingularContinuous:
    case MeasureKind::Inconclusive: return omega + "∗λ_{" + m.label + "}";
    }
    return omega;
}

std::vector<ExactVector> project_candidates(const std::vector<ExactVector>& cands, const std::vector<Letter>& letters,
                                            std::size_t s)
{
    std::vector<ExactVector> out;
    const std::size_t n = letters.size();
    for (const auto& c : cands) {
        if (c.size() != s * s) {
            throw InputError("candidate has " + std::to_string(c.size()) + " entries, expected " + std::to_string(s * s));
        }
        ExactVector v(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) v[a * n + b] = c[letters[a] * s + letters[b]];
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

LambdaValue lambda_coefficient(const ExactVector& w, const ExactVector& sigma_k)
{
    if (w.size() != sigma_k.size()) throw InputError("hull vector and coefficient vector differ in length");
    LambdaValue r;
    r.exact = dot(w, sigma_k);
    r.value = r.exact->get_d();
    return r;
}

LambdaValue lambda_coefficient(const ComplexVector& w, const ExactVector& sigma_k)
{
    if (w.size() != sigma_k.size()) throw InputError("hull vector and coefficient vector differ in length");
    LambdaValue r;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (sgn(sigma_k[i]) != 0) r.value += w[i] * sigma_k[i].get_d();
    return r;
}

bool same_value(const LambdaValue& a, const LambdaValue& b, double tolerance)
{
    if (a.exact && b.exact) return *a.exact == *b.exact;
    return std::abs(a.value - b.value) <= tolerance;
}

bool is_zero(const LambdaValue& a, double tolerance)
{
    if (a.exact) return sgn(*a.exact) == 0;
    return std::abs(a.value) <= tolerance;
}

std::string to_string(const LambdaValue& a)
{
    if (a.exact) return to_string(*a.exact);
    double re = a.value.real(), im = a.value.imag();
    if (std::abs(im) < 1e-12) return format_double(re);
    std::string out = format_double(re);
    out += im < 0 ? "-" : "+";
    return out + format_double(std::abs(im)) + "i";
}

std::string to_string(MeasureKind k)
{
    switch (k) {
    case MeasureKind::Lebesgue: return "lebesgue";
    case MeasureKind::Discrete: return "discrete";
    case MeasureKind::SingularContinuous: return "singular-continuous";
    case MeasureKind::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Classification classify(const std::vector<LatticePoint>& ks, const std::vector<LambdaValue>& values,
                        const Expansion& q, unsigned height_bound, double tolerance)
{
    if (ks.empty()) throw InputError("classification window is empty");
    if (ks.size() != values.size()) throw InputError("window and coefficient lists differ in length");
    if (height_bound == 0) throw InputError("height bound must be positive");
    Classification c;
    std::ostringstream ev;
    ev << "evidence on a window of " << ks.size() << " points";
    c.evidence = ev.str();

    bool any_nonzero_k = false, any_nonzero_value = false;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i].is_zero()) continue;
        any_nonzero_k = true;
        if (!is_zero(values[i], tolerance)) {
            if (!any_nonzero_value) {
                c.witnesses.push_back("coefficient at k = " + ks[i].str() + " is " + to_string(values[i]));
            }
            any_nonzero_value = true;
        }
    }
    if (!any_nonzero_k) {
        c.kind = MeasureKind::Inconclusive;
        c.witnesses.push_back("window has no nonzero frequency");
        return c;
    }
    if (!any_nonzero_value) {
        c.kind = MeasureKind::Lebesgue;
        c.witnesses.push_back("all coefficients off 0 vanish");
        return c;
    }
    for (const auto& h : height_candidates(q, height_bound)) {
        std::map<std::vector<std::int64_t>, std::size_t> first;
        std::optional<std::string> conflict;
        for (std::size_t i = 0; i < ks.size() && !conflict; ++i) {
            std::vector<std::int64_t> res(h.size());
            for (std::size_t j = 0; j < h.size(); ++j) res[j] = floor_mod(ks[i][j], h[j]);
            auto [it, fresh] = first.emplace(res, i);
            if (!fresh && !same_value(values[it->second], values[i], tolerance)) {
                conflict = "h = " + lattice_label(h) + ": coefficient at " + ks[it->second].str() + " is " +
                           to_string(values[it->second]) + " but at " + ks[i].str() + " is " + to_string(values[i]);
            }
        }
        if (!conflict) {
            c.kind = MeasureKind::Discrete;
            c.height = h;
            c.witnesses.push_back("coefficients depend only on k mod " + lattice_label(h));
            return c;
        }
        c.witnesses.push_back(*conflict);
    }
    c.kind = MeasureKind::SingularContinuous;
    return c;
}

bool abc_shortcut(const AperiodicityVerdict& verdict, const StructuralPredicates& predicates)
{
    return verdict.established() && predicates.bijective && predicates.commutative;
}

std::vector<LatticePoint> evidence_window(const Expansion& q, unsigned p, const std::vector<LatticePoint>& extra)
{
    std::vector<LatticePoint> pts = window(q, p);
    for (const auto& e : extra) {
        if (e.dim() != q.dim()) throw InputError("window point " + e.str() + " has the wrong dimension");
        pts.push_back(e);
    }
    auto norm = [](const LatticePoint& k) {
        Integer m = 0;
        for (const auto& c : k.coords()) m = std::max<Integer>(m, abs(c));
        return m;
    };
    std::sort(pts.begin(), pts.end(), [&](const LatticePoint& a, const LatticePoint& b) {
        Integer na = norm(a), nb = norm(b);
        if (na != nb) return na < nb;
        return a < b;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<std::pair<LatticePoint, LatticePoint>> mixing_pairs(std::size_t d)
{
    if (d == 1) return {{LatticePoint{1}, LatticePoint{1}}, {LatticePoint{1}, LatticePoint{2}}, {LatticePoint{2}, LatticePoint{1}}};
    LatticePoint e1 = LatticePoint::unit(d, 0), e2 = LatticePoint::unit(d, 1), one = LatticePoint::constant(d, 1);
    return {{e1, e1}, {e1, e2}, {one, e1}};
}

std::vector<ComponentAnalysis> analyse_components(const PreparedSubstitution& prepared, const InvariantWeights& weights,
                                                  const ReportOptions& opt)
{
    const Substitution& t = prepared.telescoped;
    const auto& classes = prepared.decomposition.classes;
    std::vector<ComponentAnalysis> out;
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        ComponentAnalysis comp;
        comp.letters = classes[ci];
        comp.weight = weights.class_coefficients[ci];
        comp.substitution = restrict_to(t, comp.letters);
        ErgodicDecomposition bi = ergodic_decomposition(coincidence_matrix(comp.substitution));
        if (bi.index != 1) {
            comp.extra_exponent = bi.index;
            comp.substitution = telescope(comp.substitution, bi.index);
            bi = ergodic_decomposition(coincidence_matrix(comp.substitution));
        }
        ErgodicDecomposition own = ergodic_decomposition(comp.substitution);
        comp.u = invariant_weights(comp.substitution, own).u;
        comp.hull = hull_parametrization(comp.substitution, bi, comp.u);
        auto cands = project_candidates(opt.candidates, comp.letters, t.size());
        comp.hull_result = extreme_points(comp.hull, opt.method, cands, opt.numeric);
        out.push_back(std::move(comp));
    }
    return out;
}

SpectralReport spectral_report(const Substitution& s, const ReportOptions& opt)
{
    SpectralReport rep;
    rep.prepared = prepare(s);
    const Substitution& t = rep.prepared.telescoped;
    rep.weights = invariant_weights(t, rep.prepared.decomposition, opt.weights);
    rep.aperiodicity = check_aperiodicity(s);
    rep.predicates = structural_predicates(s);
    rep.abc = abc_shortcut(rep.aperiodicity, rep.predicates);
    rep.window = evidence_window(s.q(), opt.window_power, opt.extra_points);

    if (!rep.aperiodicity.established()) {
        rep.caveats.push_back("aperiodicity is " + to_string(rep.aperiodicity.status) + " (" +
                              rep.aperiodicity.explanation + "); the spectral statements assume it");
    }
    if (rep.prepared.exponent != 1) {
        rep.caveats.push_back("analysis runs on the substitution telescoped by " +
                              std::to_string(rep.prepared.exponent));
    }
    if (rep.prepared.decomposition.classes.size() > 1) {
        rep.caveats.push_back("each of the " + std::to_string(rep.prepared.decomposition.classes.size()) +
                              " ergodic classes is analysed separately; sigma_max is the sum over classes");
    }

    rep.components = analyse_components(rep.prepared, rep.weights, opt);
    for (std::size_t ci = 0; ci < rep.components.size(); ++ci) {
        ComponentAnalysis& comp = rep.components[ci];
        if (!comp.hull_result.complete) {
            rep.complete = false;
            for (const auto& note : comp.hull_result.notes) rep.caveats.push_back("class " + std::to_string(ci + 1) + ": " + note);
        }
        std::vector<ExtremePoint> points = comp.hull_result.points;
        std::stable_partition(points.begin(), points.end(), is_all_ones);

        CorrelationEngine engine(comp.substitution, comp.u, opt.p_max);
        std::vector<ExactVector> sigmas = engine.coefficients(rep.window, opt.jobs);
        const unsigned hb = opt.height_bound ? opt.height_bound : static_cast<unsigned>(comp.substitution.size());

        for (auto& w : points) {
            ExtremalMeasure m;
            m.label = "v" + std::to_string(rep.measures.size() + 1);
            m.component = ci;
            m.w = w;
            for (const auto& sg : sigmas) m.coefficients.push_back(evaluate(w, sg));
            m.classification = classify(rep.window, m.coefficients, s.q(), hb, opt.tolerance);
            m.classification.evidence += " (power_of(k) <= " + std::to_string(opt.window_power) + ")";
            if (opt.mixing) {
                for (const auto& [a, b] : mixing_pairs(s.dim())) {
                    MixingRow row;
                    row.a = a;
                    row.b = b;
                    LambdaValue la = evaluate(w, engine.coefficient(a));
                    LambdaValue lb = evaluate(w, engine.coefficient(b));
                    LambdaValue target = product(lb, la);
                    for (unsigned p = 2; p <= 5; ++p) {
                        LambdaValue lk = evaluate(w, engine.coefficient(shifted_point(b, a, s.q(), p)));
                        double dev = distance(lk, target);
                        if (!row.deviation.empty() && dev > row.deviation.back() + 1e-9) row.nonincreasing = false;
                        row.powers.push_back(p);
                        row.deviation.push_back(dev);
                    }
                    m.mixing.push_back(std::move(row));
                }
            }
            comp.measures.push_back(rep.measures.size());
            rep.measures.push_back(std::move(m));
        }
    }

    bool lebesgue = false;
    for (const auto& m : rep.measures) {
        if (m.classification.kind == MeasureKind::Lebesgue) lebesgue = true;
        if (m.classification.kind == MeasureKind::Inconclusive)
            rep.caveats.push_back(m.label + ": classification inconclusive on the window");
    }
    rep.purely_singular = !lebesgue;
    if (rep.abc && lebesgue) {
        rep.caveats.push_back("a component looks Lebesgue on the window although the substitution is aperiodic, "
                              "bijective and commutative");
        rep.purely_singular = true;
    }
    rep.caveats.push_back("classifications are evidence on a finite window, not proofs");

    std::string generic = "σ_max ~ ω_q ∗ (";
    for (std::size_t i = 0; i < rep.measures.size(); ++i) generic += (i ? " + λ_" : "λ_") + std::to_string(i + 1);
    rep.generic_statement = generic + ")";
    std::vector<std::string> terms;
    for (const auto& m : rep.measures) {
        std::string term = term_for(m, s.q());
        if (std::find(terms.begin(), terms.end(), term) == terms.end()) terms.push_back(term);
    }
    rep.statement = "σ_max ~ ";
    for (std::size_t i = 0; i < terms.size(); ++i) rep.statement += (i ? " + " : "") + terms[i];
    return rep;
}

}  // namespace qspectra

#include "qspectra_cli/spec_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qspectra::cli {

namespace {

const std::set<std::string> kKeys{"name", "dimension", "q", "alphabet", "aperiodic", "rules", "weights", "candidates", "defaults"};
const std::set<std::string> kDefaultKeys{"window", "p_max", "tolerance"};

class Collector {
public:
    explicit Collector(std::string origin) : origin_(std::move(origin)) {}

    void add(const YAML::Node& at, const std::string& message)
    {
        int line = at.IsDefined() && at.Mark().line >= 0 ? at.Mark().line + 1 : 0;
        diags_.push_back({origin_, line, message});
    }
    void add(int line, const std::string& message) { diags_.push_back({origin_, line, message}); }
    bool empty() const { return diags_.empty(); }
    [[noreturn]] void raise() { throw SpecError(diags_); }

private:
    std::string origin_;
    std::vector<Diagnostic> diags_;
};

std::optional<long> as_integer(const YAML::Node& n)
{
    if (!n.IsScalar()) return std::nullopt;
    try {
        std::size_t used = 0;
        const std::string text = n.Scalar();
        long v = std::stol(text, &used);
        if (used != text.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<Rational> as_rational(const YAML::Node& n)
{
    if (!n.IsScalar()) return std::nullopt;
    try {
        return parse_rational(n.Scalar());
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string Diagnostic::str() const
{
    std::ostringstream out;
    out << origin;
    if (line > 0) out << ':' << line;
    out << ": " << message;
    return out.str();
}

namespace {

std::string joined(const std::vector<Diagnostic>& d)
{
    std::string out;
    for (std::size_t i = 0; i < d.size(); ++i) out += (i ? "\n" : "") + d[i].str();
    return out;
}

}  // namespace

SpecError::SpecError(std::vector<Diagnostic> d) : InputError(joined(d)), diagnostics_(std::move(d)) {}

SubstitutionSpec parse_spec(const std::string& text, const std::string& origin)
{
    Collector diag(origin);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        diag.add(e.mark.line + 1, "malformed file: " + e.msg);
        diag.raise();
    }
    if (!root.IsMap()) {
        diag.add(1, "expected a key-value document at the top level");
        diag.raise();
    }
    for (const auto& kv : root) {
        const std::string key = kv.first.as<std::string>();
        if (!kKeys.count(key)) diag.add(kv.first, "unknown key '" + key + "'");
    }
    for (const char* key : {"dimension", "q", "alphabet", "rules"})
        if (!root[key]) diag.add(root, std::string("missing key '") + key + "'");

    SubstitutionSpec spec;
    if (root["name"]) spec.name = root["name"].as<std::string>();

    // q and dimension.
    std::vector<std::uint32_t> q;
    bool q_ok = false;
    if (const YAML::Node qn = root["q"]) {
        if (!qn.IsSequence() || qn.size() == 0) {
            diag.add(qn, "q must be a non-empty list of integers");
        } else {
            q_ok = true;
            for (std::size_t i = 0; i < qn.size(); ++i) {
                auto v = as_integer(qn[i]);
                if (!v) {
                    diag.add(qn[i], "q[" + std::to_string(i) + "] is not an integer");
                    q_ok = false;
                } else if (*v < 2) {
                    diag.add(qn[i], "q[" + std::to_string(i) + "] = " + std::to_string(*v) + ": entries must be at least 2");
                    q_ok = false;
                } else if (*v > 1 << 16) {
                    diag.add(qn[i], "q[" + std::to_string(i) + "] = " + std::to_string(*v) + " is too large");
                    q_ok = false;
                } else {
                    q.push_back(static_cast<std::uint32_t>(*v));
                }
            }
        }
    }
    if (const YAML::Node dn = root["dimension"]) {
        auto d = as_integer(dn);
        if (!d || *d < 1) {
            diag.add(dn, "dimension must be a positive integer");
        } else if (root["q"] && root["q"].IsSequence() && static_cast<std::size_t>(*d) != root["q"].size()) {
            diag.add(dn, "dimension " + std::to_string(*d) + " does not match q with " +
                             std::to_string(root["q"].size()) + " entries");
            q_ok = false;
        }
    }
    std::uint64_t Q = 1;
    if (q_ok)
        for (auto x : q) Q *= x;

    // Alphabet.
    std::vector<std::string> names;
    std::set<std::string> seen;
    if (const YAML::Node an = root["alphabet"]) {
        if (!an.IsSequence() || an.size() == 0) {
            diag.add(an, "alphabet must be a non-empty list of names");
        } else {
            for (std::size_t i = 0; i < an.size(); ++i) {
                if (!an[i].IsScalar() || an[i].Scalar().empty()) {
                    diag.add(an[i], "alphabet entry " + std::to_string(i) + " must be a non-empty name");
                    continue;
                }
                const std::string n = an[i].Scalar();
                if (!seen.insert(n).second) diag.add(an[i], "duplicate letter '" + n + "'");
                else names.push_back(n);
            }
        }
    }
    std::map<std::string, Letter> index;
    for (Letter i = 0; i < names.size(); ++i) index[names[i]] = i;

    // Policy.
    AperiodicityPolicy policy = AperiodicityPolicy::CheckPansiot;
    if (const YAML::Node pn = root["aperiodic"]) {
        auto p = pn.IsScalar() ? parse_policy(pn.Scalar()) : std::nullopt;
        if (!p) diag.add(pn, "aperiodic must be one of check-pansiot, asserted, unknown");
        else policy = *p;
    }

    // Rules.
    std::vector<std::vector<Letter>> rules(names.size());
    std::vector<bool> have(names.size(), false);
    if (const YAML::Node rn = root["rules"]) {
        if (!rn.IsMap()) {
            diag.add(rn, "rules must map each letter to a list of cells");
        } else {
            for (const auto& kv : rn) {
                const std::string key = kv.first.as<std::string>();
                auto it = index.find(key);
                if (it == index.end()) {
                    diag.add(kv.first, "rule for unknown letter '" + key + "'");
                    continue;
                }
                if (have[it->second]) {
                    diag.add(kv.first, "rule '" + key + "' appears twice");
                    continue;
                }
                have[it->second] = true;
                const YAML::Node cells = kv.second;
                if (!cells.IsSequence()) {
                    diag.add(cells, "rule '" + key + "': expected a list of cells");
                    continue;
                }
                if (q_ok && cells.size() != Q) {
                    diag.add(cells, "rule '" + key + "': expected " + std::to_string(Q) + " cells, found " +
                                        std::to_string(cells.size()));
                }
                for (std::size_t c = 0; c < cells.size(); ++c) {
                    const std::string v = cells[c].IsScalar() ? cells[c].Scalar() : std::string();
                    auto li = index.find(v);
                    if (li == index.end()) {
                        diag.add(cells[c], "rule '" + key + "': cell " + std::to_string(c) + ": unknown letter '" + v + "'");
                    } else {
                        rules[it->second].push_back(li->second);
                    }
                }
            }
            for (Letter i = 0; i < names.size(); ++i)
                if (!have[i]) diag.add(rn, "missing rule for letter '" + names[i] + "'");
        }
    }

    // Weights.
    if (const YAML::Node wn = root["weights"]) {
        if (!wn.IsSequence()) {
            diag.add(wn, "weights must be a list of rationals");
        } else {
            std::vector<Rational> w;
            for (std::size_t i = 0; i < wn.size(); ++i) {
                auto r = as_rational(wn[i]);
                if (!r) diag.add(wn[i], "weights[" + std::to_string(i) + "] is not a rational number");
                else w.push_back(*r);
            }
            spec.weights = w;
        }
    }

    // Candidates.
    if (const YAML::Node cn = root["candidates"]) {
        if (!cn.IsSequence()) {
            diag.add(cn, "candidates must be a list of vectors");
        } else {
            const std::size_t want = names.size() * names.size();
            for (std::size_t i = 0; i < cn.size(); ++i) {
                if (!cn[i].IsSequence()) {
                    diag.add(cn[i], "candidate " + std::to_string(i + 1) + " must be a list");
                    continue;
                }
                if (!names.empty() && cn[i].size() != want) {
                    diag.add(cn[i], "candidate " + std::to_string(i + 1) + ": expected " + std::to_string(want) +
                                        " entries, found " + std::to_string(cn[i].size()));
                }
                ExactVector v;
                for (std::size_t j = 0; j < cn[i].size(); ++j) {
                    auto r = as_rational(cn[i][j]);
                    if (!r) diag.add(cn[i][j], "candidate " + std::to_string(i + 1) + ": entry " + std::to_string(j) + " is not rational");
                    else v.push_back(*r);
                }
                spec.candidates.push_back(std::move(v));
            }
        }
    }

    // Defaults.
    if (const YAML::Node dn = root["defaults"]) {
        if (!dn.IsMap()) {
            diag.add(dn, "defaults must be a key-value block");
        } else {
            for (const auto& kv : dn) {
                const std::string key = kv.first.as<std::string>();
                if (!kDefaultKeys.count(key)) diag.add(kv.first, "unknown default '" + key + "'");
            }
            for (const char* key : {"window", "p_max"}) {
                if (!dn[key]) continue;
                auto v = as_integer(dn[key]);
                if (!v || *v < 1) {
                    diag.add(dn[key], std::string("defaults.") + key + " must be a positive integer");
                    continue;
                }
                (std::string(key) == "window" ? spec.defaults.window : spec.defaults.p_max) = static_cast<unsigned>(*v);
            }
            if (dn["tolerance"]) {
                try {
                    double t = dn["tolerance"].as<double>();
                    if (!(t > 0)) throw std::invalid_argument("tolerance");
                    spec.defaults.tolerance = t;
                } catch (const std::exception&) {
                    diag.add(dn["tolerance"], "defaults.tolerance must be a positive number");
                }
            }
        }
    }

    if (!diag.empty()) diag.raise();
    spec.substitution = Substitution(Alphabet(names), Expansion(q), rules, policy);
    return spec;
}

SubstitutionSpec load_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str(), path);
}

std::string serialize_spec(const SubstitutionSpec& spec)
{
    const Substitution& s = spec.substitution;
    std::ostringstream out;
    if (!spec.name.empty()) out << "name: " << quote(spec.name) << '\n';
    out << "dimension: " << s.dim() << '\n';
    out << "q: [";
    for (std::size_t i = 0; i < s.dim(); ++i) out << (i ? ", " : "") << s.q()[i];
    out << "]\n";
    out << "alphabet: [";
    for (Letter i = 0; i < s.size(); ++i) out << (i ? ", " : "") << quote(s.alphabet().name(i));
    out << "]\n";
    out << "aperiodic: " << to_string(s.policy()) << '\n';
    out << "rules:\n";
    for (Letter g = 0; g < s.size(); ++g) {
        out << "  " << quote(s.alphabet().name(g)) << ": [";
        for (std::size_t c = 0; c < s.Q(); ++c) out << (c ? ", " : "") << quote(s.alphabet().name(s.image(g, c)));
        out << "]\n";
    }
    if (spec.weights) {
        out << "weights: [";
        for (std::size_t i = 0; i < spec.weights->size(); ++i) out << (i ? ", " : "") << quote(to_string((*spec.weights)[i]));
        out << "]\n";
    }
    if (!spec.candidates.empty()) {
        out << "candidates:\n";
        for (const auto& c : spec.candidates) {
            out << "  - [";
            for (std::size_t i = 0; i < c.size(); ++i) out << (i ? ", " : "") << quote(to_string(c[i]));
            out << "]\n";
        }
    }
    const auto& d = spec.defaults;
    if (d.window || d.p_max || d.tolerance) {
        out << "defaults:\n";
        if (d.window) out << "  window: " << *d.window << '\n';
        if (d.p_max) out << "  p_max: " << *d.p_max << '\n';
        if (d.tolerance) {
            std::ostringstream t;
            t.precision(17);
            t << *d.tolerance;
            out << "  tolerance: " << t.str() << '\n';
        }
    }
    return out.str();
}

}  // namespace qspectra::cli

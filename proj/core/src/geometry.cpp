#include "ogeo/geometry.hpp"

#include <cctype>

#include "catalog_text.hpp"
#include "ogeo/syntax.hpp"

namespace ogeo {

namespace {

std::string lookup_key(std::string_view s) {
    std::string k;
    for (char c : s) {
        if (c == '.' || std::isspace(static_cast<unsigned char>(c))) continue;
        k += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return k;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

AxiomSet AxiomSet::parse(std::string_view text) {
    AxiomSet set;
    const Signature sig = Signature::with_definitions();
    bool forms = false;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        if (line == "[axioms]") {
            forms = false;
            continue;
        }
        if (line == "[forms]") {
            forms = true;
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::runtime_error("catalog line " + std::to_string(lineno) + ": expected NAME = formula");
        std::string name(trim(line.substr(0, eq)));
        std::string source(trim(line.substr(eq + 1)));
        Formula f = [&] {
            try {
                return parse_formula(source, sig);
            } catch (const ParseError& e) {
                throw std::runtime_error("catalog entry " + name + ": " + e.what());
            }
        }();
        if (!is_closed(f)) throw std::runtime_error("catalog entry " + name + " is not closed");
        std::string key = lookup_key(name);
        if (set.index_.count(key)) throw std::runtime_error("duplicate catalog entry " + name);
        set.index_[key] = set.entries_.size();
        set.entries_.push_back({name, source, f, forms});
    }
    return set;
}

const AxiomSet& AxiomSet::builtin() {
    static const AxiomSet set = parse(detail::kCatalogText);
    return set;
}

bool AxiomSet::contains(std::string_view name) const { return index_.count(lookup_key(name)) != 0; }

const CatalogEntry& AxiomSet::entry(std::string_view name) const {
    auto it = index_.find(lookup_key(name));
    if (it == index_.end()) throw UnknownAxiom(std::string(name));
    return entries_[it->second];
}

std::vector<std::string> AxiomSet::names(bool include_forms) const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (include_forms || !e.is_form) out.push_back(e.name);
    return out;
}

Formula axiom(std::string_view name) { return AxiomSet::builtin().get(name); }

std::vector<std::string> split_names(std::string_view names) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= names.size()) {
        std::size_t comma = names.find(',', pos);
        if (comma == std::string_view::npos) comma = names.size();
        std::string_view n = trim(names.substr(pos, comma - pos));
        if (!n.empty()) out.emplace_back(n);
        pos = comma + 1;
    }
    return out;
}

std::vector<Formula> axioms(std::string_view names) {
    std::vector<Formula> out;
    for (const auto& n : split_names(names)) out.push_back(axiom(n));
    return out;
}

Formula expand_defs(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            const std::string& p = f.pred();
            if (p != "CON" && p != "DIR" && p != "OPP" && p != "INOPP") return f;
            if (f.args().size() != 2)
                throw std::invalid_argument("defined relation " + p + " expects 2 arguments");
            const Term& a = f.args()[0];
            const Term& b = f.args()[1];
            Term rb = Term::app("rev", {b});
            if (p == "CON")
                return Formula::conj(Formula::atom("UNDIR", {a, b}), Formula::atom("UNDIR", {a, rb}));
            if (p == "DIR") return Formula::negation(Formula::atom("UNDIR", {a, b}));
            if (p == "OPP") return Formula::negation(Formula::atom("UNDIR", {a, rb}));
            return Formula::atom("UNDIR", {a, rb});
        }
        case Formula::Kind::Not:
            return Formula::negation(expand_defs(f.body()));
        case Formula::Kind::Forall:
        case Formula::Kind::Exists:
            return Formula::quant(f.kind(), f.var(), expand_defs(f.body()));
        default:
            return Formula::binary(f.kind(), expand_defs(f.lhs()), expand_defs(f.rhs()));
    }
}

std::vector<Formula> w_decomposition() { return {axiom("W1"), axiom("W2"), axiom("W3"), axiom("W4")}; }

namespace {
Formula push_forall(const std::string& v, const Formula& g) {
    if (!occurs_free(v, g)) return g;
    if (g.is(Formula::Kind::Implies) && !occurs_free(v, g.lhs()))
        return Formula::implies(g.lhs(), push_forall(v, g.rhs()));
    return Formula::forall(v, g);
}
}  // namespace

Formula close_pushed(const Formula& f, const std::vector<std::string>& vars) {
    Formula g = f;
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) g = push_forall(*it, g);
    return g;
}

}  // namespace ogeo

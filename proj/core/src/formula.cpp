#include "ogeo/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace ogeo {

Term Term::var(std::string name) {
    return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}}));
}

Term Term::app(std::string fn, std::vector<Term> args) {
    return Term(std::make_shared<const Node>(Node{Kind::App, std::move(fn), std::move(args)}));
}

std::size_t Term::depth() const {
    std::size_t d = 0;
    for (const auto& a : args()) d = std::max(d, a.depth());
    return is_var() ? 0 : d + 1;
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    return a.kind() == b.kind() && a.name() == b.name() && a.args() == b.args();
}

bool operator<(const Term& a, const Term& b) {
    if (a.kind() != b.kind()) return a.kind() < b.kind();
    if (a.name() != b.name()) return a.name() < b.name();
    return std::lexicographical_compare(a.args().begin(), a.args().end(), b.args().begin(),
                                        b.args().end());
}

Formula Formula::atom(std::string pred, std::vector<Term> args) {
    return Formula(std::make_shared<const Node>(Node{Kind::Atom, std::move(pred), std::move(args), {}}));
}

Formula Formula::negation(Formula f) {
    return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, {}, {std::move(f)}}));
}

Formula Formula::binary(Kind k, Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{k, {}, {}, {std::move(a), std::move(b)}}));
}

Formula Formula::conj(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) {
    return binary(Kind::Implies, std::move(a), std::move(b));
}

Formula Formula::quant(Kind k, std::string var, Formula body) {
    return Formula(std::make_shared<const Node>(Node{k, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::forall(std::string var, Formula body) {
    return quant(Kind::Forall, std::move(var), std::move(body));
}
Formula Formula::exists(std::string var, Formula body) {
    return quant(Kind::Exists, std::move(var), std::move(body));
}

bool Formula::is_binary() const {
    return is(Kind::And) || is(Kind::Or) || is(Kind::Implies);
}

std::size_t Formula::size() const {
    std::size_t n = 1;
    for (const auto& k : node_->kids) n += k.size();
    return n;
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    return a.node_->name == b.node_->name && a.node_->args == b.node_->args &&
           a.node_->kids == b.node_->kids;
}

Signature Signature::geometry() {
    Signature s;
    s.predicates["UNDIR"] = 2;
    s.functions["rev"] = 1;
    return s;
}

Signature Signature::with_definitions() {
    Signature s = geometry();
    for (const char* p : {"CON", "DIR", "OPP", "INOPP"}) s.predicates[p] = 2;
    return s;
}

namespace {
std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}
std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}
}  // namespace

bool Signature::has_function(const std::string& name) const {
    return functions.count(lower(name)) != 0;
}

int Signature::predicate_arity(const std::string& name) const {
    auto it = predicates.find(upper(name));
    return it == predicates.end() ? -1 : it->second;
}

int Signature::function_arity(const std::string& name) const {
    auto it = functions.find(lower(name));
    return it == functions.end() ? -1 : it->second;
}

void collect_vars(const Term& t, VarSet& out) {
    if (t.is_var()) {
        out.insert(t.name());
        return;
    }
    for (const auto& a : t.args()) collect_vars(a, out);
}

VarSet term_vars(const Term& t) {
    VarSet s;
    collect_vars(t, s);
    return s;
}

namespace {

void free_rec(const Formula& f, VarSet& bound, VarSet& out) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
            for (const auto& a : f.args()) {
                VarSet vs;
                collect_vars(a, vs);
                for (const auto& v : vs)
                    if (!bound.count(v)) out.insert(v);
            }
            return;
        case Formula::Kind::Not:
            free_rec(f.body(), bound, out);
            return;
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            bool added = bound.insert(f.var()).second;
            free_rec(f.body(), bound, out);
            if (added) bound.erase(f.var());
            return;
        }
        default:
            free_rec(f.lhs(), bound, out);
            free_rec(f.rhs(), bound, out);
    }
}

void all_rec(const Formula& f, VarSet& out, bool include_free, bool include_binders) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
            if (include_free)
                for (const auto& a : f.args()) collect_vars(a, out);
            return;
        case Formula::Kind::Not:
            all_rec(f.body(), out, include_free, include_binders);
            return;
        case Formula::Kind::Forall:
        case Formula::Kind::Exists:
            if (include_binders) out.insert(f.var());
            all_rec(f.body(), out, include_free, include_binders);
            return;
        default:
            all_rec(f.lhs(), out, include_free, include_binders);
            all_rec(f.rhs(), out, include_free, include_binders);
    }
}

}  // namespace

VarSet free_vars(const Formula& f) {
    VarSet bound, out;
    free_rec(f, bound, out);
    return out;
}

VarSet bound_vars(const Formula& f) {
    VarSet out;
    all_rec(f, out, false, true);
    return out;
}

VarSet all_vars(const Formula& f) {
    VarSet out;
    all_rec(f, out, true, true);
    return out;
}

bool is_closed(const Formula& f) { return free_vars(f).empty(); }

bool occurs_free(const std::string& v, const Formula& f) { return free_vars(f).count(v) != 0; }

std::string fresh_name(const std::string& base, const VarSet& avoid) {
    for (std::size_t n = 1;; ++n) {
        std::string cand = base + std::to_string(n);
        if (!avoid.count(cand)) return cand;
    }
}

Term substitute(const Term& t, const Bindings& b) {
    if (t.is_var()) {
        auto it = b.find(t.name());
        return it == b.end() ? t : it->second;
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(substitute(a, b));
        changed = changed || args.back() != a;
    }
    return changed ? Term::app(t.name(), std::move(args)) : t;
}

Formula substitute(const Formula& f, const Bindings& b) {
    if (b.empty()) return f;
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            std::vector<Term> args;
            for (const auto& a : f.args()) args.push_back(substitute(a, b));
            return Formula::atom(f.pred(), std::move(args));
        }
        case Formula::Kind::Not:
            return Formula::negation(substitute(f.body(), b));
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            // Keep only bindings that can reach a free occurrence below this binder.
            VarSet body_free = free_vars(f.body());
            Bindings inner;
            for (const auto& [k, t] : b)
                if (k != f.var() && body_free.count(k)) inner.emplace(k, t);
            if (inner.empty()) return f;
            VarSet range;
            for (const auto& [k, t] : inner) collect_vars(t, range);
            std::string v = f.var();
            Formula body = f.body();
            if (range.count(v)) {
                VarSet avoid = all_vars(body);
                avoid.insert(range.begin(), range.end());
                for (const auto& [k, t] : inner) avoid.insert(k);
                std::string nv = fresh_name(v, avoid);
                body = substitute(body, Bindings{{v, Term::var(nv)}});
                v = nv;
            }
            return Formula::quant(f.kind(), v, substitute(body, inner));
        }
        default:
            return Formula::binary(f.kind(), substitute(f.lhs(), b), substitute(f.rhs(), b));
    }
}

namespace {

// Binders become "_<depth>"; identifiers cannot start with '_', so no clash with free names.
Formula alpha_rec(const Formula& f, std::map<std::string, std::string>& env, std::size_t depth) {
    switch (f.kind()) {
        case Formula::Kind::Atom: {
            if (env.empty()) return f;
            Bindings b;
            for (const auto& [from, to] : env) b.emplace(from, Term::var(to));
            std::vector<Term> args;
            for (const auto& a : f.args()) args.push_back(substitute(a, b));
            return Formula::atom(f.pred(), std::move(args));
        }
        case Formula::Kind::Not:
            return Formula::negation(alpha_rec(f.body(), env, depth));
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            std::string name = "_" + std::to_string(depth);
            auto prev = env.find(f.var());
            std::optional<std::string> saved;
            if (prev != env.end()) saved = prev->second;
            env[f.var()] = name;
            Formula body = alpha_rec(f.body(), env, depth + 1);
            if (saved)
                env[f.var()] = *saved;
            else
                env.erase(f.var());
            return Formula::quant(f.kind(), name, body);
        }
        default:
            return Formula::binary(f.kind(), alpha_rec(f.lhs(), env, depth),
                                   alpha_rec(f.rhs(), env, depth));
    }
}

}  // namespace

Formula alpha_normalize(const Formula& f) {
    std::map<std::string, std::string> env;
    return alpha_rec(f, env, 0);
}

bool alpha_eq(const Formula& f, const Formula& g) {
    if (f == g) return true;
    return alpha_normalize(f) == alpha_normalize(g);
}

Formula negated_quantifier_view(const Formula& f) {
    if (!f.is(Formula::Kind::Not)) return f;
    const Formula& q = f.body();
    if (q.is(Formula::Kind::Exists)) return Formula::forall(q.var(), Formula::negation(q.body()));
    if (q.is(Formula::Kind::Forall)) return Formula::exists(q.var(), Formula::negation(q.body()));
    return f;
}

}  // namespace ogeo

#include "ogeo/kernel.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "ogeo/normal_form.hpp"
#include "ogeo/syntax.hpp"

namespace ogeo {

namespace {

struct RuleSpelling {
    Rule rule;
    std::string_view name;
};

constexpr std::array<RuleSpelling, 20> kRules{{
    {Rule::Premise, "PREMISE"},
    {Rule::AssumedPremise, "ASSUMED-PREMISE"},
    {Rule::MP, "MP"},
    {Rule::MT, "MT"},
    {Rule::IMP, "IMP"},
    {Rule::LDS, "LDS"},
    {Rule::RDS, "RDS"},
    {Rule::CP, "CP"},
    {Rule::SIMP, "SIMP"},
    {Rule::Case1, "CASE1"},
    {Rule::Case2, "CASE2"},
    {Rule::Cases, "CASES"},
    {Rule::DeMorgan, "DE.MORGAN"},
    {Rule::DistributiveLaw, "DISTRIBUTIVE-LAW"},
    {Rule::Same, "SAME"},
    {Rule::US, "US"},
    {Rule::UG, "UG"},
    {Rule::EG, "EG"},
    {Rule::EE, "EE"},
    {Rule::SUB, "SUB"},
}};

// Drops separators so ASSUMED_PREMISE, DE_MORGAN, DISTRIBUTIVE-LAW etc. compare equal.
std::string squash(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '-' || c == '_' || c == '.') continue;
        out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

}  // namespace

std::string_view rule_name(Rule r) {
    for (const auto& s : kRules)
        if (s.rule == r) return s.name;
    return "?";
}

std::optional<Rule> rule_from_name(std::string_view s) {
    std::string key = squash(s);
    if (key.empty()) return std::nullopt;
    for (const auto& r : kRules)
        if (squash(r.name) == key) return r.rule;
    return std::nullopt;
}

std::string_view failure_kind_name(FailureKind k) {
    switch (k) {
        case FailureKind::Rule: return "rule";
        case FailureKind::Scope: return "scope";
        case FailureKind::Structure: return "structure";
    }
    return "?";
}

std::string CheckReport::sequent() const {
    std::string s;
    for (std::size_t i = 0; i < premises.size(); ++i) {
        if (i) s += ", ";
        s += print_formula(premises[i]);
    }
    s += s.empty() ? "|- " : " |- ";
    if (conclusion) s += print_formula(*conclusion);
    return s;
}

// ---------------------------------------------------------------------------
// Matching

namespace {

struct MatchState {
    const VarSet& vars;
    Bindings& out;
    std::map<std::string, std::string> env;  // pattern binder -> target binder
    std::map<std::string, int> target_bound;
    std::map<std::string, int> shadowed;     // bindable names hidden by a pattern binder
};

bool term_has_bound(const Term& t, const MatchState& st) {
    if (t.is_var()) {
        auto it = st.target_bound.find(t.name());
        return it != st.target_bound.end() && it->second > 0;
    }
    for (const auto& a : t.args())
        if (term_has_bound(a, st)) return true;
    return false;
}

bool match_term(const Term& p, const Term& t, MatchState& st) {
    if (p.is_var()) {
        auto e = st.env.find(p.name());
        if (e != st.env.end()) return t.is_var() && t.name() == e->second;
        auto sh = st.shadowed.find(p.name());
        bool hidden = sh != st.shadowed.end() && sh->second > 0;
        if (st.vars.count(p.name()) && !hidden) {
            if (term_has_bound(t, st)) return false;
            auto it = st.out.find(p.name());
            if (it != st.out.end()) return it->second == t;
            st.out.emplace(p.name(), t);
            return true;
        }
        return t.is_var() && t.name() == p.name() && !term_has_bound(t, st);
    }
    if (t.is_var() || t.name() != p.name() || t.args().size() != p.args().size()) return false;
    for (std::size_t i = 0; i < p.args().size(); ++i)
        if (!match_term(p.args()[i], t.args()[i], st)) return false;
    return true;
}

bool match_rec(const Formula& p, const Formula& t, MatchState& st) {
    if (p.kind() != t.kind()) return false;
    switch (p.kind()) {
        case Formula::Kind::Atom:
            if (p.pred() != t.pred() || p.args().size() != t.args().size()) return false;
            for (std::size_t i = 0; i < p.args().size(); ++i)
                if (!match_term(p.args()[i], t.args()[i], st)) return false;
            return true;
        case Formula::Kind::Not:
            return match_rec(p.body(), t.body(), st);
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            std::optional<std::string> saved;
            if (auto it = st.env.find(p.var()); it != st.env.end()) saved = it->second;
            st.env[p.var()] = t.var();
            ++st.target_bound[t.var()];
            ++st.shadowed[p.var()];
            bool ok = match_rec(p.body(), t.body(), st);
            --st.shadowed[p.var()];
            --st.target_bound[t.var()];
            if (saved)
                st.env[p.var()] = *saved;
            else
                st.env.erase(p.var());
            return ok;
        }
        default:
            return match_rec(p.lhs(), t.lhs(), st) && match_rec(p.rhs(), t.rhs(), st);
    }
}

std::string show(const Formula& f) { return print_formula(f); }

Verdict mismatch(Rule r, const std::string& what, const Formula& expected, const Formula& found) {
    return Verdict::fail(FailureKind::Rule, std::string(rule_name(r)) + ": " + what + "; expected `" +
                                                show(expected) + "`, found `" + show(found) + "`");
}

Verdict rule_error(Rule r, const std::string& what) {
    return Verdict::fail(FailureKind::Rule, std::string(rule_name(r)) + ": " + what);
}

Verdict structure_error(const std::string& what) {
    return Verdict::fail(FailureKind::Structure, what);
}

// Nodes of the &-tree rooted at f (including f itself).
void and_nodes(const Formula& f, std::vector<Formula>& out) {
    out.push_back(f);
    if (f.is(Formula::Kind::And)) {
        and_nodes(f.lhs(), out);
        and_nodes(f.rhs(), out);
    }
}

std::size_t expected_cites(Rule r) {
    switch (r) {
        case Rule::Premise:
        case Rule::AssumedPremise:
            return 0;
        case Rule::MP:
        case Rule::MT:
        case Rule::LDS:
        case Rule::RDS:
            return 2;
        case Rule::Cases:
            return 3;  // two when closing an EE branch
        default:
            return 1;
    }
}

bool takes_annotations(Rule r) {
    return r == Rule::US || r == Rule::UG || r == Rule::EG || r == Rule::EE || r == Rule::SUB;
}

}  // namespace

bool match_formula(const Formula& pattern, const Formula& target, const VarSet& vars, Bindings& out) {
    Bindings tmp = out;
    MatchState st{vars, tmp, {}, {}, {}};
    if (!match_rec(pattern, target, st)) return false;
    out = std::move(tmp);
    return true;
}

// ---------------------------------------------------------------------------
// Checker

Checker::Checker(std::vector<Formula> declared_premises) : declared_(std::move(declared_premises)) {}

const std::set<int>& Checker::deps(int number) const { return entries_.at(number - 1).deps; }

bool Checker::accessible(const Entry& e) const {
    return std::all_of(e.path.begin(), e.path.end(), [&](int id) { return open_ids_.count(id) != 0; });
}

VarSet Checker::restricted_vars() const {
    VarSet out;
    for (const auto& p : declared_) {
        auto fv = free_vars(p);
        out.insert(fv.begin(), fv.end());
    }
    for (const auto& p : premise_lines_) {
        auto fv = free_vars(p);
        out.insert(fv.begin(), fv.end());
    }
    for (const auto& fr : frames_) {
        auto fv = free_vars(fr.formula);
        out.insert(fv.begin(), fv.end());
    }
    return out;
}

void Checker::push_frame(Frame f) {
    open_ids_.insert(f.id);
    frames_.push_back(std::move(f));
}

void Checker::pop_frame() {
    open_ids_.erase(frames_.back().id);
    frames_.pop_back();
}

Verdict Checker::cite(const ProofLine& line, std::size_t i, const Entry*& out) const {
    int n = line.just.cited[i];
    if (n < 1 || n >= line.number)
        return structure_error("line " + std::to_string(line.number) + " cites line " + std::to_string(n) +
                               ", which does not precede it");
    const Entry& e = entries_[static_cast<std::size_t>(n - 1)];
    if (!accessible(e))
        return Verdict::fail(FailureKind::Scope, std::string(rule_name(line.just.rule)) + ": line " +
                                                     std::to_string(n) + " lies inside a closed subproof");
    out = &e;
    return Verdict::pass();
}

Verdict Checker::add(const ProofLine& line) {
    if (line.number != static_cast<int>(entries_.size()) + 1)
        return structure_error("expected line number " + std::to_string(entries_.size() + 1) + ", found " +
                               std::to_string(line.number));
    std::set<int> deps;
    Verdict v = check(line, deps);
    if (!v.ok) return v;
    // A line lives in the frames open after it: openers inside their own frame,
    // discharging lines outside the frames they close.
    std::vector<int> path;
    for (const auto& fr : frames_) path.push_back(fr.id);
    entries_.push_back({line.formula, std::move(path), std::move(deps)});
    return v;
}

Verdict Checker::finish(const std::optional<Formula>& show_formula) const {
    if (entries_.empty()) return structure_error("proof has no lines");
    if (!frames_.empty()) {
        const Frame& fr = frames_.back();
        return structure_error("assumption at line " + std::to_string(fr.line) + " is never discharged");
    }
    if (show_formula && !equivalent(*show_formula, entries_.back().formula))
        return structure_error("final line `" + show(entries_.back().formula) + "` does not match SHOW `" +
                               show(*show_formula) + "`");
    return Verdict::pass();
}

Verdict Checker::check(const ProofLine& line, std::set<int>& deps) {
    const Rule r = line.just.rule;
    const Formula& f = line.formula;
    const auto& cited = line.just.cited;

    std::size_t want = expected_cites(r);
    bool cites_ok = cited.size() == want || (r == Rule::Cases && cited.size() == 2);
    if (!cites_ok)
        return structure_error(std::string(rule_name(r)) + " expects " + std::to_string(want) +
                               " cited line(s), found " + std::to_string(cited.size()));
    if (!line.just.annots.empty() && !takes_annotations(r))
        return structure_error(std::string(rule_name(r)) + " takes no annotation");

    std::vector<const Entry*> src(cited.size(), nullptr);
    for (std::size_t i = 0; i < cited.size(); ++i) {
        Verdict v = cite(line, i, src[i]);
        if (!v.ok) return v;
    }
    auto union_deps = [&] {
        for (const auto* e : src) deps.insert(e->deps.begin(), e->deps.end());
    };

    switch (r) {
        case Rule::Premise: {
            if (!declared_.empty() &&
                std::none_of(declared_.begin(), declared_.end(),
                             [&](const Formula& p) { return equivalent(p, f); }))
                return rule_error(r, "`" + show(f) + "` is not a declared premise");
            premise_lines_.push_back(f);
            return Verdict::pass();
        }
        case Rule::AssumedPremise: {
            push_frame({next_frame_id_++, FrameKind::Assume, line.number, f, 0, -1, Rule::AssumedPremise, false, {}});
            deps.insert(line.number);
            return Verdict::pass();
        }
        case Rule::MP: {
            for (int order = 0; order < 2; ++order) {
                const Formula& imp = src[order]->formula;
                const Formula& arg = src[1 - order]->formula;
                if (!imp.is(Formula::Kind::Implies) || !equivalent(imp.lhs(), arg)) continue;
                if (!equivalent(imp.rhs(), f)) return mismatch(r, "consequent mismatch", imp.rhs(), f);
                union_deps();
                return Verdict::pass();
            }
            return rule_error(r, "antecedent mismatch");
        }
        case Rule::MT: {
            for (int order = 0; order < 2; ++order) {
                const Formula& imp = src[order]->formula;
                const Formula& other = src[1 - order]->formula;
                if (!imp.is(Formula::Kind::Implies) || !contradicts(imp.rhs(), other)) continue;
                Formula expected = Formula::negation(imp.lhs());
                if (!equivalent(expected, f)) return mismatch(r, "result mismatch", expected, f);
                union_deps();
                return Verdict::pass();
            }
            return rule_error(r, "no cited line contradicts the consequent of the other");
        }
        case Rule::IMP: {
            const Formula& g = src[0]->formula;
            if (!g.is(Formula::Kind::Implies)) return rule_error(r, "cited line is not an implication");
            std::vector<Formula> parts;
            for (const auto& a : flatten(g.lhs(), Formula::Kind::And)) parts.push_back(neg(a));
            parts.push_back(g.rhs());
            Formula expected = build_right(Formula::Kind::Or, parts);
            Formula single = Formula::disj(neg(g.lhs()), g.rhs());
            if (!equivalent(expected, f) && !equivalent(single, f))
                return mismatch(r, "mismatch", expected, f);
            union_deps();
            return Verdict::pass();
        }
        case Rule::LDS:
        case Rule::RDS: {
            const bool left = r == Rule::LDS;
            for (int order = 0; order < 2; ++order) {
                const Formula& d = src[order]->formula;
                const Formula& x = src[1 - order]->formula;
                if (!d.is(Formula::Kind::Or)) continue;
                const Formula& cancelled = left ? d.lhs() : d.rhs();
                const Formula& kept = left ? d.rhs() : d.lhs();
                if (!contradicts(cancelled, x)) continue;
                if (!equivalent(kept, f)) return mismatch(r, "mismatch", kept, f);
                union_deps();
                return Verdict::pass();
            }
            return rule_error(r, std::string("no cited disjunction whose ") + (left ? "left" : "right") +
                                     " disjunct contradicts the other cited line");
        }
        case Rule::CP: {
            if (!f.is(Formula::Kind::Implies)) return rule_error(r, "result is not an implication");
            const Formula& b = src[0]->formula;
            if (!equivalent(f.rhs(), b)) return mismatch(r, "consequent mismatch", b, f.rhs());
            deps = src[0]->deps;
            if (!frames_.empty() && frames_.back().kind == FrameKind::Assume &&
                equivalent(frames_.back().formula, f.lhs())) {
                deps.erase(frames_.back().line);
                pop_frame();
            }
            // Otherwise a weakening B |- A -> B that discharges nothing.
            return Verdict::pass();
        }
        case Rule::SIMP: {
            std::vector<Formula> nodes;
            and_nodes(src[0]->formula, nodes);
            if (!src[0]->formula.is(Formula::Kind::And))
                return rule_error(r, "cited line is not a conjunction");
            bool found = std::any_of(nodes.begin() + 1, nodes.end(),
                                     [&](const Formula& n) { return equivalent(n, f); });
            if (!found) return rule_error(r, "`" + show(f) + "` is not a conjunct of line " +
                                                 std::to_string(cited[0]));
            union_deps();
            return Verdict::pass();
        }
        case Rule::Case1:
        case Rule::Case2:
            return rule_case(line, deps);
        case Rule::Cases:
            return rule_cases(line, deps);
        case Rule::DeMorgan: {
            const Formula& g = src[0]->formula;
            if (!g.is(Formula::Kind::Not) ||
                !(g.body().is(Formula::Kind::And) || g.body().is(Formula::Kind::Or)))
                return rule_error(r, "cited line is not a negated conjunction or disjunction");
            const Formula& in = g.body();
            Formula expected = Formula::binary(in.is(Formula::Kind::And) ? Formula::Kind::Or : Formula::Kind::And,
                                               neg(in.lhs()), neg(in.rhs()));
            if (!equivalent(expected, f)) return mismatch(r, "mismatch", expected, f);
            union_deps();
            return Verdict::pass();
        }
        case Rule::DistributiveLaw: {
            const Formula& g = src[0]->formula;
            if (!g.is(Formula::Kind::Or)) return rule_error(r, "cited line is not a disjunction");
            std::optional<Formula> first;
            if (g.lhs().is(Formula::Kind::And)) {
                const Formula& a = g.lhs();
                Formula e = Formula::conj(Formula::disj(a.lhs(), g.rhs()), Formula::disj(a.rhs(), g.rhs()));
                if (equivalent(e, f)) {
                    union_deps();
                    return Verdict::pass();
                }
                first = e;
            }
            if (g.rhs().is(Formula::Kind::And)) {
                const Formula& a = g.rhs();
                Formula e = Formula::conj(Formula::disj(g.lhs(), a.lhs()), Formula::disj(g.lhs(), a.rhs()));
                if (equivalent(e, f)) {
                    union_deps();
                    return Verdict::pass();
                }
                if (!first) first = e;
            }
            if (!first) return rule_error(r, "neither disjunct is a conjunction");
            return mismatch(r, "mismatch", *first, f);
        }
        case Rule::Same: {
            if (!equivalent(src[0]->formula, f)) return mismatch(r, "mismatch", src[0]->formula, f);
            union_deps();
            return Verdict::pass();
        }
        case Rule::US: {
            Formula g = negated_quantifier_view(src[0]->formula);
            if (!g.is(Formula::Kind::Forall)) return rule_error(r, "cited line is not universally quantified");
            if (line.just.annots.size() > 1) return rule_error(r, "expects one (term var) annotation");
            Term t = Term::var(g.var());
            if (!line.just.annots.empty()) {
                const auto& an = line.just.annots[0];
                if (an.var != g.var())
                    return rule_error(r, "annotation names `" + an.var + "` but the bound variable is `" +
                                             g.var() + "`");
                t = an.term;
            } else {
                Bindings b;
                if (!match_formula(g.body(), f, {g.var()}, b))
                    return rule_error(r, "`" + show(f) + "` is not an instance of `" + show(g) + "`");
                if (auto it = b.find(g.var()); it != b.end()) t = it->second;
            }
            Formula expected = substitute(g.body(), Bindings{{g.var(), t}});
            if (!equivalent(expected, f)) return mismatch(r, "mismatch", expected, f);
            union_deps();
            return Verdict::pass();
        }
        case Rule::UG: {
            Verdict v = rule_ug(line, *src[0]);
            if (v.ok) union_deps();
            return v;
        }
        case Rule::EG: {
            const Formula& p = src[0]->formula;
            auto instance_ok = [&](const Formula& ex, const Formula& inst) {
                if (!ex.is(Formula::Kind::Exists)) return false;
                Term t = Term::var(ex.var());
                if (!line.just.annots.empty()) {
                    if (line.just.annots.size() != 1 || line.just.annots[0].var != ex.var()) return false;
                    t = line.just.annots[0].term;
                } else {
                    Bindings b;
                    if (!match_formula(ex.body(), inst, {ex.var()}, b)) return false;
                    if (auto it = b.find(ex.var()); it != b.end()) t = it->second;
                }
                return equivalent(substitute(ex.body(), Bindings{{ex.var(), t}}), inst);
            };
            if (instance_ok(f, p)) {
                union_deps();
                return Verdict::pass();
            }
            auto ps = flatten(p, Formula::Kind::Or);
            auto fs = flatten(f, Formula::Kind::Or);
            if (ps.size() >= 2 && ps.size() == fs.size()) {
                int differing = -1;
                for (std::size_t i = 0; i < ps.size(); ++i) {
                    if (ps[i] == fs[i]) continue;
                    if (differing >= 0) {
                        differing = -2;
                        break;
                    }
                    differing = static_cast<int>(i);
                }
                if (differing >= 0 && instance_ok(fs[differing], ps[differing])) {
                    union_deps();
                    return Verdict::pass();
                }
            }
            return rule_error(r, "`" + show(f) + "` does not existentially generalize `" + show(p) + "`");
        }
        case Rule::EE:
            return rule_ee(line, *src[0], deps);
        case Rule::SUB: {
            const Formula& p = src[0]->formula;
            Bindings b;
            if (!line.just.annots.empty()) {
                for (const auto& an : line.just.annots) {
                    if (b.count(an.var)) return rule_error(r, "variable `" + an.var + "` bound twice");
                    b.emplace(an.var, an.term);
                }
            } else if (!match_formula(p, f, free_vars(p), b)) {
                return rule_error(r, "`" + show(f) + "` is not a substitution instance of `" + show(p) + "`");
            }
            VarSet restricted = restricted_vars();
            for (auto it = b.begin(); it != b.end();) {
                if (it->second.is_var() && it->second.name() == it->first) {
                    it = b.erase(it);
                    continue;
                }
                if (restricted.count(it->first) && occurs_free(it->first, p))
                    return rule_error(r, "variable `" + it->first +
                                             "` is free in a premise or open assumption");
                ++it;
            }
            Formula expected = substitute(p, b);
            if (!equivalent(expected, f)) return mismatch(r, "mismatch", expected, f);
            union_deps();
            return Verdict::pass();
        }
    }
    return rule_error(r, "unsupported rule");
}

Verdict Checker::rule_case(const ProofLine& line, std::set<int>& deps) {
    const Rule r = line.just.rule;
    int d = line.just.cited[0];
    const Formula& disj = entries_[d - 1].formula;
    if (!disj.is(Formula::Kind::Or)) return rule_error(r, "cited line is not a disjunction");
    bool matches[2] = {equivalent(disj.lhs(), line.formula), equivalent(disj.rhs(), line.formula)};
    if (!matches[0] && !matches[1])
        return rule_error(r, "`" + show(line.formula) + "` is not a disjunct of line " + std::to_string(d));

    bool second = false;
    int side = matches[0] ? 0 : 1;
    if (!frames_.empty()) {
        const Frame& top = frames_.back();
        if (top.kind == FrameKind::Case && top.source == d && !top.paired) {
            if (top.label == r) return rule_error(r, "both cases of line " + std::to_string(d) + " use the same label");
            side = 1 - top.side;
            if (!matches[side])
                return rule_error(r, "second case must assume the other disjunct of line " + std::to_string(d));
            second = true;
        }
    }
    Frame fr{next_frame_id_++, FrameKind::Case, line.number, line.formula, 0, -1, r, false, {}};
    fr.source = d;
    fr.side = side;
    fr.label = r;
    fr.paired = second;
    push_frame(std::move(fr));
    deps.insert(line.number);
    return Verdict::pass();
}

Verdict Checker::rule_cases(const ProofLine& line, std::set<int>& deps) {
    const Rule r = Rule::Cases;
    const auto& cited = line.just.cited;
    int d = cited[0];
    auto last_dependent = [&](int assumption) {
        for (int n = static_cast<int>(entries_.size()); n >= 1; --n)
            if (entries_[n - 1].deps.count(assumption)) return n;
        return 0;
    };

    if (cited.size() == 2) {
        if (frames_.empty() || frames_.back().kind != FrameKind::EE || frames_.back().source != d)
            return Verdict::fail(FailureKind::Scope,
                                 "CASES: no open EE branch for line " + std::to_string(d));
        const Frame& fr = frames_.back();
        int b = cited[1];
        const Entry& be = entries_[b - 1];
        int last = last_dependent(fr.line);
        if (be.deps.count(fr.line) && b != last)
            return rule_error(r, "line " + std::to_string(b) + " is not the final line of the branch opened at " +
                                     std::to_string(fr.line));
        if (b < fr.line) return rule_error(r, "line " + std::to_string(b) + " precedes the branch");
        if (!equivalent(be.formula, line.formula)) return mismatch(r, "mismatch", be.formula, line.formula);
        if (occurs_free(fr.eigen, line.formula))
            return rule_error(r, "eigenvariable `" + fr.eigen + "` escapes its branch");
        deps = entries_[d - 1].deps;
        for (int x : be.deps)
            if (x != fr.line) deps.insert(x);
        pop_frame();
        return Verdict::pass();
    }

    if (frames_.size() < 2)
        return Verdict::fail(FailureKind::Scope, "CASES: no open case pair for line " + std::to_string(d));
    const Frame& c2 = frames_[frames_.size() - 1];
    const Frame& c1 = frames_[frames_.size() - 2];
    if (c2.kind != FrameKind::Case || c1.kind != FrameKind::Case || !c2.paired || c1.source != d ||
        c2.source != d)
        return Verdict::fail(FailureKind::Scope,
                             "CASES: the innermost open subproofs are not the two cases of line " +
                                 std::to_string(d));

    const int b[2] = {cited[1], cited[2]};
    const int cs[2] = {c1.line, c2.line};
    // b[i] serves case cs[(i + shift) % 2].
    auto fits = [&](int bline, int own, int other) {
        const Entry& e = entries_[bline - 1];
        if (bline < own) return false;
        if (e.deps.count(other)) return false;
        if (e.deps.count(own) && bline != last_dependent(own)) return false;
        return true;
    };
    int shift = -1;
    for (int s = 0; s < 2 && shift < 0; ++s) {
        if (fits(b[0], cs[s], cs[1 - s]) && fits(b[1], cs[1 - s], cs[s])) shift = s;
    }
    if (shift < 0)
        return rule_error(r, "lines " + std::to_string(b[0]) + " and " + std::to_string(b[1]) +
                                 " are not the final lines of the two case branches");
    for (int bl : b) {
        if (!equivalent(entries_[bl - 1].formula, line.formula))
            return mismatch(r, "branch conclusion mismatch", entries_[bl - 1].formula, line.formula);
    }
    deps = entries_[d - 1].deps;
    for (int i = 0; i < 2; ++i) {
        int own = cs[(i + shift) % 2];
        for (int x : entries_[b[i] - 1].deps)
            if (x != own) deps.insert(x);
    }
    pop_frame();
    pop_frame();
    return Verdict::pass();
}

Verdict Checker::rule_ug(const ProofLine& line, const Entry& src) {
    const Rule r = Rule::UG;
    const Formula& p = src.formula;
    const Formula& f = line.formula;
    VarSet restricted = restricted_vars();
    VarSet result_free = free_vars(f);
    VarSet p_free = free_vars(p);

    // pairs: free variable of p -> bound variable of f
    auto verify = [&](const Formula& body,
                      const std::vector<std::pair<std::string, std::string>>& pairs) -> Verdict {
        Bindings b;
        VarSet used;
        for (const auto& [x, v] : pairs) {
            if (!used.insert(x).second) return rule_error(r, "variable `" + x + "` generalized twice");
            if (restricted.count(x))
                return rule_error(r, "variable `" + x + "` is free in a premise or open assumption");
            if (result_free.count(x)) return rule_error(r, "variable `" + x + "` remains free in the result");
            if (x != v && p_free.count(v))
                return rule_error(r, "bound variable `" + v + "` is already free in line");
            b.emplace(x, Term::var(v));
        }
        Formula expected = substitute(p, b);
        if (!equivalent(expected, body)) return mismatch(r, "mismatch", expected, body);
        return Verdict::pass();
    };

    std::vector<std::string> prefix;
    Formula cur = f;
    std::vector<Formula> bodies;
    while (cur.is(Formula::Kind::Forall)) {
        prefix.push_back(cur.var());
        cur = cur.body();
        bodies.push_back(cur);
    }
    if (prefix.empty()) return rule_error(r, "result is not universally quantified");

    if (!line.just.annots.empty()) {
        std::size_t k = line.just.annots.size();
        if (k > prefix.size()) return rule_error(r, "more annotations than quantifiers");
        std::vector<std::pair<std::string, std::string>> pairs;
        for (std::size_t i = 0; i < k; ++i) {
            const auto& an = line.just.annots[i];
            if (!an.term.is_var()) return rule_error(r, "annotation must name a variable");
            if (an.var != prefix[i])
                return rule_error(r, "annotation binds `" + an.var + "` but quantifier " + std::to_string(i + 1) +
                                         " binds `" + prefix[i] + "`");
            pairs.emplace_back(an.term.name(), an.var);
        }
        return verify(bodies[k - 1], pairs);
    }

    Verdict last = rule_error(r, "`" + show(f) + "` does not generalize `" + show(p) + "`");
    for (std::size_t k = prefix.size(); k >= 1; --k) {
        std::vector<std::string> binders(prefix.begin(), prefix.begin() + static_cast<long>(k));
        VarSet bs(binders.begin(), binders.end());
        if (bs.size() != binders.size()) continue;
        Bindings m;
        if (!match_formula(bodies[k - 1], p, bs, m)) continue;
        std::vector<std::pair<std::string, std::string>> pairs;
        bool vars_only = true;
        for (const auto& v : binders) {
            auto it = m.find(v);
            if (it == m.end()) continue;  // vacuous quantifier
            if (!it->second.is_var()) {
                vars_only = false;
                break;
            }
            pairs.emplace_back(it->second.name(), v);
        }
        if (!vars_only) continue;
        Verdict v = verify(bodies[k - 1], pairs);
        if (v.ok) return v;
        last = v;
    }
    return last;
}

Verdict Checker::rule_ee(const ProofLine& line, const Entry& src, std::set<int>& deps) {
    const Rule r = Rule::EE;
    Formula g = negated_quantifier_view(src.formula);
    if (!g.is(Formula::Kind::Exists)) return rule_error(r, "cited line is not existentially quantified");
    std::string eigen;
    if (!line.just.annots.empty()) {
        const auto& an = line.just.annots[0];
        if (line.just.annots.size() != 1 || an.var != g.var() || !an.term.is_var())
            return rule_error(r, "expects one (variable bound-var) annotation");
        eigen = an.term.name();
    } else {
        Bindings b;
        if (!match_formula(g.body(), line.formula, {g.var()}, b))
            return rule_error(r, "`" + show(line.formula) + "` is not an instance of `" + show(g) + "`");
        auto it = b.find(g.var());
        if (it != b.end()) {
            if (!it->second.is_var()) return rule_error(r, "witness must be a fresh variable");
            eigen = it->second.name();
        }
    }
    if (!eigen.empty()) {
        Formula expected = substitute(g.body(), Bindings{{g.var(), Term::var(eigen)}});
        if (!equivalent(expected, line.formula)) return mismatch(r, "mismatch", expected, line.formula);
        VarSet seen = restricted_vars();
        for (const auto& e : entries_) {
            auto fv = free_vars(e.formula);
            seen.insert(fv.begin(), fv.end());
        }
        if (seen.count(eigen)) return rule_error(r, "eigenvariable `" + eigen + "` is not fresh");
    } else if (!equivalent(g.body(), line.formula)) {
        return mismatch(r, "mismatch", g.body(), line.formula);
    }
    Frame fr{next_frame_id_++, FrameKind::EE, line.number, line.formula, 0, -1, r, false, {}};
    fr.source = line.just.cited[0];
    fr.eigen = eigen;
    push_frame(std::move(fr));
    deps.insert(line.number);
    return Verdict::pass();
}

// ---------------------------------------------------------------------------

Verdict check_line(const Proof& so_far, const ProofLine& line) {
    Checker c(so_far.premises);
    for (const auto& l : so_far.lines) {
        Verdict v = c.add(l);
        if (!v.ok)
            return Verdict::fail(v.kind, "earlier line " + std::to_string(l.number) + " fails: " + v.description);
    }
    return c.add(line);
}

CheckReport check_proof(const Proof& p) {
    CheckReport rep;
    Checker c(p.premises);
    for (const auto& l : p.lines) {
        Verdict v = c.add(l);
        if (!v.ok) {
            rep.failed_line = l.number;
            rep.kind = v.kind;
            rep.description = v.description;
            return rep;
        }
        rep.depths.push_back(c.last_depth());
    }
    Verdict v = c.finish(p.show);
    if (!v.ok) {
        rep.kind = v.kind;
        rep.description = v.description;
        return rep;
    }
    rep.valid = true;
    rep.premises = p.premises.empty() ? c.premises_used() : p.premises;
    rep.conclusion = p.lines.back().formula;
    return rep;
}

}  // namespace ogeo

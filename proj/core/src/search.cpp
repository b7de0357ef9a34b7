#include "ogeo/search.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>

#include "ogeo/normal_form.hpp"
#include "ogeo/syntax.hpp"

namespace ogeo {

std::string_view search_status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::Proved: return "proved";
        case SearchStatus::Exhausted: return "exhausted";
        case SearchStatus::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

// Removes double negations and moves negation through quantifiers; the kernel
// compares modulo both, so derived lines may be written in this form.
Formula tidy(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
            return f;
        case Formula::Kind::Not: {
            const Formula& b = f.body();
            if (b.is(Formula::Kind::Not)) return tidy(b.body());
            if (b.is(Formula::Kind::Exists)) return Formula::forall(b.var(), tidy(Formula::negation(b.body())));
            if (b.is(Formula::Kind::Forall)) return Formula::exists(b.var(), tidy(Formula::negation(b.body())));
            return Formula::negation(tidy(b));
        }
        case Formula::Kind::Forall:
        case Formula::Kind::Exists:
            return Formula::quant(f.kind(), f.var(), tidy(f.body()));
        default:
            return Formula::binary(f.kind(), tidy(f.lhs()), tidy(f.rhs()));
    }
}

bool is_literal(const Formula& f) {
    return f.is(Formula::Kind::Atom) || (f.is(Formula::Kind::Not) && f.body().is(Formula::Kind::Atom));
}

struct Fact {
    Formula f;
    std::string key;
    std::string neg_key;  // key of ~f
    Rule rule;
    std::vector<int> parents;
    std::vector<Annotation> annots;
    std::optional<Formula> reorder;  // first parent restated by SAME before the rule applies
};

struct Budget {
    Clock::time_point deadline;
    std::size_t max_facts;
    bool expired = false;    // time is up, stop everything
    bool truncated = false;  // some engine hit its fact limit
    std::uint64_t generated = 0;
    std::uint64_t instantiations = 0;

    bool out_of_time() {
        if (!expired && Clock::now() > deadline) expired = true;
        return expired;
    }
};

enum class Outcome { Found, Contradiction, Fixpoint, Cutoff };

class Engine {
public:
    Engine(int max_term_depth, bool plus_rev) : max_term_depth_(max_term_depth), plus_rev_(plus_rev) {}

    std::vector<Fact> facts;

    int add(const Formula& f, Rule r, std::vector<int> parents = {}, std::vector<Annotation> annots = {},
            std::optional<Formula> reorder = std::nullopt) {
        std::string key = canonical_key(f);
        if (by_key_.count(key)) return -1;
        int id = static_cast<int>(facts.size());
        facts.push_back({f, key, canonical_key(Formula::negation(f)), r, std::move(parents), std::move(annots),
                         std::move(reorder)});
        by_key_.emplace(facts.back().key, id);
        return id;
    }

    int find(const std::string& key) const {
        auto it = by_key_.find(key);
        return it == by_key_.end() ? -1 : it->second;
    }

    // Runs the given-clause loop until the target or a usable contradiction shows up.
    Outcome saturate(const std::string& target_key, bool contradiction_ok, Budget& budget, int& a, int& b) {
        std::size_t limit = facts.size() + budget.max_facts;
        for (;;) {
            if (int t = find(target_key); t >= 0) {
                a = t;
                return Outcome::Found;
            }
            if (contradiction_ok) {
                for (; contra_scan_ < facts.size(); ++contra_scan_) {
                    int other = find(facts[contra_scan_].neg_key);
                    if (other >= 0) {
                        a = static_cast<int>(contra_scan_);
                        b = other;
                        return Outcome::Contradiction;
                    }
                }
            }
            if (budget.out_of_time()) return Outcome::Cutoff;
            if (facts.size() >= limit) {
                budget.truncated = true;
                return Outcome::Cutoff;
            }
            if (processed_ < facts.size()) {
                std::size_t before = facts.size();
                process(static_cast<int>(processed_++), budget);
                budget.generated += facts.size() - before;
                continue;
            }
            return Outcome::Fixpoint;
        }
    }

    // Disjunctions worth a case split, most promising first.
    std::vector<int> split_candidates(std::size_t limit) const {
        std::vector<std::pair<std::size_t, int>> c;
        for (int id : disjunctions_) {
            const Formula& f = facts[id].f;
            auto parts = flatten(f, Formula::Kind::Or);
            if (std::all_of(parts.begin(), parts.end(), is_literal)) continue;
            std::string lk = canonical_key(f.lhs()), rk = canonical_key(f.rhs());
            if (find(lk) >= 0 || find(rk) >= 0) continue;
            c.emplace_back(parts.size(), id);
        }
        std::stable_sort(c.begin(), c.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<int> out;
        for (std::size_t i = 0; i < c.size() && i < limit; ++i) out.push_back(c[i].second);
        return out;
    }

    void seed_terms(const Formula& f) { absorb_terms(f); }

private:
    void process(int id, Budget& budget) {
        const Formula f = facts[id].f;
        absorb_terms(f);

        Formula view = negated_quantifier_view(f);
        if (view.is(Formula::Kind::Forall)) {
            universals_.push_back({id, 0});
        }
        switch (f.kind()) {
            case Formula::Kind::And:
                for (const auto& part : flatten(f, Formula::Kind::And)) add(tidy(part), Rule::SIMP, {id});
                break;
            case Formula::Kind::Not:
                if (f.body().is(Formula::Kind::And) || f.body().is(Formula::Kind::Or)) {
                    const Formula& in = f.body();
                    auto k = in.is(Formula::Kind::And) ? Formula::Kind::Or : Formula::Kind::And;
                    add(tidy(Formula::binary(k, neg(in.lhs()), neg(in.rhs()))), Rule::DeMorgan, {id});
                }
                break;
            case Formula::Kind::Implies: {
                std::string ak = canonical_key(f.lhs());
                if (int a = find(ak); a >= 0) add(tidy(f.rhs()), Rule::MP, {id, a});
                imps_by_ante_[ak].push_back(id);
                std::vector<Formula> parts;
                for (const auto& x : flatten(f.lhs(), Formula::Kind::And)) parts.push_back(neg(x));
                parts.push_back(f.rhs());
                add(tidy(build_right(Formula::Kind::Or, parts)), Rule::IMP, {id});
                break;
            }
            case Formula::Kind::Or:
                process_clause(id);
                break;
            default:
                break;
        }
        // Facts that fire waiting implications and clauses.
        if (auto it = imps_by_ante_.find(facts[id].key); it != imps_by_ante_.end()) {
            auto imps = it->second;
            for (int imp : imps)
                if (imp != id) add(tidy(facts[imp].f.rhs()), Rule::MP, {imp, id});
        }
        if (auto it = clauses_by_comp_.find(facts[id].key); it != clauses_by_comp_.end()) {
            auto clauses = it->second;
            for (int c : clauses)
                if (c != id) resolve(c, id);
        }
        instantiate_pending(budget);
    }

    void process_clause(int id) {
        const Formula f = facts[id].f;  // add() may reallocate facts
        disjunctions_.push_back(id);
        auto parts = flatten(f, Formula::Kind::Or);
        for (std::size_t i = 0; i < parts.size(); ++i) {
            std::string ck = canonical_key(Formula::negation(parts[i]));
            clauses_by_comp_[ck].push_back(id);
            if (int x = find(ck); x >= 0) resolve(id, x);
        }
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (!parts[i].is(Formula::Kind::And)) continue;
            const Formula& a = parts[i];
            if (i == 0 && f.lhs() == a) {
                add(tidy(Formula::conj(Formula::disj(a.lhs(), f.rhs()), Formula::disj(a.rhs(), f.rhs()))),
                    Rule::DistributiveLaw, {id});
            } else if (i + 1 == parts.size() && f.rhs() == a) {
                add(tidy(Formula::conj(Formula::disj(f.lhs(), a.lhs()), Formula::disj(f.lhs(), a.rhs()))),
                    Rule::DistributiveLaw, {id});
            } else {
                std::vector<Formula> rest;
                for (std::size_t j = 0; j < parts.size(); ++j)
                    if (j != i) rest.push_back(parts[j]);
                Formula r = build_right(Formula::Kind::Or, rest);
                add(tidy(Formula::conj(Formula::disj(a.lhs(), r), Formula::disj(a.rhs(), r))),
                    Rule::DistributiveLaw, {id}, {}, Formula::disj(a, r));
            }
        }
    }

    // Cancels the disjunct of clause `c` that contradicts fact `x`.
    void resolve(int c, int x) {
        const Formula f = facts[c].f;
        auto parts = flatten(f, Formula::Kind::Or);
        const std::string xk = facts[x].key;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (canonical_key(Formula::negation(parts[i])) != xk) continue;
            std::vector<Formula> rest;
            for (std::size_t j = 0; j < parts.size(); ++j)
                if (j != i) rest.push_back(parts[j]);
            if (rest.empty()) return;
            if (i == 0 && f.lhs() == parts[0]) {
                add(tidy(f.rhs()), Rule::LDS, {c, x});
            } else if (i + 1 == parts.size() && f.rhs() == parts[i]) {
                add(tidy(f.lhs()), Rule::RDS, {c, x});
            } else {
                Formula r = build_right(Formula::Kind::Or, rest);
                add(tidy(r), Rule::LDS, {c, x}, {}, Formula::disj(parts[i], r));
            }
            return;
        }
    }

    void absorb_term(const Term& t) {
        if (static_cast<int>(t.depth()) > max_term_depth_) return;
        for (const auto& a : t.args()) absorb_term(a);
        std::string k = print_term(t);
        if (!pool_keys_.insert(k).second) return;
        pool_.push_back(t);
        if (plus_rev_) absorb_term(Term::app("rev", {t}));
    }

    void absorb_terms_rec(const Formula& f, VarSet& bound) {
        switch (f.kind()) {
            case Formula::Kind::Atom:
                for (const auto& a : f.args()) {
                    VarSet vs = term_vars(a);
                    bool closed = std::none_of(vs.begin(), vs.end(), [&](const auto& v) { return bound.count(v); });
                    if (closed) absorb_term(a);
                }
                return;
            case Formula::Kind::Not:
                absorb_terms_rec(f.body(), bound);
                return;
            case Formula::Kind::Forall:
            case Formula::Kind::Exists: {
                bool added = bound.insert(f.var()).second;
                absorb_terms_rec(f.body(), bound);
                if (added) bound.erase(f.var());
                return;
            }
            default:
                absorb_terms_rec(f.lhs(), bound);
                absorb_terms_rec(f.rhs(), bound);
        }
    }

    void absorb_terms(const Formula& f) {
        VarSet bound;
        absorb_terms_rec(f, bound);
    }

    void instantiate_pending(Budget& budget) {
        for (auto& [id, done] : universals_) {
            Formula view = negated_quantifier_view(facts[id].f);
            for (; done < pool_.size(); ++done) {
                const Term& t = pool_[done];
                Formula inst = tidy(substitute(view.body(), Bindings{{view.var(), t}}));
                ++budget.instantiations;
                add(inst, Rule::US, {id}, {Annotation{t, view.var()}});
            }
        }
    }

    int max_term_depth_;
    bool plus_rev_;
    std::size_t processed_ = 0;
    std::size_t contra_scan_ = 0;
    std::unordered_map<std::string, int> by_key_;
    std::unordered_map<std::string, std::vector<int>> imps_by_ante_;
    std::unordered_map<std::string, std::vector<int>> clauses_by_comp_;
    std::vector<int> disjunctions_;
    std::vector<std::pair<int, std::size_t>> universals_;
    std::vector<Term> pool_;
    std::set<std::string> pool_keys_;
};

// How the target is reached inside one engine (and its case branches).
struct Plan {
    enum class Kind { Fact, Contradiction, Split } kind = Kind::Fact;
    std::shared_ptr<Engine> eng;
    int base = 0;  // first fact id owned by this level
    int a = -1, b = -1;
    int clause = -1;
    std::unique_ptr<Plan> left, right;
};

struct SearchContext {
    const SearchConfig& cfg;
    Budget& budget;
    std::size_t split_limit = 6;
};

std::unique_ptr<Plan> solve(std::shared_ptr<Engine> eng, int base, const Formula& target,
                            const std::optional<Formula>& top_assumption, int splits, SearchContext& ctx) {
    const std::string tk = canonical_key(target);
    bool contra_ok = !top_assumption || !equivalent(*top_assumption, neg(target));
    int a = -1, b = -1;
    Outcome o = eng->saturate(tk, contra_ok, ctx.budget, a, b);
    if (o == Outcome::Found || o == Outcome::Contradiction) {
        auto p = std::make_unique<Plan>();
        p->kind = o == Outcome::Found ? Plan::Kind::Fact : Plan::Kind::Contradiction;
        p->eng = eng;
        p->base = base;
        p->a = a;
        p->b = b;
        return p;
    }
    if (o == Outcome::Cutoff || splits <= 0) return nullptr;
    for (int c : eng->split_candidates(ctx.split_limit)) {
        const Formula d = eng->facts[c].f;
        std::unique_ptr<Plan> branch[2];
        for (int side = 0; side < 2; ++side) {
            auto child = std::make_shared<Engine>(*eng);
            int child_base = static_cast<int>(child->facts.size());
            const Formula& assumed = side == 0 ? d.lhs() : d.rhs();
            int id = child->add(assumed, side == 0 ? Rule::Case1 : Rule::Case2, {c});
            if (id < 0) break;
            // Case frames never match an ex falso antecedent, so contradictions are usable.
            branch[side] = solve(child, child_base, target, std::nullopt, splits - 1, ctx);
            if (!branch[side] || ctx.budget.expired) break;
        }
        if (branch[0] && branch[1]) {
            auto p = std::make_unique<Plan>();
            p->kind = Plan::Kind::Split;
            p->eng = eng;
            p->base = base;
            p->clause = c;
            p->left = std::move(branch[0]);
            p->right = std::move(branch[1]);
            return p;
        }
        if (ctx.budget.expired) return nullptr;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// Emission

class Emitter {
public:
    std::vector<ProofLine> lines;

    int emit(const Formula& f, Rule r, std::vector<int> cited = {}, std::vector<Annotation> annots = {}) {
        int n = static_cast<int>(lines.size()) + 1;
        lines.push_back(ProofLine{n, f, Justification{r, std::move(cited), std::move(annots)}, 0});
        return n;
    }
};

using LineMap = std::map<int, int>;

void ancestors(const Engine& e, int id, std::set<int>& out) {
    std::vector<int> stack{id};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (!out.insert(x).second) continue;
        for (int p : e.facts[x].parents) stack.push_back(p);
    }
}

// Fact ids (in plan.eng numbering) the plan needs, including inherited ones below plan.base.
std::set<int> needed(const Plan& p) {
    std::set<int> out;
    switch (p.kind) {
        case Plan::Kind::Fact:
            ancestors(*p.eng, p.a, out);
            break;
        case Plan::Kind::Contradiction:
            ancestors(*p.eng, p.a, out);
            ancestors(*p.eng, p.b, out);
            break;
        case Plan::Kind::Split: {
            ancestors(*p.eng, p.clause, out);
            for (const Plan* child : {p.left.get(), p.right.get()}) {
                for (int x : needed(*child))
                    if (x < child->base) ancestors(*p.eng, x, out);
            }
            break;
        }
    }
    return out;
}

void emit_fact(const Engine& e, int id, Emitter& em, LineMap& map) {
    const Fact& f = e.facts[id];
    std::vector<int> cited;
    for (int p : f.parents) cited.push_back(map.at(p));
    if (f.reorder) cited[0] = em.emit(*f.reorder, Rule::Same, {cited[0]});
    map[id] = em.emit(f.f, f.rule, cited, f.annots);
}

// Emits the plan's own lines; returns the line stating the target.
int emit_plan(const Plan& p, const Formula& target, Emitter& em, LineMap map) {
    for (int id : needed(p)) {
        if (id < p.base || map.count(id)) continue;
        emit_fact(*p.eng, id, em, map);
    }
    switch (p.kind) {
        case Plan::Kind::Fact:
            return map.at(p.a);
        case Plan::Kind::Contradiction: {
            const Formula& y = p.eng->facts[p.a].f;
            int l1 = em.emit(Formula::implies(neg(target), y), Rule::CP, {map.at(p.a)});
            int l2 = em.emit(Formula::disj(target, y), Rule::IMP, {l1});
            return em.emit(target, Rule::RDS, {l2, map.at(p.b)});
        }
        case Plan::Kind::Split: {
            int d = map.at(p.clause);
            // Case lines are written even when a branch never uses its assumption.
            const Formula& disj = p.eng->facts[p.clause].f;
            LineMap lm = map, rm = map;
            lm[p.left->base] = em.emit(disj.lhs(), Rule::Case1, {d});
            int b1 = emit_plan(*p.left, target, em, lm);
            rm[p.right->base] = em.emit(disj.rhs(), Rule::Case2, {d});
            int b2 = emit_plan(*p.right, target, em, rm);
            return em.emit(target, Rule::Cases, {d, b1, b2});
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Goal-directed introduction

struct IntroStep {
    enum class Kind { Forall, Assume, Disjunction } kind;
    Formula original;  // goal formula this step decomposes
    std::vector<std::pair<std::string, std::string>> eigen;  // (eigenvariable, bound name)
    std::vector<Formula> assumed;                            // Assume / Disjunction
};

struct Intro {
    std::vector<IntroStep> steps;
    std::vector<Formula> assumptions;  // in push order
    Formula target;
};

// Expands the goal; a disjunction yields one variant per choice of target disjunct.
void build_intros(const Formula& goal, Intro cur, VarSet& used, std::vector<Intro>& out, std::size_t cap) {
    if (out.size() >= cap) return;
    if (goal.is(Formula::Kind::Forall)) {
        IntroStep st{IntroStep::Kind::Forall, goal, {}, {}};
        Formula g = goal;
        Bindings b;
        VarSet local = used;
        while (g.is(Formula::Kind::Forall)) {
            std::string v = fresh_name("v", local);
            local.insert(v);
            st.eigen.emplace_back(v, g.var());
            b.insert_or_assign(g.var(), Term::var(v));
            g = g.body();
            // Re-binding the same name inside would shadow; stop the block there.
            if (g.is(Formula::Kind::Forall) && b.count(g.var())) break;
        }
        Formula body = substitute(g, b);
        cur.steps.push_back(std::move(st));
        build_intros(body, std::move(cur), local, out, cap);
        return;
    }
    if (goal.is(Formula::Kind::Implies)) {
        cur.steps.push_back({IntroStep::Kind::Assume, goal, {}, {goal.lhs()}});
        cur.assumptions.push_back(goal.lhs());
        build_intros(goal.rhs(), std::move(cur), used, out, cap);
        return;
    }
    if (goal.is(Formula::Kind::Or)) {
        auto parts = flatten(goal, Formula::Kind::Or);
        for (std::size_t j = parts.size(); j-- > 0;) {
            Intro alt = cur;
            IntroStep st{IntroStep::Kind::Disjunction, goal, {}, {}};
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i == j) continue;
                st.assumed.push_back(tidy(neg(parts[i])));
                alt.assumptions.push_back(st.assumed.back());
            }
            alt.steps.push_back(std::move(st));
            VarSet u = used;
            build_intros(parts[j], std::move(alt), u, out, cap);
        }
        return;
    }
    cur.target = goal;
    out.push_back(std::move(cur));
}

// Emits the discharging lines for the intro steps, innermost first.
void close_intro(const Intro& intro, int last, Emitter& em) {
    Formula cur = em.lines[static_cast<std::size_t>(last - 1)].formula;
    for (auto it = intro.steps.rbegin(); it != intro.steps.rend(); ++it) {
        switch (it->kind) {
            case IntroStep::Kind::Disjunction: {
                for (std::size_t k = it->assumed.size(); k-- > 0;) {
                    int cp = em.emit(Formula::implies(it->assumed[k], cur), Rule::CP, {last});
                    Formula joined = k == 0 ? it->original : Formula::disj(neg(it->assumed[k]), cur);
                    last = em.emit(joined, Rule::IMP, {cp});
                    cur = joined;
                }
                break;
            }
            case IntroStep::Kind::Assume:
                cur = it->original;
                last = em.emit(cur, Rule::CP, {last});
                break;
            case IntroStep::Kind::Forall: {
                std::vector<Annotation> an;
                for (const auto& [v, x] : it->eigen) an.push_back({Term::var(v), x});
                cur = it->original;
                last = em.emit(cur, Rule::UG, {last}, an);
                break;
            }
        }
    }
}

std::optional<Proof> attempt(const std::vector<Formula>& premises, const Intro& intro, int term_depth,
                             SearchContext& ctx) {
    auto eng = std::make_shared<Engine>(term_depth, ctx.cfg.pool == InstantiationPool::SubtermsPlusRev);
    std::vector<int> premise_ids, assumption_ids;
    for (const auto& p : premises) premise_ids.push_back(eng->add(p, Rule::Premise));
    for (const auto& a : intro.assumptions) assumption_ids.push_back(eng->add(a, Rule::AssumedPremise));
    eng->seed_terms(intro.target);
    std::optional<Formula> top;
    if (!intro.assumptions.empty()) top = intro.assumptions.back();
    auto plan = solve(eng, 0, intro.target, top, ctx.cfg.max_depth, ctx);
    if (!plan) return std::nullopt;

    Emitter em;
    LineMap map;
    for (int id : premise_ids)
        if (id >= 0) map[id] = em.emit(eng->facts[id].f, Rule::Premise);
    for (std::size_t i = 0; i < assumption_ids.size(); ++i) {
        // Duplicate assumptions are still pushed so every CP finds its frame.
        int n = em.emit(intro.assumptions[i], Rule::AssumedPremise);
        if (assumption_ids[i] >= 0) map[assumption_ids[i]] = n;
    }
    int last = emit_plan(*plan, intro.target, em, map);
    close_intro(intro, last, em);

    Proof proof;
    proof.premises = premises;
    proof.lines = std::move(em.lines);
    return proof;
}

Proof premise_proof(const std::vector<Formula>& premises, const Formula& p) {
    Proof proof;
    proof.premises = premises;
    proof.lines.push_back(ProofLine{1, p, Justification{Rule::Premise, {}, {}}, 0});
    return proof;
}

}  // namespace

SearchResult prove(const std::vector<Formula>& premises, const Formula& goal, const SearchConfig& cfg) {
    auto t0 = Clock::now();
    SearchResult res;
    Budget budget{t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.time_limit_seconds)),
                  cfg.max_facts};
    auto finish = [&](SearchStatus s) {
        res.status = s;
        res.stats.lines_generated = budget.generated;
        res.stats.instantiations = budget.instantiations;
        res.stats.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        return res;
    };

    for (const auto& p : premises) {
        if (equivalent(p, goal)) {
            Proof proof = premise_proof(premises, p);
            if (check_proof(proof).valid) {
                res.proof = std::move(proof);
                return finish(SearchStatus::Proved);
            }
        }
    }

    VarSet used = all_vars(goal);
    for (const auto& p : premises) {
        auto v = all_vars(p);
        used.insert(v.begin(), v.end());
    }
    std::vector<Intro> intros;
    build_intros(goal, Intro{{}, {}, goal}, used, intros, 16);

    SearchContext ctx{cfg, budget};
    bool rejected = false;
    for (int d = 0; d <= cfg.max_term_depth; ++d) {
        res.stats.term_depth_reached = d;
        for (const auto& intro : intros) {
            auto proof = attempt(premises, intro, d, ctx);
            if (proof) {
                if (static_cast<int>(proof->lines.size()) > cfg.max_lines) {
                    budget.truncated = true;
                    continue;
                }
                CheckReport rep = check_proof(*proof);
                if (rep.valid && rep.conclusion && equivalent(*rep.conclusion, goal)) {
                    res.proof = std::move(proof);
                    return finish(SearchStatus::Proved);
                }
                // The prover never certifies itself; a rejected candidate is a bug report, not a proof.
                rejected = true;
                res.note = "internal: candidate proof rejected at line " + std::to_string(rep.failed_line) + ": " +
                           rep.description;
            }
            if (budget.out_of_time()) return finish(SearchStatus::BudgetExceeded);
        }
    }
    (void)rejected;
    return finish(budget.truncated || budget.expired ? SearchStatus::BudgetExceeded : SearchStatus::Exhausted);
}

SearchResult prove_staged(const std::vector<Formula>& lemma_premises, const Formula& lemma,
                          const std::vector<Formula>& goal_premises, const Formula& goal, const SearchConfig& cfg) {
    auto t0 = Clock::now();
    SearchResult first = prove(lemma_premises, lemma, cfg);
    if (first.status != SearchStatus::Proved) {
        first.note = "lemma stage: " + std::string(search_status_name(first.status)) +
                     (first.note.empty() ? "" : "; " + first.note);
        return first;
    }
    SearchConfig rest = cfg;
    rest.time_limit_seconds = std::max(0.1, cfg.time_limit_seconds - first.stats.seconds);
    SearchResult second = prove(goal_premises, goal, rest);
    SearchResult out;
    out.stats.lines_generated = first.stats.lines_generated + second.stats.lines_generated;
    out.stats.instantiations = first.stats.instantiations + second.stats.instantiations;
    out.stats.term_depth_reached = std::max(first.stats.term_depth_reached, second.stats.term_depth_reached);
    if (second.status != SearchStatus::Proved) {
        out.status = second.status;
        out.note = "goal stage: " + std::string(search_status_name(second.status));
        out.stats.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        return out;
    }

    // Splice: lemma proof first, then the goal proof with its lemma premise
    // replaced by the lemma's conclusion and duplicate premises shared.
    std::vector<Formula> premises;
    auto add_premise = [&](const Formula& p) {
        if (equivalent(p, lemma)) return;
        for (const auto& q : premises)
            if (equivalent(q, p)) return;
        premises.push_back(p);
    };
    for (const auto& p : lemma_premises) add_premise(p);
    for (const auto& p : goal_premises) add_premise(p);

    Proof combined;
    combined.premises = premises;
    std::map<std::string, int> premise_line;
    for (const auto& l : first.proof->lines) {
        combined.lines.push_back(l);
        if (l.just.rule == Rule::Premise) premise_line.emplace(canonical_key(l.formula), l.number);
    }
    const int lemma_line = static_cast<int>(combined.lines.size());
    premise_line[canonical_key(lemma)] = lemma_line;
    std::map<int, int> renumber;
    for (const auto& l : second.proof->lines) {
        if (l.just.rule == Rule::Premise) {
            auto it = premise_line.find(canonical_key(l.formula));
            if (it != premise_line.end()) {
                renumber[l.number] = it->second;
                continue;
            }
        }
        ProofLine nl = l;
        nl.number = static_cast<int>(combined.lines.size()) + 1;
        for (auto& c : nl.just.cited) c = renumber.at(c);
        renumber[l.number] = nl.number;
        if (l.just.rule == Rule::Premise) premise_line.emplace(canonical_key(l.formula), nl.number);
        combined.lines.push_back(std::move(nl));
    }
    out.stats.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    CheckReport rep = check_proof(combined);
    if (!rep.valid || !equivalent(*rep.conclusion, goal)) {
        out.status = SearchStatus::Exhausted;
        out.note = "internal: spliced proof rejected at line " + std::to_string(rep.failed_line) + ": " +
                   rep.description;
        return out;
    }
    out.status = SearchStatus::Proved;
    out.proof = std::move(combined);
    return out;
}

}  // namespace ogeo

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace ogeo {

// Immutable first-order term: a variable or a function application.
class Term {
public:
    enum class Kind { Var, App };

    static Term var(std::string name);
    static Term app(std::string fn, std::vector<Term> args);

    Kind kind() const { return node_->kind; }
    bool is_var() const { return node_->kind == Kind::Var; }
    // Variable name or function symbol.
    const std::string& name() const { return node_->name; }
    const std::vector<Term>& args() const { return node_->args; }
    // Nesting depth of applications; 0 for a variable.
    std::size_t depth() const;

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b);

private:
    struct Node {
        Kind kind;
        std::string name;
        std::vector<Term> args;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Immutable formula tree. Copies share structure.
class Formula {
public:
    enum class Kind { Atom, Not, And, Or, Implies, Forall, Exists };

    static Formula atom(std::string pred, std::vector<Term> args);
    static Formula negation(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula forall(std::string var, Formula body);
    static Formula exists(std::string var, Formula body);
    static Formula quant(Kind k, std::string var, Formula body);
    static Formula binary(Kind k, Formula a, Formula b);

    Kind kind() const { return node_->kind; }
    bool is(Kind k) const { return node_->kind == k; }
    bool is_binary() const;
    bool is_quant() const { return is(Kind::Forall) || is(Kind::Exists); }

    const std::string& pred() const { return node_->name; }
    const std::vector<Term>& args() const { return node_->args; }
    // Bound variable of a quantifier.
    const std::string& var() const { return node_->name; }
    // Operand of Not / quantifier body.
    const Formula& body() const { return node_->kids[0]; }
    const Formula& lhs() const { return node_->kids[0]; }
    const Formula& rhs() const { return node_->kids[1]; }

    std::size_t size() const;

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    struct Node {
        Kind kind;
        std::string name;
        std::vector<Term> args;
        std::vector<Formula> kids;
    };
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Signature {
    std::map<std::string, int> predicates;  // keys upper-case
    std::map<std::string, int> functions;   // keys lower-case

    static Signature geometry();
    // Geometry plus the defined relations CON, DIR, OPP, INOPP.
    static Signature with_definitions();

    bool has_function(const std::string& name) const;
    // Returns -1 when undeclared.
    int predicate_arity(const std::string& name) const;
    int function_arity(const std::string& name) const;
};

using Bindings = std::map<std::string, Term>;
using VarSet = std::set<std::string>;

void collect_vars(const Term& t, VarSet& out);
VarSet term_vars(const Term& t);
VarSet free_vars(const Formula& f);
VarSet bound_vars(const Formula& f);
// Every variable name that appears anywhere, bound or free.
VarSet all_vars(const Formula& f);
bool is_closed(const Formula& f);
bool occurs_free(const std::string& v, const Formula& f);

// Returns base+N for the smallest N >= 1 with the name not in `avoid`.
std::string fresh_name(const std::string& base, const VarSet& avoid);

Term substitute(const Term& t, const Bindings& b);
// Simultaneous, capture-avoiding substitution of free occurrences.
Formula substitute(const Formula& f, const Bindings& b);

// Renames bound variables to a canonical scheme; free variables are kept.
Formula alpha_normalize(const Formula& f);
bool alpha_eq(const Formula& f, const Formula& g);

// ~(Ev)P -> (Av)~P and ~(Av)P -> (Ev)~P; identity otherwise.
Formula negated_quantifier_view(const Formula& f);

}  // namespace ogeo

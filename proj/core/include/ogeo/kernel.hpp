#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ogeo/formula.hpp"

namespace ogeo {

enum class Rule {
    Premise,
    AssumedPremise,
    MP,
    MT,
    IMP,
    LDS,
    RDS,
    CP,
    SIMP,
    Case1,
    Case2,
    Cases,
    DeMorgan,
    DistributiveLaw,
    Same,
    US,
    UG,
    EG,
    EE,
    SUB,
};

// Canonical spelling as written in proof scripts, e.g. "ASSUMED-PREMISE".
std::string_view rule_name(Rule r);
// Accepts the canonical spelling plus '_' / '.' / '-' variants.
std::optional<Rule> rule_from_name(std::string_view s);

// `(t v)`: term first, variable second. For UG the pair is (free-var bound-var).
struct Annotation {
    Term term;
    std::string var;
};

struct Justification {
    Rule rule = Rule::Premise;
    std::vector<int> cited;
    std::vector<Annotation> annots;
};

struct ProofLine {
    int number = 0;
    Formula formula;
    Justification just;
    int depth = 0;  // filled in by the checker
};

struct Proof {
    std::vector<Formula> premises;  // declared; empty means "whatever PREMISE lines use"
    std::optional<Formula> show;
    std::vector<ProofLine> lines;
};

enum class FailureKind { Rule, Scope, Structure };
std::string_view failure_kind_name(FailureKind k);

struct Verdict {
    bool ok = true;
    FailureKind kind = FailureKind::Rule;
    std::string description;

    static Verdict pass() { return {}; }
    static Verdict fail(FailureKind k, std::string d) { return {false, k, std::move(d)}; }
};

struct CheckReport {
    bool valid = false;
    int failed_line = 0;  // 0 when the failure is not attributable to one line
    FailureKind kind = FailureKind::Rule;
    std::string description;
    std::vector<Formula> premises;
    std::optional<Formula> conclusion;
    std::vector<int> depths;  // per checked line

    // "P1, P2 |- C"
    std::string sequent() const;
};

// Incremental checker. Lines must be added in order.
class Checker {
public:
    explicit Checker(std::vector<Formula> declared_premises = {});

    Verdict add(const ProofLine& line);
    // End-of-proof conditions: nothing left open, SHOW matches.
    Verdict finish(const std::optional<Formula>& show) const;

    std::size_t open_frames() const { return frames_.size(); }
    const std::vector<Formula>& premises_used() const { return premise_lines_; }
    int last_depth() const { return static_cast<int>(frames_.size()); }
    // Assumption lines the given line depends on.
    const std::set<int>& deps(int number) const;

private:
    enum class FrameKind { Assume, Case, EE };
    struct Frame {
        int id;
        FrameKind kind;
        int line;
        Formula formula;
        int source = 0;       // cited disjunction / existential line
        int side = -1;        // 0 = left disjunct, 1 = right
        Rule label = Rule::AssumedPremise;
        bool paired = false;  // second case of a CASE1/CASE2 pair
        std::string eigen;
    };
    struct Entry {
        Formula formula;
        std::vector<int> path;  // frame ids open when the line was made
        std::set<int> deps;
    };

    Verdict check(const ProofLine& line, std::set<int>& deps);
    Verdict cite(const ProofLine& line, std::size_t i, const Entry*& out) const;
    bool accessible(const Entry& e) const;
    VarSet restricted_vars() const;

    Verdict rule_case(const ProofLine& line, std::set<int>& deps);
    Verdict rule_cases(const ProofLine& line, std::set<int>& deps);
    Verdict rule_ug(const ProofLine& line, const Entry& src);
    Verdict rule_ee(const ProofLine& line, const Entry& src, std::set<int>& deps);
    void push_frame(Frame f);
    void pop_frame();

    std::vector<Formula> declared_;
    std::vector<Formula> premise_lines_;
    std::vector<Entry> entries_;
    std::vector<Frame> frames_;
    std::set<int> open_ids_;
    int next_frame_id_ = 0;
};

Verdict check_line(const Proof& so_far, const ProofLine& line);
CheckReport check_proof(const Proof& p);

// First-order matching: finds bindings for `vars` making `pattern` identical to `target`.
// Bound variables may differ in name. Returns false if no such bindings exist.
bool match_formula(const Formula& pattern, const Formula& target, const VarSet& vars,
                   Bindings& out);

}  // namespace ogeo

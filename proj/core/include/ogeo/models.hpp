#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ogeo/formula.hpp"

namespace ogeo {

// Finite interpretation of {UNDIR/2, rev/1} over the domain [0, n).
struct Structure {
    int n = 1;
    std::vector<std::uint8_t> undir;  // row-major n*n
    std::vector<int> rev;

    static Structure make(int n);
    bool u(int a, int b) const { return undir[static_cast<std::size_t>(a * n + b)] != 0; }
    void set_u(int a, int b, bool v) { undir[static_cast<std::size_t>(a * n + b)] = v ? 1 : 0; }
    std::vector<std::pair<int, int>> undir_pairs() const;

    friend bool operator==(const Structure& a, const Structure& b) {
        return a.n == b.n && a.undir == b.undir && a.rev == b.rev;
    }
};

using Assignment = std::map<std::string, int>;

class UnassignedVariable : public std::invalid_argument {
public:
    explicit UnassignedVariable(const std::string& v)
        : std::invalid_argument("no value assigned to free variable '" + v + "'") {}
};

bool eval(const Structure& s, const Formula& f, const Assignment& a = {});

// Formula compiled to slot-addressed nodes; reusable across structures.
class CompiledFormula {
public:
    // `free_order` lists the free variables; their values occupy the first slots.
    explicit CompiledFormula(const Formula& f, const std::vector<std::string>& free_order = {});
    bool eval(const Structure& s, const std::vector<int>& free_values = {}) const;
    std::size_t slots() const { return slots_; }

private:
    struct TermNode {
        int slot;   // >= 0: variable slot
        int inner;  // for rev: index of argument
    };
    struct Node {
        Formula::Kind kind;
        int a = -1, b = -1;  // children (nodes) or, for atoms, terms
        int slot = -1;       // quantifier slot
    };
    int compile(const Formula& f, std::map<std::string, int>& env);
    int compile_term(const Term& t, const std::map<std::string, int>& env);
    int term_value(const Structure& s, int t, const int* env) const;
    bool run(const Structure& s, int node, int* env) const;

    std::vector<Node> nodes_;
    std::vector<TermNode> terms_;
    std::size_t slots_ = 0;
    int root_ = 0;
};

// 2^(n*n) * n^n
std::uint64_t structure_count(int n);
// Index order: rev word (rev[0] most significant, base n), then undir bits
// row-major with (0,0) most significant. Increasing index = lexicographic (rev, undir).
Structure structure_at(int n, std::uint64_t index);
std::uint64_t structure_index(const Structure& s);
// Calls `visit` for every structure of size n in index order; stop by returning false.
void enumerate_structures(int n, const std::function<bool(const Structure&)>& visit);

struct Countermodel {
    Structure structure;
    std::uint64_t index = 0;
};

struct ModelSearchStats {
    std::uint64_t structures_checked = 0;
    double seconds = 0;
};

// Smallest structure (size, then index) satisfying every premise and falsifying goal.
std::optional<Countermodel> find_countermodel(const std::vector<Formula>& premises, const Formula& goal,
                                              int max_n, int jobs = 1, ModelSearchStats* stats = nullptr);

// Truth-table comparison of two closed formulas over all structures of size <= max_n.
// Returns the first structure where they differ, if any.
std::optional<Countermodel> find_disagreement(const Formula& a, const Formula& b, int max_n);

// "size 2\nrev 0 0\nundir (0,1) (1,0)"
std::string describe_structure(const Structure& s);

}  // namespace ogeo

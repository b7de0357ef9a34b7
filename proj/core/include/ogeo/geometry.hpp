#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ogeo/formula.hpp"

namespace ogeo {

class UnknownAxiom : public std::out_of_range {
public:
    explicit UnknownAxiom(const std::string& name) : std::out_of_range("unknown axiom '" + name + "'") {}
};

struct CatalogEntry {
    std::string name;
    std::string source;
    Formula formula;
    bool is_form = false;  // lives in the [forms] section
};

// Named closed formulas parsed from catalog text.
class AxiomSet {
public:
    static AxiomSet parse(std::string_view text);
    // The catalog compiled into the library.
    static const AxiomSet& builtin();

    bool contains(std::string_view name) const;
    // Lookup ignores case and dots, so "I.7", "i7" and "I7" agree.
    const CatalogEntry& entry(std::string_view name) const;
    const Formula& get(std::string_view name) const { return entry(name).formula; }
    std::vector<std::string> names(bool include_forms = false) const;

private:
    std::vector<CatalogEntry> entries_;
    std::map<std::string, std::size_t> index_;
};

Formula axiom(std::string_view name);
// Comma-separated names, e.g. "I5,I6,ODO".
std::vector<Formula> axioms(std::string_view names);
std::vector<std::string> split_names(std::string_view names);

// Replaces CON, DIR, OPP, INOPP atoms by their UNDIR bodies.
Formula expand_defs(const Formula& f);

// [W1, W2, W3, W4]
std::vector<Formula> w_decomposition();

// Universal closure over `vars` (outermost first). A quantifier whose variable
// does not occur in an implication's antecedent is pushed into the consequent.
Formula close_pushed(const Formula& f, const std::vector<std::string>& vars);

}  // namespace ogeo

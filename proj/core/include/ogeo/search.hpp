#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ogeo/kernel.hpp"

namespace ogeo {

enum class InstantiationPool { SubtermsOnly, SubtermsPlusRev };

struct SearchConfig {
    int max_depth = 2;          // nested case splits
    int max_term_depth = 1;     // rev-nesting of instantiation terms
    int max_lines = 400;        // length of an emitted proof
    std::size_t max_facts = 6000;
    double time_limit_seconds = 10.0;
    InstantiationPool pool = InstantiationPool::SubtermsPlusRev;
};

enum class SearchStatus { Proved, Exhausted, BudgetExceeded };
std::string_view search_status_name(SearchStatus s);

struct SearchStats {
    std::uint64_t lines_generated = 0;
    std::uint64_t instantiations = 0;
    int term_depth_reached = 0;
    double seconds = 0;
};

struct SearchResult {
    SearchStatus status = SearchStatus::Exhausted;
    std::optional<Proof> proof;
    SearchStats stats;
    std::string note;
};

// Bounded natural-deduction search. A returned proof has passed check_proof
// with exactly `premises` declared and `goal` as its conclusion.
SearchResult prove(const std::vector<Formula>& premises, const Formula& goal, const SearchConfig& cfg = {});

// Two-stage search: proves `lemma` from `lemma_premises`, then `goal` from
// `goal_premises` (which should include the lemma), and splices both into one proof
// over the union of the non-lemma premises.
SearchResult prove_staged(const std::vector<Formula>& lemma_premises, const Formula& lemma,
                          const std::vector<Formula>& goal_premises, const Formula& goal,
                          const SearchConfig& cfg = {});

}  // namespace ogeo

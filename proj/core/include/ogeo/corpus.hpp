#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ogeo/kernel.hpp"

namespace ogeo {

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Declared sequent of a corpus entry, in catalog names.
// Conclusion = (antecedents, left-nested &) -> goal, or just goal without antecedents.
struct CorpusEntry {
    std::string id;
    std::vector<std::string> premises;
    std::vector<std::string> antecedents;
    std::string goal;
    int expected_lines = 0;
    std::string title;
};

struct Sequent {
    std::vector<Formula> premises;
    Formula conclusion;
    std::string str() const;
};

struct LoadedEntry {
    CorpusEntry entry;
    std::string path;
    std::string script;
    Proof proof;
    Sequent declared;
};

const std::vector<CorpusEntry>& corpus_entries();
const CorpusEntry& corpus_entry(std::string_view id);
Sequent declared_sequent(const CorpusEntry& e);

// OGEO_CORPUS_DIR if set, else the source tree's corpus, else the installed copy.
std::string corpus_dir();

// Parses the entry's script and confirms it states the declared sequent
// (premise headers and final line equivalent to the catalog formulas).
LoadedEntry load(std::string_view id, const std::string& dir = corpus_dir());

std::string read_file(const std::string& path);

}  // namespace ogeo

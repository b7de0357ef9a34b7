#include "ogeo/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ogeo/geometry.hpp"
#include "ogeo/normal_form.hpp"
#include "ogeo/proof_script.hpp"
#include "ogeo/syntax.hpp"

namespace ogeo {

const std::vector<CorpusEntry>& corpus_entries() {
    static const std::vector<CorpusEntry> entries = {
        {"A", {}, {"I6"}, "W1", 17, "the axiom I6 implies W1"},
        {"B1", {"ODO", "I5"}, {}, "OO", 16, "OO from ODO and I5"},
        {"B2", {}, {"I5", "OO", "I6"}, "W2", 29, "W2 from I5, OO and I6"},
        {"C", {}, {"I5", "I6", "ODO"}, "W3", 44, "W3 from I5, I6 and ODO"},
        {"D", {}, {"I6"}, "W4", 17, "the axiom I6 implies W4"},
        {"E", {}, {"I8", "ODO", "I7"}, "I6", 52, "I6 from I8, ODO and I7"},
    };
    return entries;
}

const CorpusEntry& corpus_entry(std::string_view id) {
    for (const auto& e : corpus_entries())
        if (e.id == id) return e;
    throw CorpusError("unknown corpus entry '" + std::string(id) + "'");
}

Sequent declared_sequent(const CorpusEntry& e) {
    std::vector<Formula> premises;
    for (const auto& p : e.premises) premises.push_back(axiom(p));
    Formula goal = axiom(e.goal);
    if (e.antecedents.empty()) return {premises, goal};
    std::vector<Formula> ants;
    for (const auto& a : e.antecedents) ants.push_back(axiom(a));
    return {premises, Formula::implies(build_left(Formula::Kind::And, ants), goal)};
}

std::string Sequent::str() const {
    std::string s;
    for (std::size_t i = 0; i < premises.size(); ++i) {
        if (i) s += ", ";
        s += print_formula(premises[i]);
    }
    return s + (s.empty() ? "|- " : " |- ") + print_formula(conclusion);
}

std::string corpus_dir() {
    if (const char* env = std::getenv("OGEO_CORPUS_DIR"); env && *env) return env;
#ifdef OGEO_DEFAULT_CORPUS_DIR
    if (std::filesystem::is_directory(OGEO_DEFAULT_CORPUS_DIR)) return OGEO_DEFAULT_CORPUS_DIR;
#endif
    // relocated installs: <prefix>/bin/exe next to <prefix>/share/ogeo/corpus/v1
    std::error_code ec;
    auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
    if (!ec) {
        auto near = exe.parent_path().parent_path() / "share" / "ogeo" / "corpus" / "v1";
        if (std::filesystem::is_directory(near, ec)) return near.string();
    }
#ifdef OGEO_INSTALLED_CORPUS_DIR
    return OGEO_INSTALLED_CORPUS_DIR;
#else
    return "corpus/v1";
#endif
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedEntry load(std::string_view id, const std::string& dir) {
    const CorpusEntry& e = corpus_entry(id);
    LoadedEntry out{e, (std::filesystem::path(dir) / (e.id + ".prf")).string(), "", Proof{}, declared_sequent(e)};
    out.script = read_file(out.path);
    try {
        out.proof = parse_proof_script(out.script);
    } catch (const ScriptError& err) {
        throw CorpusError(out.path + ": " + err.what());
    }
    const auto& lines = out.proof.lines;
    if (lines.empty()) throw CorpusError(out.path + ": no proof lines");
    const auto& want = out.declared.premises;
    const auto& have = out.proof.premises;
    auto covered = [](const std::vector<Formula>& xs, const std::vector<Formula>& ys) {
        return std::all_of(xs.begin(), xs.end(), [&](const Formula& x) {
            return std::any_of(ys.begin(), ys.end(), [&](const Formula& y) { return equivalent(x, y); });
        });
    };
    if (!covered(want, have) || !covered(have, want))
        throw CorpusError(out.path + ": PREMISE headers do not match the declared premises");
    if (!equivalent(lines.back().formula, out.declared.conclusion))
        throw CorpusError(out.path + ": final line does not state the declared conclusion");
    return out;
}

}  // namespace ogeo

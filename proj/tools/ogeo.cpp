#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "ogeo/corpus.hpp"
#include "ogeo/geometry.hpp"
#include "ogeo/models.hpp"
#include "ogeo/normal_form.hpp"
#include "ogeo/proof_script.hpp"
#include "ogeo/search.hpp"
#include "ogeo/syntax.hpp"

using json = nlohmann::json;
using namespace ogeo;

namespace {

// exit codes are part of the interface
enum Exit { kPass = 0, kCheckFailed = 1, kParseError = 2, kSearchFailed = 3, kExpectation = 4 };

struct Options {
    std::string format = "text";
    std::string config;
    int jobs = 1;
};

struct Report {
    std::string command;
    bool records = false;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void item(const json& j, const std::string& text) const {
        if (records) {
            json r = j;
            r["command"] = command;
            std::cout << r.dump() << "\n";
        } else {
            std::cout << text << "\n";
        }
    }

    int finish(int code, const std::string& status) const {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (records) {
            std::cout << json{{"command", command}, {"summary", true}, {"status", status}, {"exit", code},
                              {"seconds", secs}}
                             .dump()
                      << "\n";
        }
        std::cout.flush();
        return code;
    }
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Optional JSON config: {"signature": {"predicates": {...}, "functions": {...}},
//                        "search": {...}, "models": {"max_size": N}}
json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("config " + path + ": " + e.what());
    }
}

Signature signature_from(const json& cfg) {
    Signature sig = Signature::with_definitions();
    if (!cfg.contains("signature")) return sig;
    const json& s = cfg["signature"];
    for (const auto& [name, arity] : s.value("predicates", json::object()).items()) sig.predicates[name] = arity.get<int>();
    for (const auto& [name, arity] : s.value("functions", json::object()).items()) sig.functions[name] = arity.get<int>();
    return sig;
}

// A catalog name, or failing that a formula in concrete syntax.
Formula resolve(const std::string& text, const Signature& sig) {
    if (AxiomSet::builtin().contains(text)) return axiom(text);
    try {
        return parse_formula(text, sig);
    } catch (const ParseError& e) {
        throw InputError("'" + text + "' is neither a catalog name nor a formula: " + e.what());
    }
}

std::vector<Formula> resolve_list(const std::string& list, const Signature& sig) {
    std::vector<Formula> out;
    if (list.empty()) return out;
    for (const auto& n : split_names(list)) out.push_back(resolve(n, sig));
    return out;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

struct CheckItem {
    std::string path;
    bool parse_error = false;
    std::string error;
    CheckReport report;
    int lines = 0;
};

CheckItem check_one(const std::string& path, const std::string& text, const Signature& sig) {
    CheckItem it;
    it.path = path;
    try {
        Proof p = parse_proof_script(text, sig);
        it.lines = static_cast<int>(p.lines.size());
        it.report = check_proof(p);
    } catch (const ScriptError& e) {
        it.parse_error = true;
        it.error = e.what();
    }
    return it;
}

int cmd_check(const std::vector<std::string>& paths, bool keep_going, const Options& opt) {
    Report rep{"check", opt.format == "records"};
    json cfg = load_config(opt.config);
    Signature sig = signature_from(cfg);

    std::vector<std::string> texts(paths.size());
    std::vector<std::optional<CheckItem>> results(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        try {
            texts[i] = read_input(paths[i]);
        } catch (const InputError& e) {
            CheckItem it;
            it.path = paths[i];
            it.parse_error = true;
            it.error = e.what();
            results[i] = it;
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < paths.size();)
            if (!results[i]) results[i] = check_one(paths[i], texts[i], sig);
    };
    int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(paths.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    int code = kPass;
    std::size_t valid = 0;
    for (const auto& r : results) {
        const CheckItem& it = *r;
        if (it.parse_error) {
            rep.item({{"item", it.path}, {"status", "parse-error"}, {"error", it.error}},
                     it.path + ": parse error: " + it.error);
            code = kParseError;
        } else if (it.report.valid) {
            ++valid;
            rep.item({{"item", it.path}, {"status", "valid"}, {"lines", it.lines}, {"sequent", it.report.sequent()}},
                     it.path + ": valid (" + std::to_string(it.lines) + " lines)\n  " + it.report.sequent());
        } else {
            const auto& cr = it.report;
            rep.item({{"item", it.path},
                      {"status", "invalid"},
                      {"line", cr.failed_line},
                      {"kind", std::string(failure_kind_name(cr.kind))},
                      {"error", cr.description}},
                     it.path + ": invalid at line " + std::to_string(cr.failed_line) + " [" +
                         std::string(failure_kind_name(cr.kind)) + "] " + cr.description);
            if (code == kPass) code = kCheckFailed;
        }
        if (code != kPass && !keep_going) break;
    }
    if (!rep.records && paths.size() > 1)
        std::cout << valid << "/" << paths.size() << " valid\n";
    return rep.finish(code, code == kPass ? "pass" : "fail");
}

// ---------------------------------------------------------------------------

struct ProveArgs {
    std::string from, goal, out;
    std::string lemma = "OO", lemma_from = "I5,ODO", replaces = "ODO";
    bool staged = false, direct = false, expand = false;
    std::optional<int> max_depth, max_term_depth, max_lines;
    std::optional<double> time_limit;
    std::optional<std::size_t> max_facts;
    std::string pool;
};

bool same_formula_in(const std::vector<Formula>& xs, const Formula& f) {
    return std::any_of(xs.begin(), xs.end(), [&](const Formula& x) { return equivalent(x, f); });
}

int cmd_prove(const ProveArgs& a, const Options& opt) {
    Report rep{"prove", opt.format == "records"};
    json cfg = load_config(opt.config);
    Signature sig = signature_from(cfg);
    std::vector<Formula> premises = resolve_list(a.from, sig);
    Formula goal = resolve(a.goal, sig);
    if (a.expand) {
        for (auto& p : premises) p = expand_defs(p);
        goal = expand_defs(goal);
    }

    SearchConfig sc;
    const json s = cfg.value("search", json::object());
    sc.max_depth = s.value("max_depth", sc.max_depth);
    sc.max_term_depth = s.value("max_term_depth", sc.max_term_depth);
    sc.max_lines = s.value("max_lines", sc.max_lines);
    sc.max_facts = s.value("max_facts", sc.max_facts);
    sc.time_limit_seconds = s.value("time_limit", sc.time_limit_seconds);
    std::string pool = a.pool.empty() ? s.value("pool", std::string("subterms+rev")) : a.pool;
    if (pool == "subterms") sc.pool = InstantiationPool::SubtermsOnly;
    else if (pool == "subterms+rev") sc.pool = InstantiationPool::SubtermsPlusRev;
    else throw InputError("unknown pool '" + pool + "' (subterms, subterms+rev)");
    if (a.max_depth) sc.max_depth = *a.max_depth;
    if (a.max_term_depth) sc.max_term_depth = *a.max_term_depth;
    if (a.max_lines) sc.max_lines = *a.max_lines;
    if (a.time_limit) sc.time_limit_seconds = *a.time_limit;
    if (a.max_facts) sc.max_facts = *a.max_facts;

    // Staged by default when the lemma's premises are present but the lemma is not.
    Formula lemma = resolve(a.lemma, sig);
    std::vector<Formula> lemma_premises = resolve_list(a.lemma_from, sig);
    bool can_stage = !same_formula_in(premises, lemma) &&
                     std::all_of(lemma_premises.begin(), lemma_premises.end(),
                                 [&](const Formula& p) { return same_formula_in(premises, p); });
    bool goal_is_w23 = equivalent(goal, axiom("W2")) || equivalent(goal, axiom("W3"));
    bool staged = a.staged || (!a.direct && goal_is_w23 && can_stage);
    if (a.staged && !can_stage)
        throw InputError("--staged needs the lemma premises (" + a.lemma_from + ") among --from and the lemma absent");

    SearchResult r;
    if (staged) {
        // The lemma stands in for the premises named by --replaces in the second stage.
        std::vector<Formula> replaced = resolve_list(a.replaces, sig), second;
        for (const auto& p : premises)
            if (!same_formula_in(replaced, p)) second.push_back(p);
        second.push_back(lemma);
        r = prove_staged(lemma_premises, lemma, second, goal, sc);
    } else {
        r = prove(premises, goal, sc);
    }

    json stats{{"lines_generated", r.stats.lines_generated},
               {"instantiations", r.stats.instantiations},
               {"term_depth_reached", r.stats.term_depth_reached},
               {"seconds", r.stats.seconds}};
    std::string mode = staged ? "staged" : "direct";
    if (r.status != SearchStatus::Proved) {
        rep.item({{"status", std::string(search_status_name(r.status))}, {"mode", mode}, {"stats", stats}, {"note", r.note}},
                 std::string("search ") + std::string(search_status_name(r.status)) + " (" + mode + "): " +
                     std::to_string(r.stats.lines_generated) + " facts, " + std::to_string(r.stats.instantiations) +
                     " instantiations, term depth " + std::to_string(r.stats.term_depth_reached) + ", " +
                     std::to_string(r.stats.seconds) + " s" + (r.note.empty() ? "" : "\n  " + r.note));
        return rep.finish(kSearchFailed, std::string(search_status_name(r.status)));
    }
    std::string script = format_proof_script(*r.proof);
    if (!a.out.empty()) {
        std::ofstream out(a.out, std::ios::binary);
        if (!out) throw InputError("cannot write " + a.out);
        out << script;
    }
    CheckReport cr = check_proof(*r.proof);
    json item{{"status", "proved"},
              {"mode", mode},
              {"lines", r.proof->lines.size()},
              {"sequent", cr.sequent()},
              {"stats", stats}};
    if (a.out.empty()) item["script"] = script;
    if (rep.records) {
        rep.item(item, "");
    } else if (a.out.empty()) {
        std::cout << script;
    } else {
        std::cout << "proved (" << mode << ", " << r.proof->lines.size() << " lines) -> " << a.out << "\n  "
                  << cr.sequent() << "\n";
    }
    return rep.finish(kPass, "proved");
}

// ---------------------------------------------------------------------------

int cmd_models(const std::string& from, const std::string& goal_name, std::optional<int> max_size, bool expect_none,
               bool expect_counter, const Options& opt) {
    Report rep{"models", opt.format == "records"};
    json cfg = load_config(opt.config);
    Signature sig = signature_from(cfg);
    int n = max_size.value_or(cfg.value("models", json::object()).value("max_size", 3));
    if (n < 1 || n > 5) throw InputError("--max-size must be between 1 and 5");
    std::vector<Formula> premises = resolve_list(from, sig);
    for (auto& p : premises) p = expand_defs(p);
    Formula goal = expand_defs(resolve(goal_name, sig));

    ModelSearchStats st;
    auto cm = find_countermodel(premises, goal, n, opt.jobs, &st);
    int code = kPass;
    if ((cm && expect_none) || (!cm && expect_counter)) code = kExpectation;
    if (cm) {
        json undir = json::array();
        for (const auto& [x, y] : cm->structure.undir_pairs()) undir.push_back({x, y});
        rep.item({{"status", "countermodel"},
                  {"size", cm->structure.n},
                  {"index", cm->index},
                  {"rev", cm->structure.rev},
                  {"undir", undir},
                  {"structures_checked", st.structures_checked},
                  {"seconds", st.seconds}},
                 "countermodel (index " + std::to_string(cm->index) + ")\n" + describe_structure(cm->structure));
    } else {
        rep.item({{"status", "none"}, {"max_size", n}, {"structures_checked", st.structures_checked}, {"seconds", st.seconds}},
                 "no countermodel up to " + std::to_string(n));
    }
    if (code == kExpectation && !rep.records)
        std::cout << (expect_none ? "expected none" : "expected a countermodel") << "\n";
    return rep.finish(code, code == kPass ? "pass" : "expectation-mismatch");
}

// ---------------------------------------------------------------------------

int cmd_corpus(const std::string& dir, const Options& opt) {
    Report rep{"corpus", opt.format == "records"};
    int code = kPass;
    for (const auto& e : corpus_entries()) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            LoadedEntry le = load(e.id, dir.empty() ? corpus_dir() : dir);
            CheckReport cr = check_proof(le.proof);
            int lines = static_cast<int>(le.proof.lines.size());
            bool ok = cr.valid && lines == e.expected_lines;
            double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            std::string why = !cr.valid ? "invalid at line " + std::to_string(cr.failed_line) + ": " + cr.description
                              : lines != e.expected_lines
                                  ? "expected " + std::to_string(e.expected_lines) + " lines, found " + std::to_string(lines)
                                  : "";
            rep.item({{"item", e.id},
                      {"status", ok ? "valid" : "invalid"},
                      {"lines", lines},
                      {"expected_lines", e.expected_lines},
                      {"ms", ms},
                      {"error", why}},
                     e.id + ": " + (ok ? "valid" : "INVALID") + " (" + std::to_string(lines) + " lines) " + e.title +
                         (why.empty() ? "" : "\n  " + why));
            if (!ok) code = kCheckFailed;
        } catch (const CorpusError& err) {
            rep.item({{"item", e.id}, {"status", "parse-error"}, {"error", err.what()}}, e.id + ": " + err.what());
            code = kParseError;
        }
    }
    return rep.finish(code, code == kPass ? "pass" : "fail");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ogeo: natural-deduction toolkit for ordered affine geometry"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--format", opt.format, "text or records (one JSON object per line)")
        ->check(CLI::IsMember({"text", "records"}));
    app.add_option("--config", opt.config, "JSON config with signature and bounds; flags override it");
    app.add_option("--jobs,-j", opt.jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("check", "check proof scripts");
    std::vector<std::string> paths;
    bool keep_going = false;
    check->add_option("files", paths, "proof scripts, or - for stdin")->required();
    check->add_flag("--keep-going,-k", keep_going, "report every file instead of stopping at the first failure");

    auto* prove = app.add_subcommand("prove", "search for a proof");
    ProveArgs pa;
    prove->add_option("--from", pa.from, "comma-separated premises (catalog names or formulas)");
    prove->add_option("--goal", pa.goal, "goal (catalog name or formula)")->required();
    prove->add_option("--out,-o", pa.out, "write the proof script here");
    prove->add_option("--max-depth", pa.max_depth, "nested case splits");
    prove->add_option("--max-term-depth", pa.max_term_depth, "rev-nesting of instantiation terms");
    prove->add_option("--max-lines", pa.max_lines, "longest acceptable proof");
    prove->add_option("--max-facts", pa.max_facts, "facts derived per search state");
    prove->add_option("--time-limit", pa.time_limit, "seconds");
    prove->add_option("--pool", pa.pool, "instantiation terms: subterms or subterms+rev");
    prove->add_option("--lemma", pa.lemma, "lemma for staged mode");
    prove->add_option("--lemma-from", pa.lemma_from, "premises of the lemma");
    prove->add_option("--replaces", pa.replaces, "premises the lemma replaces in the second stage");
    auto* st = prove->add_flag("--staged", pa.staged, "prove the lemma first, then the goal");
    prove->add_flag("--direct", pa.direct, "never stage")->excludes(st);
    prove->add_flag("--expand-defs", pa.expand, "replace CON/DIR/OPP/INOPP by UNDIR first");

    auto* models = app.add_subcommand("models", "search for a countermodel");
    std::string mfrom, mgoal;
    std::optional<int> max_size;
    bool expect_none = false, expect_counter = false;
    models->add_option("--from", mfrom, "comma-separated premises");
    models->add_option("--goal", mgoal, "goal")->required();
    models->add_option("--max-size", max_size, "largest structure size (default 3)");
    auto* en = models->add_flag("--expect-none", expect_none, "exit 4 if a countermodel exists");
    models->add_flag("--expect-counter", expect_counter, "exit 4 if none exists")->excludes(en);

    auto* corpus = app.add_subcommand("corpus", "check the bundled proofs");
    std::string dir;
    corpus->add_option("--dir", dir, "corpus directory (default: OGEO_CORPUS_DIR or the bundled copy)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kParseError;
    }

    try {
        if (*check) return cmd_check(paths, keep_going, opt);
        if (*prove) return cmd_prove(pa, opt);
        if (*models) return cmd_models(mfrom, mgoal, max_size, expect_none, expect_counter, opt);
        if (*corpus) return cmd_corpus(dir, opt);
    } catch (const InputError& e) {
        std::cerr << "ogeo: " << e.what() << "\n";
        return kParseError;
    } catch (const UnknownAxiom& e) {
        std::cerr << "ogeo: " << e.what() << "\n";
        return kParseError;
    } catch (const ParseError& e) {
        std::cerr << "ogeo: " << e.what() << "\n";
        return kParseError;
    } catch (const json::exception& e) {
        std::cerr << "ogeo: config: " << e.what() << "\n";
        return kParseError;
    }
    return kPass;
}

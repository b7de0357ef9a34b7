#include <doctest.h>

#include <random>

#include "ogeo/corpus.hpp"
#include "ogeo/geometry.hpp"
#include "ogeo/kernel.hpp"
#include "ogeo/normal_form.hpp"
#include "ogeo/proof_script.hpp"
#include "ogeo/syntax.hpp"

using namespace ogeo;

namespace {

Proof script(const std::string& text) { return parse_proof_script(text); }

ProofLine line(int n, const std::string& f, Rule r, std::vector<int> cited, std::vector<Annotation> an = {}) {
    return ProofLine{n, parse_formula(f), Justification{r, std::move(cited), std::move(an)}, 0};
}

// Prefix of a proof with the given lines replaced, as check_line sees it.
Proof prefix(const std::vector<ProofLine>& lines) {
    Proof p;
    p.lines = lines;
    return p;
}

std::vector<LoadedEntry> corpus() {
    std::vector<LoadedEntry> out;
    for (const auto& e : corpus_entries()) out.push_back(load(e.id, OGEO_TEST_CORPUS_DIR));
    return out;
}

}  // namespace

TEST_SUITE("single rules") {
    TEST_CASE("MP") {
        auto so_far = prefix({line(1, "UNDIR v1 v2", Rule::Premise, {}),
                              line(2, "UNDIR v1 v2 -> (Az)[UNDIR v1 z | UNDIR v2 z]", Rule::Premise, {})});
        CHECK(check_line(so_far, line(3, "(Az)[UNDIR v1 z | UNDIR v2 z]", Rule::MP, {2, 1})).ok);
        CHECK(check_line(so_far, line(3, "(Az)[UNDIR v1 z | UNDIR v2 z]", Rule::MP, {1, 2})).ok);
        Verdict bad = check_line(prefix({line(1, "UNDIR v1 v3", Rule::Premise, {}),
                                         line(2, "UNDIR v1 v2 -> UNDIR v2 v3", Rule::Premise, {})}),
                                 line(3, "UNDIR v2 v3", Rule::MP, {2, 1}));
        CHECK_FALSE(bad.ok);
        CHECK(bad.kind == FailureKind::Rule);
        CHECK(bad.description.find("MP") != std::string::npos);
        CHECK(bad.description.find("antecedent mismatch") != std::string::npos);
    }

    TEST_CASE("MT removes a double negation") {
        auto so_far = prefix({line(1, "UNDIR v1 [rev v2]", Rule::Premise, {}),
                              line(2, "~UNDIR v4 [rev v1] & ~UNDIR v4 v2 -> ~UNDIR v1 [rev v2]", Rule::Premise, {})});
        CHECK(check_line(so_far, line(3, "~[~UNDIR v4 [rev v1] & ~UNDIR v4 v2]", Rule::MT, {1, 2})).ok);
        CHECK_FALSE(check_line(so_far, line(3, "~UNDIR v4 [rev v1]", Rule::MT, {1, 2})).ok);
    }

    TEST_CASE("IMP yields the right-nested clause") {
        auto so_far =
            prefix({line(1, "~UNDIR v2 [rev v3] & ~UNDIR v2 [rev v3] -> ~UNDIR v3 [rev [rev v3]]", Rule::Premise, {})});
        CHECK(check_line(so_far,
                         line(2, "UNDIR v2 [rev v3] | [UNDIR v2 [rev v3] | ~UNDIR v3 [rev [rev v3]]]", Rule::IMP, {1}))
                  .ok);
        // re-association is tolerated, a different disjunct is not
        CHECK(check_line(so_far,
                         line(2, "[UNDIR v2 [rev v3] | UNDIR v2 [rev v3]] | ~UNDIR v3 [rev [rev v3]]", Rule::IMP, {1}))
                  .ok);
        CHECK_FALSE(
            check_line(so_far, line(2, "UNDIR v2 [rev v3] | UNDIR v3 [rev [rev v3]]", Rule::IMP, {1})).ok);
    }

    TEST_CASE("LDS and RDS cancel the named side") {
        auto so_far = prefix({line(1, "UNDIR a b | UNDIR b c", Rule::Premise, {}), line(2, "~UNDIR a b", Rule::Premise, {}),
                              line(3, "~UNDIR b c", Rule::Premise, {})});
        CHECK(check_line(so_far, line(4, "UNDIR b c", Rule::LDS, {1, 2})).ok);
        CHECK(check_line(so_far, line(4, "UNDIR a b", Rule::RDS, {1, 3})).ok);
        CHECK_FALSE(check_line(so_far, line(4, "UNDIR b c", Rule::RDS, {1, 2})).ok);
        // negated quantifiers cancel against their dual
        auto q = prefix({line(1, "~(Ex)UNDIR x x", Rule::Premise, {}),
                         line(2, "(Ev11)UNDIR v11 v11 | UNDIR a b", Rule::Premise, {})});
        CHECK(check_line(q, line(3, "UNDIR a b", Rule::LDS, {2, 1})).ok);
    }

    TEST_CASE("SIMP reaches nested conjuncts") {
        auto so_far = prefix({line(1, "[UNDIR a b & UNDIR b c] & UNDIR c a", Rule::Premise, {})});
        CHECK(check_line(so_far, line(2, "UNDIR a b", Rule::SIMP, {1})).ok);
        CHECK(check_line(so_far, line(2, "UNDIR b c", Rule::SIMP, {1})).ok);
        CHECK(check_line(so_far, line(2, "UNDIR c a", Rule::SIMP, {1})).ok);
        CHECK_FALSE(check_line(so_far, line(2, "UNDIR a c", Rule::SIMP, {1})).ok);
    }

    TEST_CASE("De Morgan and distribution") {
        auto so_far = prefix({line(1, "~[UNDIR a b & ~UNDIR b c]", Rule::Premise, {}),
                              line(2, "~[UNDIR a b | UNDIR b c]", Rule::Premise, {}),
                              line(3, "UNDIR a a & UNDIR b b | UNDIR c c", Rule::Premise, {}),
                              line(4, "UNDIR c c | UNDIR a a & UNDIR b b", Rule::Premise, {})});
        CHECK(check_line(so_far, line(5, "~UNDIR a b | UNDIR b c", Rule::DeMorgan, {1})).ok);
        CHECK(check_line(so_far, line(5, "~UNDIR a b & ~UNDIR b c", Rule::DeMorgan, {2})).ok);
        CHECK_FALSE(check_line(so_far, line(5, "~UNDIR a b | ~UNDIR b c", Rule::DeMorgan, {1})).ok);
        CHECK(check_line(so_far, line(5, "[UNDIR a a | UNDIR c c] & [UNDIR b b | UNDIR c c]", Rule::DistributiveLaw, {3})).ok);
        CHECK(check_line(so_far, line(5, "[UNDIR c c | UNDIR a a] & [UNDIR c c | UNDIR b b]", Rule::DistributiveLaw, {4})).ok);
        CHECK_FALSE(check_line(so_far, line(5, "UNDIR a a | UNDIR c c", Rule::DistributiveLaw, {3})).ok);
    }

    TEST_CASE("US with and without annotation") {
        auto so_far = prefix({line(1, "(Ax)(Ay)[UNDIR x y | UNDIR x [rev y]]", Rule::Premise, {})});
        CHECK(check_line(so_far, line(2, "(Ay)[UNDIR v1 y | UNDIR v1 [rev y]]", Rule::US, {1}, {{Term::var("v1"), "x"}})).ok);
        CHECK(check_line(so_far, line(2, "(Ay)[UNDIR v1 y | UNDIR v1 [rev y]]", Rule::US, {1})).ok);
        CHECK_FALSE(
            check_line(so_far, line(2, "(Ay)[UNDIR v1 y | UNDIR v1 [rev y]]", Rule::US, {1}, {{Term::var("v1"), "y"}})).ok);
        auto neg = prefix({line(1, "~(Ex)UNDIR x x", Rule::Premise, {})});
        Term r = Term::app("rev", {Term::var("v2")});
        CHECK(check_line(neg, line(2, "~UNDIR [rev v2] [rev v2]", Rule::US, {1}, {{r, "x"}})).ok);
    }

    TEST_CASE("EG abstracts a disjunct") {
        auto so_far = prefix({line(1, "UNDIR v1 v1 | UNDIR a b", Rule::Premise, {})});
        CHECK(check_line(so_far, line(2, "(Ev11)UNDIR v11 v11 | UNDIR a b", Rule::EG, {1})).ok);
        CHECK(check_line(prefix({line(1, "UNDIR a b", Rule::Premise, {})}), line(2, "(Ex)UNDIR a x", Rule::EG, {1})).ok);
        CHECK_FALSE(check_line(so_far, line(2, "(Ev11)UNDIR v11 a | UNDIR a b", Rule::EG, {1})).ok);
    }

    TEST_CASE("citations must precede the line") {
        auto so_far = prefix({line(1, "UNDIR a b", Rule::Premise, {})});
        Verdict v = check_line(so_far, line(2, "UNDIR a b", Rule::Same, {2}));
        CHECK_FALSE(v.ok);
        CHECK(v.kind == FailureKind::Structure);
        CHECK_FALSE(check_line(so_far, line(2, "UNDIR a b", Rule::Same, {5})).ok);
    }
}

TEST_SUITE("whole proofs") {
    TEST_CASE("the I6 to W1 transcript and its sequent") {
        LoadedEntry a = load("A", OGEO_TEST_CORPUS_DIR);
        CheckReport r = check_proof(a.proof);
        REQUIRE(r.valid);
        CHECK(r.premises.empty());
        REQUIRE(r.conclusion);
        CHECK(equivalent(*r.conclusion, Formula::implies(axiom("I6"), axiom("W1"))));
        CHECK(r.sequent().rfind("|- ", 0) == 0);
    }

    TEST_CASE("the I6 from I7, I8 and ODO transcript") {
        LoadedEntry e = load("E", OGEO_TEST_CORPUS_DIR);
        CheckReport r = check_proof(e.proof);
        REQUIRE(r.valid);
        CHECK(e.proof.lines.size() == 52);
        Formula want = Formula::implies(
            Formula::conj(Formula::conj(axiom("I8"), axiom("ODO")), axiom("I7")), axiom("I6"));
        CHECK(equivalent(*r.conclusion, want));
    }

    TEST_CASE("a corrupted line is reported where it happens") {
        LoadedEntry a = load("A", OGEO_TEST_CORPUS_DIR);
        Proof p = a.proof;
        p.lines[7].formula = parse_formula("UNDIR v2 v2");
        CheckReport r = check_proof(p);
        CHECK_FALSE(r.valid);
        CHECK(r.failed_line == 8);
        CHECK(r.kind == FailureKind::Rule);
        CHECK(r.description.find("LDS") != std::string::npos);
        CHECK(r.description.find("mismatch") != std::string::npos);
    }

    TEST_CASE("open assumptions invalidate a proof") {
        Proof p = script(R"(
1. UNDIR a b  ASSUMED-PREMISE
2. UNDIR a b  SAME 1
)");
        CheckReport r = check_proof(p);
        CHECK_FALSE(r.valid);
        CHECK(r.kind == FailureKind::Structure);
        p.lines.push_back(line(3, "UNDIR a b -> UNDIR a b", Rule::CP, {2}));
        CHECK(check_proof(p).valid);
    }

    TEST_CASE("CP weakening discharges nothing") {
        Proof p = script(R"(
1. UNDIR a b  ASSUMED-PREMISE
2. UNDIR b c -> UNDIR a b  CP 1
3. UNDIR a b -> [UNDIR b c -> UNDIR a b]  CP 2
)");
        CheckReport r = check_proof(p);
        CHECK(r.valid);
        CHECK(r.depths == std::vector<int>{1, 1, 0});
    }

    TEST_CASE("PREMISE must be declared when premises are declared") {
        Proof p = script(R"(
PREMISE: (Ax)~UNDIR x x
1. (Ax)UNDIR x x  PREMISE
)");
        CHECK_FALSE(check_proof(p).valid);
    }

    TEST_CASE("cases: both branches, either label order") {
        const char* text = R"(
PREMISE: UNDIR a b | UNDIR b a
PREMISE: UNDIR a b -> UNDIR c c
PREMISE: UNDIR b a -> UNDIR c c
1. UNDIR a b | UNDIR b a  PREMISE
2. UNDIR a b -> UNDIR c c  PREMISE
3. UNDIR b a -> UNDIR c c  PREMISE
4. UNDIR b a  CASE1 1
5. UNDIR c c  MP 3 4
6. UNDIR a b  CASE2 1
7. UNDIR c c  MP 2 6
8. UNDIR c c  CASES 1 5 7
)";
        CheckReport r = check_proof(script(text));
        CHECK(r.valid);
        // both case frames stay open until CASES closes them together
        CHECK(r.depths == std::vector<int>{0, 0, 0, 1, 1, 2, 2, 0});

        // the second branch may reiterate the first branch's line, but a
        // conclusion resting on the other case cannot close the split
        Proof leak = script(text);
        leak.lines[6] = line(7, "UNDIR c c", Rule::Same, {5});
        CheckReport lr = check_proof(leak);
        CHECK_FALSE(lr.valid);
        CHECK(lr.failed_line == 8);
        CHECK(lr.description.find("CASES") != std::string::npos);
    }

    TEST_CASE("cases: a branch conclusion must not lean on the other case") {
        Proof p = script(R"(
PREMISE: UNDIR a b | UNDIR b a
1. UNDIR a b | UNDIR b a  PREMISE
2. UNDIR a b  CASE1 1
3. UNDIR a b  SAME 2
4. UNDIR b a  CASE2 1
5. UNDIR a b  SAME 3
6. UNDIR a b  CASES 1 3 5
)");
        CHECK_FALSE(check_proof(p).valid);
    }

    TEST_CASE("lines inside a discharged subproof are out of scope") {
        Proof p = script(R"(
1. UNDIR a b  ASSUMED-PREMISE
2. UNDIR a b  SAME 1
3. UNDIR a b -> UNDIR a b  CP 2
4. UNDIR a b  SAME 2
)");
        CheckReport r = check_proof(p);
        CHECK_FALSE(r.valid);
        CHECK(r.failed_line == 4);
        CHECK(r.kind == FailureKind::Scope);
    }

    TEST_CASE("UG refuses a variable free in an open assumption") {
        Proof p = script(R"(
1. UNDIR v1 v1  ASSUMED-PREMISE
2. (Ax)UNDIR x x  UG 1
3. UNDIR v1 v1 -> (Ax)UNDIR x x  CP 2
)");
        CheckReport r = check_proof(p);
        CHECK_FALSE(r.valid);
        CHECK(r.failed_line == 2);
        CHECK(r.description.find("UG") != std::string::npos);

        // same shape, but the assumption is discharged first: fine
        Proof ok = script(R"(
1. UNDIR v1 v1  ASSUMED-PREMISE
2. UNDIR v1 v1  SAME 1
3. UNDIR v1 v1 -> UNDIR v1 v1  CP 2
4. (Ax)[UNDIR x x -> UNDIR x x]  UG 3
)");
        CHECK(check_proof(ok).valid);
        Proof annotated = ok;
        annotated.lines[3].just.annots = {{Term::var("v1"), "x"}};
        CHECK(check_proof(annotated).valid);
    }

    TEST_CASE("UG refuses a variable free in a premise") {
        Proof p = script(R"(
PREMISE: UNDIR v1 v2
1. UNDIR v1 v2  PREMISE
2. (Ax)UNDIR x v2  UG 1
)");
        CHECK_FALSE(check_proof(p).valid);
    }

    TEST_CASE("SUB respects the arbitrary-variable condition") {
        Proof ok = script(R"(
1. UNDIR v5 [rev v6]  ASSUMED-PREMISE
2. UNDIR v5 [rev v6]  SAME 1
3. UNDIR v5 [rev v6] -> UNDIR v5 [rev v6]  CP 2
4. UNDIR v1 [rev v2] -> UNDIR v1 [rev v2]  SUB 3
)");
        CHECK(check_proof(ok).valid);
        Proof bad = script(R"(
1. UNDIR v5 [rev v6]  ASSUMED-PREMISE
2. UNDIR v1 [rev v2]  SUB 1
3. UNDIR v5 [rev v6] -> UNDIR v1 [rev v2]  CP 2
)");
        CheckReport r = check_proof(bad);
        CHECK_FALSE(r.valid);
        CHECK(r.failed_line == 2);
    }

    TEST_CASE("EE opens a branch on a fresh witness") {
        Proof p = script(R"(
PREMISE: (Ex)UNDIR x x
PREMISE: (Ax)[UNDIR x x -> UNDIR a a]
1. (Ex)UNDIR x x  PREMISE
2. (Ax)[UNDIR x x -> UNDIR a a]  PREMISE
3. UNDIR w w  EE 1
4. UNDIR w w -> UNDIR a a  US (w x) 2
5. UNDIR a a  MP 4 3
6. UNDIR a a  CASES 1 5
)");
        CHECK(check_proof(p).valid);

        // the witness may not escape into the conclusion
        Proof escape = script(R"(
PREMISE: (Ex)UNDIR x x
1. (Ex)UNDIR x x  PREMISE
2. UNDIR w w  EE 1
3. UNDIR w w  SAME 2
4. UNDIR w w  CASES 1 3
)");
        CHECK_FALSE(check_proof(escape).valid);
        // nor may it be a variable already in use
        Proof stale = script(R"(
PREMISE: (Ex)UNDIR x x
PREMISE: UNDIR w a
1. (Ex)UNDIR x x  PREMISE
2. UNDIR w a  PREMISE
3. UNDIR w w  EE 1
4. UNDIR w a  SAME 2
5. UNDIR w a  CASES 1 4
)");
        CHECK_FALSE(check_proof(stale).valid);
    }
}

TEST_SUITE("corpus properties") {
    // Every single-line substitution drawn from the same proof is rejected.
    // A mutated line that is itself derivable at its position (same rule,
    // same citations) is only caught later, when a downstream line no longer
    // follows; for those the report must still come after it, never before.
    TEST_CASE("mutation suite") {
        std::size_t mutants = 0, accepted = 0, misplaced = 0, early = 0;
        for (const auto& le : corpus()) {
            const auto& L = le.proof.lines;
            for (std::size_t i = 0; i < L.size(); ++i) {
                for (std::size_t j = 0; j < L.size(); ++j) {
                    if (equivalent(L[i].formula, L[j].formula)) continue;
                    Proof p = le.proof;
                    p.lines[i].formula = L[j].formula;
                    ++mutants;
                    CheckReport r = check_proof(p);
                    if (r.valid) {
                        ++accepted;
                        MESSAGE(le.entry.id << " line " << i + 1 << " <- " << j + 1 << " accepted");
                        continue;
                    }
                    const int at = static_cast<int>(i) + 1;
                    if (r.failed_line != 0 && r.failed_line < at) ++early;
                    if (r.failed_line == 0 || r.failed_line > at) {
                        Proof before = p;
                        before.lines.erase(before.lines.begin() + static_cast<std::ptrdiff_t>(i), before.lines.end());
                        if (!check_line(before, p.lines[i]).ok) ++misplaced;
                    }
                }
            }
        }
        CHECK(mutants > 5000);
        CHECK(accepted == 0);
        CHECK(early == 0);
        CHECK(misplaced == 0);
    }

    // Truncate a proof anywhere and append a reiteration of an earlier line
    // whose subproof has closed; the kernel must call it a scope error.
    TEST_CASE("scope discipline under random truncation") {
        std::mt19937 rng(1234);
        std::size_t probes = 0;
        for (const auto& le : corpus()) {
            CheckReport full = check_proof(le.proof);
            REQUIRE(full.valid);
            const auto& L = le.proof.lines;
            const auto& d = full.depths;
            for (int trial = 0; trial < 200; ++trial) {
                std::size_t k = std::uniform_int_distribution<std::size_t>(2, L.size())(rng);
                std::size_t j = std::uniform_int_distribution<std::size_t>(0, k - 2)(rng);
                // closed iff the depth dipped below the line's own depth in between
                bool closed = false;
                for (std::size_t m = j + 1; m < k; ++m)
                    if (d[m] < d[j]) closed = true;
                if (!closed) continue;
                Proof p = le.proof;
                p.lines.erase(p.lines.begin() + static_cast<std::ptrdiff_t>(k), p.lines.end());
                Verdict v = check_line(p, ProofLine{static_cast<int>(k) + 1, L[j].formula,
                                                    Justification{Rule::Same, {static_cast<int>(j) + 1}, {}}, 0});
                CAPTURE(le.entry.id);
                CAPTURE(j + 1);
                CAPTURE(k);
                CHECK_FALSE(v.ok);
                CHECK(v.kind == FailureKind::Scope);
                ++probes;
            }
        }
        CHECK(probes > 100);
    }

    TEST_CASE("every certified line has its depth recorded") {
        for (const auto& le : corpus()) {
            CheckReport r = check_proof(le.proof);
            CHECK(r.depths.size() == le.proof.lines.size());
            CHECK(r.depths.back() == 0);
        }
    }
}

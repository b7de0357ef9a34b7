#include <doctest.h>

#include <random>

#include "ogeo/corpus.hpp"
#include "ogeo/geometry.hpp"
#include "ogeo/kernel.hpp"
#include "ogeo/models.hpp"
#include "ogeo/syntax.hpp"
#include "support.hpp"

using namespace ogeo;

namespace {

Structure ne_structure(std::vector<int> rev) {
    Structure s = Structure::make(static_cast<int>(rev.size()));
    s.rev = std::move(rev);
    for (int a = 0; a < s.n; ++a)
        for (int b = 0; b < s.n; ++b) s.set_u(a, b, a != b);
    return s;
}

std::vector<Formula> expanded(const char* names) {
    std::vector<Formula> out;
    for (const auto& f : axioms(names)) out.push_back(expand_defs(f));
    return out;
}

}  // namespace

TEST_SUITE("evaluation") {
    TEST_CASE("fixed structures") {
        Structure swap = ne_structure({1, 0});
        CHECK(eval(swap, axiom("I5"), {}));
        Structure id = ne_structure({0, 1});
        CHECK_FALSE(eval(id, axiom("I8"), {}));
        Formula body = parse_formula("UNDIR x y | UNDIR x [rev y]");
        CHECK_FALSE(eval(id, body, {{"x", 0}, {"y", 0}}));
        CHECK(eval(id, body, {{"x", 0}, {"y", 1}}));
    }

    TEST_CASE("the direction circle satisfies the axioms") {
        Structure z = oracle::z4();
        for (const char* n : {"I5", "I6", "I7", "I8", "ODO"}) {
            CAPTURE(n);
            CHECK(eval(z, axiom(n), {}));
            CHECK(oracle::axioms().at(n)(z));
        }
    }

    TEST_CASE("evaluator agrees with hand-written oracles on every structure up to size 3") {
        std::vector<std::pair<std::string, CompiledFormula>> lib;
        for (const auto& [name, pred] : oracle::axioms()) lib.emplace_back(name, CompiledFormula(axiom(name)));
        std::size_t disagreements = 0, visited = 0;
        for (int n = 1; n <= 3; ++n)
            oracle::each_structure(n, [&](const Structure& s, std::uint64_t) {
                ++visited;
                for (const auto& [name, cf] : lib)
                    if (cf.eval(s) != oracle::axioms().at(name)(s)) ++disagreements;
                return true;
            });
        CHECK(visited == 13890);
        CHECK(disagreements == 0);
    }

    TEST_CASE("closed formulas ignore the assignment") {
        std::mt19937 rng(5);
        for (int i = 0; i < 200; ++i) {
            Structure s = structure_at(3, rng() % structure_count(3));
            for (const char* n : {"I6", "W2", "ODO"}) {
                bool base = eval(s, axiom(n), {});
                Assignment a{{"x", static_cast<int>(rng() % 3)}, {"v1", static_cast<int>(rng() % 3)}};
                CHECK(eval(s, axiom(n), a) == base);
            }
        }
    }

    TEST_CASE("errors") {
        Structure s = Structure::make(2);
        CHECK_THROWS_AS(eval(s, parse_formula("UNDIR x y"), {{"x", 0}}), UnassignedVariable);
        CHECK_THROWS(eval(s, parse_formula("UNDIR x y"), {{"x", 0}, {"y", 2}}));
        CHECK_THROWS(Structure::make(0));
        CHECK_THROWS(CompiledFormula(parse_formula("CON x x", Signature::with_definitions()), {"x"}));
    }
}

TEST_SUITE("enumeration") {
    TEST_CASE("counts") {
        CHECK(structure_count(1) == 2);
        CHECK(structure_count(2) == 64);
        CHECK(structure_count(3) == 13824);
        CHECK(structure_count(4) == 16777216);
        for (int n = 1; n <= 3; ++n) {
            std::uint64_t k = 0;
            enumerate_structures(n, [&](const Structure&) {
                ++k;
                return true;
            });
            CHECK(k == structure_count(n));
        }
    }

    TEST_CASE("documented order, each structure once") {
        for (int n = 1; n <= 3; ++n) {
            std::vector<Structure> mine;
            oracle::each_structure(n, [&](const Structure& s, std::uint64_t) {
                mine.push_back(s);
                return true;
            });
            std::uint64_t i = 0;
            bool same = true;
            enumerate_structures(n, [&](const Structure& s) {
                if (!(s == mine[i]) || structure_index(s) != i || !(structure_at(n, i) == s)) same = false;
                ++i;
                return true;
            });
            CHECK(same);
            CHECK(i == mine.size());
        }
    }

    TEST_CASE("printing") {
        Structure s = structure_at(2, 6);
        CHECK(describe_structure(s) == "size 2\nrev 0 0\nundir (0,1) (1,0)");
        CHECK(describe_structure(Structure::make(1)) == "size 1\nrev 0\nundir (none)");
    }
}

TEST_SUITE("countermodels") {
    TEST_CASE("smallest countermodels match the independent search") {
        struct Q {
            std::vector<std::string> premises;
            std::string goal;
            int max_n;
        };
        std::vector<Q> qs = {{{"I5", "I6"}, "W2", 3}, {{"I5", "I6"}, "W3", 3}, {{"I6"}, "W2", 3},
                             {{}, "I5", 1},           {{"I6"}, "W1", 3},       {{"I7", "I8", "ODO"}, "I6", 3},
                             {{"I5"}, "OO", 3},       {{"I8"}, "ODO", 3},      {{"OO"}, "I5", 3}};
        for (const auto& q : qs) {
            std::string list;
            for (const auto& p : q.premises) list += p + ",";
            CAPTURE(list);
            CAPTURE(q.goal);
            auto want = oracle::smallest_countermodel(q.premises, q.goal, q.max_n);
            auto got = find_countermodel(axioms(list), axiom(q.goal), q.max_n);
            REQUIRE(want.has_value() == got.has_value());
            if (want) {
                CHECK(got->structure.n == want->n);
                CHECK(got->index == want->index);
                CHECK(got->structure == want->s);
            }
        }
    }

    TEST_CASE("known answers") {
        auto w2 = find_countermodel(axioms("I5,I6"), axiom("W2"), 4);
        REQUIRE(w2);
        CHECK(w2->structure.n == 2);
        CHECK(w2->index == 6);
        auto w3 = find_countermodel(axioms("I5,I6"), axiom("W3"), 4);
        REQUIRE(w3);
        CHECK(w3->structure.n == 3);
        CHECK(w3->index == 682);
        auto i5 = find_countermodel({}, axiom("I5"), 1);
        REQUIRE(i5);
        CHECK(i5->structure.n == 1);
        CHECK(i5->structure.u(0, 0));
    }

    TEST_CASE("the four-line structure refutes W2 and W3 under I5 and I6") {
        Structure s = Structure::make(4);
        s.rev = {1, 0, 3, 2};
        for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}, {1, 0}, {2, 0}, {3, 0}})
            s.set_u(a, b, true);
        CHECK(eval(s, axiom("I5"), {}));
        CHECK(eval(s, axiom("I6"), {}));
        CHECK_FALSE(eval(s, axiom("W2"), {}));
        CHECK_FALSE(eval(s, axiom("W3"), {}));
        CHECK_FALSE(eval(s, parse_formula("[[~UNDIR x y | ~UNDIR x [rev y]] | UNDIR x z] | UNDIR y [rev z]"),
                         {{"x", 0}, {"y", 2}, {"z", 0}}));
        CHECK(oracle::axioms().at("I6")(s));
        CHECK_FALSE(oracle::axioms().at("W2")(s));
    }

    TEST_CASE("no countermodel where the proofs say so") {
        CHECK_FALSE(find_countermodel(axioms("I6"), axiom("W1"), 3));
        CHECK_FALSE(find_countermodel(axioms("I6"), axiom("W4"), 3));
        CHECK_FALSE(find_countermodel(axioms("I5,I6,ODO"), axiom("W2"), 3));
        CHECK_FALSE(find_countermodel(axioms("I5,I6,ODO"), axiom("W3"), 3));
        CHECK_FALSE(find_countermodel(axioms("I5,ODO"), axiom("OO"), 3));
    }

    TEST_CASE("result does not depend on the number of workers") {
        for (const char* goal : {"W2", "W3", "I8"}) {
            auto one = find_countermodel(axioms("I5,I6"), axiom(goal), 3, 1);
            auto four = find_countermodel(axioms("I5,I6"), axiom(goal), 3, 4);
            REQUIRE(one.has_value() == four.has_value());
            if (one) CHECK(one->index == four->index);
        }
        ModelSearchStats st;
        CHECK_FALSE(find_countermodel(axioms("I6"), axiom("W1"), 3, 3, &st));
        CHECK(st.structures_checked == 2 + 64 + 13824);
    }
}

TEST_SUITE("equivalence oracles") {
    TEST_CASE("I7 is the conjunction of W1 to W4") {
        auto w = w_decomposition();
        Formula all = Formula::conj(Formula::conj(Formula::conj(w[0], w[1]), w[2]), w[3]);
        CHECK_FALSE(find_disagreement(axiom("I7"), all, 3));
    }

    TEST_CASE("I7 and its Con form") { CHECK_FALSE(find_disagreement(axiom("I7"), expand_defs(axiom("I7conv")), 3)); }

    TEST_CASE("each W and its Dir/Opp form") {
        for (int i = 1; i <= 4; ++i) {
            std::string w = "W" + std::to_string(i);
            CAPTURE(w);
            CHECK_FALSE(find_disagreement(axiom(w), expand_defs(axiom(w + "dir")), 3));
        }
        CHECK_FALSE(find_disagreement(axiom("ODO"), expand_defs(axiom("ODOdir")), 3));
        CHECK_FALSE(find_disagreement(axiom("I8"), expand_defs(axiom("I8inopp")), 3));
        // and the forms are not interchangeable with each other
        CHECK(find_disagreement(axiom("W1"), expand_defs(axiom("W2dir")), 3));
    }

    TEST_CASE("I7, I8 and ODO give I6") { CHECK_FALSE(find_countermodel(axioms("I7,I8,ODO"), axiom("I6"), 3)); }

    TEST_CASE("Dir and Opp exclude each other given I8, not without it") {
        Formula excl = expand_defs(parse_formula("(Ax)(Ay)~[DIR x y & OPP x y]", Signature::with_definitions()));
        CHECK_FALSE(find_countermodel(expanded("I8"), excl, 3));
        CHECK(find_countermodel(expanded("I5,I6,I7,ODO"), excl, 3));
    }
}

TEST_SUITE("proofs and models") {
    TEST_CASE("no corpus sequent has a countermodel up to size 3") {
        for (const auto& e : corpus_entries()) {
            LoadedEntry le = load(e.id, OGEO_TEST_CORPUS_DIR);
            CheckReport r = check_proof(le.proof);
            REQUIRE(r.valid);
            CAPTURE(e.id);
            CHECK_FALSE(find_countermodel(r.premises, *r.conclusion, 3));
        }
    }
}

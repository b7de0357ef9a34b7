#pragma once

// Shared helpers for the unit tests: hand-written semantic oracles, an
// independent structure enumerator and a random formula generator.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ogeo/formula.hpp"
#include "ogeo/models.hpp"

namespace oracle {

using Pred = std::function<bool(const ogeo::Structure&)>;

inline bool all1(int n, const std::function<bool(int)>& f) {
    for (int x = 0; x < n; ++x)
        if (!f(x)) return false;
    return true;
}

// Catalog formulas written directly against the tables; nothing here goes
// through Formula or the evaluator.
inline const std::map<std::string, Pred>& axioms() {
    static const std::map<std::string, Pred> m = [] {
        std::map<std::string, Pred> o;
        o["I5"] = [](const ogeo::Structure& s) { return all1(s.n, [&](int x) { return !s.u(x, x); }); };
        o["I6"] = [](const ogeo::Structure& s) {
            return all1(s.n, [&](int x) {
                return all1(s.n, [&](int y) {
                    return !s.u(x, y) || all1(s.n, [&](int z) { return s.u(x, z) || s.u(y, z); });
                });
            });
        };
        o["I7"] = [](const ogeo::Structure& s) {
            auto con = [&](int a, int b) { return s.u(a, b) && s.u(a, s.rev[b]); };
            return all1(s.n, [&](int x) {
                return all1(s.n, [&](int y) {
                    return !con(x, y) || all1(s.n, [&](int z) { return con(x, z) || con(y, z); });
                });
            });
        };
        o["I8"] = [](const ogeo::Structure& s) {
            return all1(s.n, [&](int x) { return all1(s.n, [&](int y) { return s.u(x, y) || s.u(x, s.rev[y]); }); });
        };
        o["ODO"] = [](const ogeo::Structure& s) {
            return all1(s.n, [&](int x) {
                return all1(s.n, [&](int y) {
                    return all1(s.n, [&](int z) {
                        bool opp = !s.u(x, s.rev[y]), dir = !s.u(x, z);
                        return !(opp && dir) || !s.u(y, s.rev[z]);
                    });
                });
            });
        };
        // W_k: Con(x,y) -> [x~z | y~z] with the two halves chosen by k
        auto w = [](bool rev_x, bool rev_y) {
            return [=](const ogeo::Structure& s) {
                return all1(s.n, [&](int x) {
                    return all1(s.n, [&](int y) {
                        return all1(s.n, [&](int z) {
                            if (!(s.u(x, y) && s.u(x, s.rev[y]))) return true;
                            return s.u(x, rev_x ? s.rev[z] : z) || s.u(y, rev_y ? s.rev[z] : z);
                        });
                    });
                });
            };
        };
        o["W1"] = w(false, false);
        o["W2"] = w(false, true);
        o["W3"] = w(true, false);
        o["W4"] = w(true, true);
        o["OO"] = [](const ogeo::Structure& s) {
            return all1(s.n, [&](int x) {
                return all1(s.n, [&](int y) { return !s.u(x, s.rev[y]) || s.u(y, s.rev[x]); });
            });
        };
        return o;
    }();
    return m;
}

// Own enumeration: rev word (first entry most significant) then the undir
// bits row-major with cell (0,0) most significant.
inline void each_structure(int n, const std::function<bool(const ogeo::Structure&, std::uint64_t)>& visit) {
    std::uint64_t words = 1;
    for (int i = 0; i < n; ++i) words *= static_cast<std::uint64_t>(n);
    const int cells = n * n;
    std::uint64_t idx = 0;
    for (std::uint64_t w = 0; w < words; ++w) {
        ogeo::Structure s = ogeo::Structure::make(n);
        std::uint64_t t = w;
        for (int i = n - 1; i >= 0; --i) {
            s.rev[static_cast<std::size_t>(i)] = static_cast<int>(t % static_cast<std::uint64_t>(n));
            t /= static_cast<std::uint64_t>(n);
        }
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cells); ++bits, ++idx) {
            for (int k = 0; k < cells; ++k)
                s.undir[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((bits >> (cells - 1 - k)) & 1U);
            if (!visit(s, idx)) return;
        }
    }
}

struct Found {
    int n = 0;
    std::uint64_t index = 0;
    ogeo::Structure s;
};

inline std::optional<Found> smallest_countermodel(const std::vector<std::string>& premises, const std::string& goal,
                                                  int max_n) {
    const auto& ax = axioms();
    for (int n = 1; n <= max_n; ++n) {
        std::optional<Found> out;
        each_structure(n, [&](const ogeo::Structure& s, std::uint64_t i) {
            for (const auto& p : premises)
                if (!ax.at(p)(s)) return true;
            if (ax.at(goal)(s)) return true;
            out = Found{n, i, s};
            return false;
        });
        if (out) return out;
    }
    return std::nullopt;
}

// The direction circle: four directions, rev turns by half, lines are
// unequally directed unless identical.
inline ogeo::Structure z4() {
    ogeo::Structure s = ogeo::Structure::make(4);
    for (int d = 0; d < 4; ++d) {
        s.rev[static_cast<std::size_t>(d)] = (d + 2) % 4;
        for (int e = 0; e < 4; ++e) s.set_u(d, e, d != e);
    }
    return s;
}

}  // namespace oracle

namespace gen {

// Random formulas over UNDIR/rev with variables from a small pool.
class Formulas {
public:
    explicit Formulas(std::uint32_t seed) : rng_(seed) {}

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    ogeo::Term term(int depth) {
        static const char* vars[] = {"x", "y", "z", "v1", "v2"};
        if (depth <= 0 || pick(3) != 0) return ogeo::Term::var(vars[pick(5)]);
        return ogeo::Term::app("rev", {term(depth - 1)});
    }

    ogeo::Formula formula(int depth) {
        using F = ogeo::Formula;
        if (depth <= 0) {
            ogeo::Term a = term(2);
            return F::atom("UNDIR", {a, term(2)});
        }
        static const char* bound[] = {"x", "y", "z"};
        static const F::Kind bin[] = {F::Kind::And, F::Kind::Or, F::Kind::Implies};
        // sequenced explicitly so the stream does not depend on argument evaluation order
        switch (int c = pick(6); c) {
            case 0: {
                ogeo::Term a = term(2);
                return F::atom("UNDIR", {a, term(2)});
            }
            case 1: return F::negation(formula(depth - 1));
            case 2:
            case 3: {
                F a = formula(depth - 1);
                return F::binary(bin[pick(3)], a, formula(depth - 1));
            }
            default: {
                std::string v = bound[pick(3)];
                return F::quant(c == 4 ? F::Kind::Forall : F::Kind::Exists, v, formula(depth - 1));
            }
        }
    }

    // Renames every binder to a fresh name; the result is alpha-equivalent.
    ogeo::Formula rename_binders(const ogeo::Formula& f) {
        using F = ogeo::Formula;
        switch (f.kind()) {
            case F::Kind::Atom: return f;
            case F::Kind::Not: return F::negation(rename_binders(f.body()));
            case F::Kind::Forall:
            case F::Kind::Exists: {
                std::string fresh = "b" + std::to_string(counter_++);
                F body = ogeo::substitute(f.body(), ogeo::Bindings{{f.var(), ogeo::Term::var(fresh)}});
                return F::quant(f.kind(), fresh, rename_binders(body));
            }
            default: return F::binary(f.kind(), rename_binders(f.lhs()), rename_binders(f.rhs()));
        }
    }

private:
    std::mt19937 rng_;
    int counter_ = 0;
};

}  // namespace gen

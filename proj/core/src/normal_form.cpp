#include "ogeo/normal_form.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "ogeo/syntax.hpp"

namespace ogeo {

Formula neg(const Formula& f) {
    if (f.is(Formula::Kind::Not)) return f.body();
    return Formula::negation(f);
}

namespace {
void flatten_into(const Formula& f, Formula::Kind k, std::vector<Formula>& out) {
    if (f.is(k)) {
        flatten_into(f.lhs(), k, out);
        flatten_into(f.rhs(), k, out);
    } else {
        out.push_back(f);
    }
}
}  // namespace

std::vector<Formula> flatten(const Formula& f, Formula::Kind k) {
    std::vector<Formula> out;
    flatten_into(f, k, out);
    return out;
}

Formula build_right(Formula::Kind k, const std::vector<Formula>& parts) {
    if (parts.empty()) throw std::invalid_argument("build_right: empty list");
    Formula acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Formula::binary(k, parts[i], acc);
    return acc;
}

Formula build_left(Formula::Kind k, const std::vector<Formula>& parts) {
    if (parts.empty()) throw std::invalid_argument("build_left: empty list");
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::binary(k, acc, parts[i]);
    return acc;
}

namespace {

Formula canon_rec(const Formula& f);

Formula canon_not(const Formula& inner) {
    switch (inner.kind()) {
        case Formula::Kind::Not:
            return canon_rec(inner.body());
        case Formula::Kind::Exists:
            return Formula::forall(inner.var(), canon_not(inner.body()));
        case Formula::Kind::Forall:
            return Formula::exists(inner.var(), canon_not(inner.body()));
        default:
            return Formula::negation(canon_rec(inner));
    }
}

Formula canon_rec(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
            return f;
        case Formula::Kind::Not:
            return canon_not(f.body());
        case Formula::Kind::Forall:
        case Formula::Kind::Exists:
            return Formula::quant(f.kind(), f.var(), canon_rec(f.body()));
        case Formula::Kind::Implies:
            return Formula::implies(canon_rec(f.lhs()), canon_rec(f.rhs()));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<std::pair<std::string, Formula>> keyed;
            for (const auto& part : flatten(f, f.kind())) {
                Formula c = canon_rec(part);
                // A canonical child may itself be a same-kind chain (e.g. ~~[a & b]).
                for (const auto& sub : flatten(c, f.kind())) keyed.emplace_back(print_formula(sub), sub);
            }
            std::stable_sort(keyed.begin(), keyed.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            std::vector<Formula> parts;
            parts.reserve(keyed.size());
            for (auto& kv : keyed) parts.push_back(std::move(kv.second));
            return build_right(f.kind(), parts);
        }
    }
    return f;
}

}  // namespace

Formula canonical(const Formula& f) { return canon_rec(alpha_normalize(f)); }

std::string canonical_key(const Formula& f) { return print_formula(canonical(f)); }

bool equivalent(const Formula& a, const Formula& b) {
    if (a == b) return true;
    return canonical_key(a) == canonical_key(b);
}

bool contradicts(const Formula& a, const Formula& b) {
    return canonical_key(Formula::negation(a)) == canonical_key(b) ||
           canonical_key(Formula::negation(b)) == canonical_key(a);
}

}  // namespace ogeo

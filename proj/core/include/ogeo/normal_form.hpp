#pragma once

#include <string>
#include <vector>

#include "ogeo/formula.hpp"

namespace ogeo {

// Complement with double-negation removal: neg(~X) = X, neg(X) = ~X.
Formula neg(const Formula& f);

// Children of a maximal same-kind And/Or chain, left to right.
std::vector<Formula> flatten(const Formula& f, Formula::Kind k);
// [a | [b | c]] style rebuild; requires a non-empty list.
Formula build_right(Formula::Kind k, const std::vector<Formula>& parts);
Formula build_left(Formula::Kind k, const std::vector<Formula>& parts);

// Representative modulo alpha-renaming, double negation, negated quantifiers,
// and associativity/commutativity of & and |.
Formula canonical(const Formula& f);
std::string canonical_key(const Formula& f);

bool equivalent(const Formula& a, const Formula& b);
// a and b are complementary under the same conventions.
bool contradicts(const Formula& a, const Formula& b);

}  // namespace ogeo

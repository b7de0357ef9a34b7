#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ogeo/formula.hpp"

namespace ogeo {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Accepts `v`, `[rev t]` and `rev(t)`.
Term parse_term(std::string_view src, const Signature& sig = Signature::geometry());
Formula parse_formula(std::string_view src, const Signature& sig = Signature::geometry());

// Bracket notation used inside formulas: `[rev v2]`.
std::string print_term(const Term& t);
// Call notation used in rule annotations: `rev(v2)`.
std::string print_term_call(const Term& t);
std::string print_formula(const Formula& f);

bool is_identifier(std::string_view s);

}  // namespace ogeo

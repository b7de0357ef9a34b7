#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ogeo/kernel.hpp"

namespace ogeo {

// Script-level parse failure; `line` is the 1-based source line.
class ScriptError : public std::runtime_error {
public:
    ScriptError(const std::string& msg, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Text format:
//   # comment
//   PREMISE: <formula>        (repeatable)
//   SHOW: <formula>
//   N. <formula>  RULE [(term var)...] [cited...]
// Wrapped lines are joined until the next numbered or header line.
Proof parse_proof_script(std::string_view text, const Signature& sig = Signature::geometry());

// Parses the text after the rule keyword: annotations then cited line numbers.
// Returns false if the tail is not of that shape.
bool parse_justification_tail(std::string_view tail, const Signature& sig, Justification& out);

std::string format_justification(const Justification& j);
std::string format_proof_line(const ProofLine& l);
std::string format_proof_script(const Proof& p, const std::vector<std::string>& comments = {});

}  // namespace ogeo

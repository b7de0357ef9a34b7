#include "ogeo/proof_script.hpp"

#include <cctype>
#include <charconv>

#include "ogeo/syntax.hpp"

namespace ogeo {

namespace {

bool space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && space(s.front())) s.remove_prefix(1);
    while (!s.empty() && space(s.back())) s.remove_suffix(1);
    return s;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
    return true;
}

// "12. rest" -> 12, rest
bool numbered(std::string_view s, int& number, std::string_view& rest) {
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == 0 || i >= s.size() || s[i] != '.') return false;
    if (i + 1 < s.size() && !space(s[i + 1])) return false;
    auto r = std::from_chars(s.data(), s.data() + i, number);
    if (r.ec != std::errc()) return false;
    rest = s.substr(i + 1);
    return true;
}

enum class Header { None, Premise, Show };

Header header(std::string_view s, std::string_view& rest) {
    if (starts_with_ci(s, "PREMISE:")) {
        rest = s.substr(8);
        return Header::Premise;
    }
    if (starts_with_ci(s, "SHOW:")) {
        rest = s.substr(5);
        return Header::Show;
    }
    return Header::None;
}

struct Chunk {
    int source_line;
    Header kind;  // None means a numbered proof line
    int number = 0;
    std::string text;
};

// Splits a parenthesised annotation body "rev(v2) y" / "[rev v2] y" into term and variable.
bool parse_annotation(std::string_view body, const Signature& sig, Annotation& out) {
    body = trim(body);
    std::size_t cut = body.size();
    while (cut > 0 && !space(body[cut - 1])) --cut;
    if (cut == 0) return false;
    std::string_view var = body.substr(cut);
    std::string_view term = trim(body.substr(0, cut));
    if (!is_identifier(var) || term.empty()) return false;
    try {
        out.term = parse_term(term, sig);
    } catch (const ParseError&) {
        return false;
    }
    out.var = std::string(var);
    return true;
}

}  // namespace

bool parse_justification_tail(std::string_view tail, const Signature& sig, Justification& out) {
    std::vector<Annotation> annots;
    std::vector<int> cited;
    std::size_t i = 0;
    while (i < tail.size()) {
        if (space(tail[i])) {
            ++i;
            continue;
        }
        if (tail[i] == '(') {
            if (!cited.empty()) return false;
            int level = 0;
            std::size_t j = i;
            for (; j < tail.size(); ++j) {
                if (tail[j] == '(') ++level;
                if (tail[j] == ')' && --level == 0) break;
            }
            if (j >= tail.size()) return false;
            Annotation a{Term::var("_"), ""};
            if (!parse_annotation(tail.substr(i + 1, j - i - 1), sig, a)) return false;
            annots.push_back(std::move(a));
            i = j + 1;
            continue;
        }
        std::size_t j = i;
        while (j < tail.size() && std::isdigit(static_cast<unsigned char>(tail[j]))) ++j;
        if (j == i || (j < tail.size() && !space(tail[j]))) return false;
        int n = 0;
        if (std::from_chars(tail.data() + i, tail.data() + j, n).ec != std::errc()) return false;
        cited.push_back(n);
        i = j;
    }
    out.annots = std::move(annots);
    out.cited = std::move(cited);
    return true;
}

Proof parse_proof_script(std::string_view text, const Signature& sig) {
    std::vector<Chunk> chunks;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        std::string_view s = trim(raw);
        if (s.empty() || s.front() == '#') continue;
        std::string_view rest;
        int number = 0;
        if (Header h = header(s, rest); h != Header::None) {
            chunks.push_back({lineno, h, 0, std::string(trim(rest))});
        } else if (numbered(s, number, rest)) {
            chunks.push_back({lineno, Header::None, number, std::string(trim(rest))});
        } else {
            if (chunks.empty()) throw ScriptError("text before the first numbered line or header", lineno);
            chunks.back().text += ' ';
            chunks.back().text += s;
        }
    }

    Proof proof;
    for (const auto& c : chunks) {
        if (c.kind != Header::None) {
            Formula f = [&] {
                try {
                    return parse_formula(c.text, sig);
                } catch (const ParseError& e) {
                    throw ScriptError(e.what(), c.source_line);
                }
            }();
            if (c.kind == Header::Premise) {
                proof.premises.push_back(f);
            } else {
                if (proof.show) throw ScriptError("duplicate SHOW header", c.source_line);
                proof.show = f;
            }
            continue;
        }
        // Try rule keywords from the right; the formula is whatever precedes the match.
        std::string_view body = c.text;
        std::optional<ProofLine> line;
        std::string formula_error = "missing rule justification";
        std::size_t end = body.size();
        while (end > 0) {
            std::size_t stop = end;
            while (stop > 0 && space(body[stop - 1])) --stop;
            std::size_t start = stop;
            while (start > 0 && !space(body[start - 1])) --start;
            if (start == stop) break;
            std::string_view word = body.substr(start, stop - start);
            end = start;
            auto rule = rule_from_name(word);
            if (!rule || start == 0 || !space(body[start - 1])) continue;
            Justification j;
            j.rule = *rule;
            if (!parse_justification_tail(body.substr(stop), sig, j)) continue;
            try {
                Formula f = parse_formula(body.substr(0, start), sig);
                line = ProofLine{c.number, f, j, 0};
                break;
            } catch (const ParseError& e) {
                formula_error = e.what();
            }
        }
        if (!line) throw ScriptError("line " + std::to_string(c.number) + ": " + formula_error, c.source_line);
        proof.lines.push_back(std::move(*line));
    }
    return proof;
}

std::string format_justification(const Justification& j) {
    std::string s(rule_name(j.rule));
    for (const auto& a : j.annots) s += " (" + print_term_call(a.term) + " " + a.var + ")";
    for (int n : j.cited) s += " " + std::to_string(n);
    return s;
}

std::string format_proof_line(const ProofLine& l) {
    return std::to_string(l.number) + ". " + print_formula(l.formula) + "  " + format_justification(l.just);
}

std::string format_proof_script(const Proof& p, const std::vector<std::string>& comments) {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    for (const auto& f : p.premises) out += "PREMISE: " + print_formula(f) + "\n";
    if (p.show) out += "SHOW: " + print_formula(*p.show) + "\n";
    if (!comments.empty() || !p.premises.empty() || p.show) out += "\n";
    for (const auto& l : p.lines) out += format_proof_line(l) + "\n";
    return out;
}

}  // namespace ogeo

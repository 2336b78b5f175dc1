#ifndef SEMMT_REGEX_PARSER_HPP
#define SEMMT_REGEX_PARSER_HPP

#include <cctype>
#include <string>
#include <string_view>

#include <semmt/alphabet.hpp>
#include <semmt/errors.hpp>
#include <semmt/regex_ast.hpp>

namespace semmt {

namespace detail {

class RegexParser {
public:
    RegexParser(std::string_view text, const Alphabet& alphabet)
        : text_(text), alphabet_(alphabet) {}

    RegexAst parse() {
        skip_ws();
        if (at_end()) throw SyntaxError(0, "empty regex");
        RegexAst ast = parse_disjunction();
        skip_ws();
        if (!at_end()) throw SyntaxError(pos_, "unexpected '" + std::string(1, text_[pos_]) + "'");
        return ast;
    }

private:
    RegexAst parse_disjunction() {
        RegexAst ast = parse_intersection();
        while (peek('|')) {
            advance();
            ast = make_disjunction(ast, parse_intersection());
        }
        return ast;
    }

    RegexAst parse_intersection() {
        RegexAst ast = parse_concat();
        while (peek('&')) {
            advance();
            ast = make_intersection(ast, parse_concat());
        }
        return ast;
    }

    RegexAst parse_concat() {
        RegexAst ast = parse_negation();
        while (starts_factor()) {
            ast = make_concat(ast, parse_negation());
        }
        return ast;
    }

    RegexAst parse_negation() {
        skip_ws();
        if (peek('~')) {
            advance();
            return make_negation(parse_negation());
        }
        return parse_postfix();
    }

    RegexAst parse_postfix() {
        RegexAst ast = parse_primary();
        for (;;) {
            skip_ws();
            if (peek('?')) {
                advance();
                ast = make_repeat(ast, 0, 1);
            } else if (peek('*')) {
                advance();
                ast = make_repeat(ast, 0, kInfinity);
            } else if (peek('+')) {
                advance();
                ast = make_repeat(ast, 1, kInfinity);
            } else if (peek('{')) {
                ast = parse_braces(ast);
            } else {
                return ast;
            }
        }
    }

    RegexAst parse_braces(RegexAst child) {
        std::size_t open = pos_;
        advance();  // '{'
        int min = parse_number();
        int max = min;
        skip_ws();
        if (peek(',')) {
            advance();
            skip_ws();
            max = std::isdigit(cur()) ? parse_number() : kInfinity;
        }
        skip_ws();
        if (!peek('}')) throw SyntaxError(open, "unclosed quantifier brace");
        advance();
        if (max != kInfinity && min > max) {
            throw SyntaxError(open, "quantifier min exceeds max");
        }
        return make_repeat(std::move(child), min, max);
    }

    RegexAst parse_primary() {
        skip_ws();
        if (at_end()) throw SyntaxError(pos_, "expected expression");
        if (peek('(')) {
            std::size_t open = pos_;
            advance();
            RegexAst inner = parse_disjunction();
            skip_ws();
            if (!peek(')')) throw SyntaxError(open, "unbalanced parenthesis");
            advance();
            return inner;
        }
        if (peek('[')) return parse_class();
        if (match_utf8("ε")) return make_epsilon();
        if (match_utf8("∅")) return make_empty();
        char c = cur();
        SymbolId s = alphabet_.find(c);
        if (s < 0) throw SyntaxError(pos_, "symbol outside alphabet: '" + std::string(1, c) + "'");
        advance();
        return make_literal(s);
    }

    RegexAst parse_class() {
        std::size_t open = pos_;
        advance();  // '['
        SymbolSet cls;
        std::string raw;
        while (!at_end() && !peek(']')) {
            char c = cur();
            SymbolId lo = alphabet_.find(c);
            if (lo < 0) {
                throw SyntaxError(pos_, c == '[' || c == '{' || c == '('
                                            ? "unclosed character class"
                                            : "symbol outside alphabet in class");
            }
            raw += c;
            advance();
            if (peek('-') && pos_ + 1 < text_.size() && text_[pos_ + 1] != ']') {
                advance();
                SymbolId hi = alphabet_.find(cur());
                if (hi < 0) throw SyntaxError(pos_, "symbol outside alphabet in class");
                if (hi < lo) throw SyntaxError(pos_, "descending class range");
                raw += "-";
                raw += cur();
                advance();
                for (SymbolId i = lo; i <= hi; ++i) cls.insert(i);
            } else {
                cls.insert(lo);
            }
        }
        if (!peek(']')) throw SyntaxError(open, "unclosed character class");
        advance();
        if (cls.empty()) throw SyntaxError(open, "empty character class");
        // A lone reserved abstract name, e.g. [Y], denotes the abstract symbol.
        if (raw.size() >= 1 && alphabet_.reserved(raw) >= 0) return make_abstract(raw);
        return make_class(std::move(cls), alphabet_);
    }

    int parse_number() {
        skip_ws();
        if (at_end() || !std::isdigit(cur())) throw SyntaxError(pos_, "expected number");
        long v = 0;
        while (!at_end() && std::isdigit(cur())) {
            v = v * 10 + (cur() - '0');
            if (v > 1'000'000) throw SyntaxError(pos_, "quantifier bound too large");
            advance();
        }
        return static_cast<int>(v);
    }

    [[nodiscard]] bool starts_factor() {
        skip_ws();
        if (at_end()) return false;
        char c = cur();
        if (c == '(' || c == '[' || c == '~') return true;
        if (c == '|' || c == '&' || c == ')' || c == ']' || c == '}' || c == '{' ||
            c == '?' || c == '*' || c == '+' || c == ',')
            return false;
        return true;  // literal, ε, ∅ or an error caught in parse_primary
    }

    [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
    [[nodiscard]] char cur() const { return text_[pos_]; }
    [[nodiscard]] bool peek(char c) const { return !at_end() && text_[pos_] == c; }
    void advance() { ++pos_; }
    void skip_ws() {
        while (!at_end() && (cur() == ' ' || cur() == '\t')) advance();
    }

    bool match_utf8(std::string_view tok) {
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    std::string_view text_;
    const Alphabet& alphabet_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse regex text into a desugared AST. Sugar forms ?, *, +, {i}, {m,}
/// desugar to Repeat; precedence, tightest first: repetition, negation,
/// concatenation, intersection, disjunction.
inline RegexAst parse_regex(std::string_view text, const Alphabet& alphabet) {
    return detail::RegexParser(text, alphabet).parse();
}

}  // namespace semmt

#endif  // SEMMT_REGEX_PARSER_HPP

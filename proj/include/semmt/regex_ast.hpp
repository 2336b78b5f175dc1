#ifndef SEMMT_REGEX_AST_HPP
#define SEMMT_REGEX_AST_HPP

#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <semmt/alphabet.hpp>
#include <semmt/errors.hpp>

namespace semmt {

/// Upper repeat bound standing for infinity; compares greater than any
/// reachable finite bound.
constexpr int kInfinity = std::numeric_limits<int>::max();

enum class NodeKind {
    Empty,         // ∅
    Epsilon,       // ε
    Literal,       // single symbol
    CharClass,     // [C], nonempty symbol set
    Abstract,      // reserved abstract symbol, e.g. Y
    Concat,
    Disjunction,   // r1|r2
    Intersection,  // r1&r2
    Negation,      // ~r
    Repeat,        // r{m,n}
};

struct RegexNode;
using RegexAst = std::shared_ptr<const RegexNode>;

struct RegexNode {
    NodeKind kind;
    SymbolId symbol = -1;     // Literal
    SymbolSet cls;            // CharClass
    std::string name;         // Abstract
    RegexAst left, right;     // Concat/Disjunction/Intersection
    RegexAst child;           // Negation/Repeat
    int min = 0, max = 0;     // Repeat bounds, max may be kInfinity
};

inline RegexAst make_empty() {
    static RegexAst n = std::make_shared<RegexNode>(RegexNode{NodeKind::Empty});
    return n;
}

inline RegexAst make_epsilon() {
    static RegexAst n = std::make_shared<RegexNode>(RegexNode{NodeKind::Epsilon});
    return n;
}

inline RegexAst make_literal(SymbolId s) {
    RegexNode n{NodeKind::Literal};
    n.symbol = s;
    return std::make_shared<RegexNode>(std::move(n));
}

inline RegexAst make_abstract(std::string name) {
    RegexNode n{NodeKind::Abstract};
    n.name = std::move(name);
    return std::make_shared<RegexNode>(std::move(n));
}

/// Character class; singleton sets canonicalize to Literal (or Abstract when
/// the lone symbol is a reserved abstract symbol).
inline RegexAst make_class(SymbolSet cls, const Alphabet& alphabet) {
    if (cls.empty()) throw InvalidParameter("empty character class");
    if (cls.size() == 1) {
        SymbolId s = *cls.begin();
        if (alphabet.is_reserved(s)) return make_abstract(alphabet.name(s));
        return make_literal(s);
    }
    RegexNode n{NodeKind::CharClass};
    n.cls = std::move(cls);
    return std::make_shared<RegexNode>(std::move(n));
}

inline RegexAst make_binary(NodeKind kind, RegexAst l, RegexAst r) {
    RegexNode n{kind};
    n.left = std::move(l);
    n.right = std::move(r);
    return std::make_shared<RegexNode>(std::move(n));
}

inline RegexAst make_concat(RegexAst l, RegexAst r) {
    return make_binary(NodeKind::Concat, std::move(l), std::move(r));
}
inline RegexAst make_disjunction(RegexAst l, RegexAst r) {
    return make_binary(NodeKind::Disjunction, std::move(l), std::move(r));
}
inline RegexAst make_intersection(RegexAst l, RegexAst r) {
    return make_binary(NodeKind::Intersection, std::move(l), std::move(r));
}

inline RegexAst make_negation(RegexAst c) {
    RegexNode n{NodeKind::Negation};
    n.child = std::move(c);
    return std::make_shared<RegexNode>(std::move(n));
}

inline RegexAst make_repeat(RegexAst c, int min, int max) {
    if (min < 0 || max < min) throw InvalidParameter("repeat bounds require 0 <= min <= max");
    RegexNode n{NodeKind::Repeat};
    n.child = std::move(c);
    n.min = min;
    n.max = max;
    return std::make_shared<RegexNode>(std::move(n));
}

inline bool ast_equal(const RegexAst& a, const RegexAst& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Empty:
        case NodeKind::Epsilon: return true;
        case NodeKind::Literal: return a->symbol == b->symbol;
        case NodeKind::CharClass: return a->cls == b->cls;
        case NodeKind::Abstract: return a->name == b->name;
        case NodeKind::Concat:
        case NodeKind::Disjunction:
        case NodeKind::Intersection:
            return ast_equal(a->left, b->left) && ast_equal(a->right, b->right);
        case NodeKind::Negation: return ast_equal(a->child, b->child);
        case NodeKind::Repeat:
            return a->min == b->min && a->max == b->max && ast_equal(a->child, b->child);
    }
    return false;
}

/// Structural key; used for canonical ordering and hashing of ASTs.
inline void ast_key(const RegexAst& a, std::string& out) {
    switch (a->kind) {
        case NodeKind::Empty: out += "0"; return;
        case NodeKind::Epsilon: out += "e"; return;
        case NodeKind::Literal:
            out += "l" + std::to_string(a->symbol) + ";";
            return;
        case NodeKind::CharClass:
            out += "c";
            for (SymbolId s : a->cls) out += std::to_string(s) + ",";
            out += ";";
            return;
        case NodeKind::Abstract: out += "a" + a->name + ";"; return;
        case NodeKind::Concat:
            out += ".(";
            ast_key(a->left, out);
            ast_key(a->right, out);
            out += ")";
            return;
        case NodeKind::Disjunction:
            out += "|(";
            ast_key(a->left, out);
            ast_key(a->right, out);
            out += ")";
            return;
        case NodeKind::Intersection:
            out += "&(";
            ast_key(a->left, out);
            ast_key(a->right, out);
            out += ")";
            return;
        case NodeKind::Negation:
            out += "~(";
            ast_key(a->child, out);
            out += ")";
            return;
        case NodeKind::Repeat:
            out += "r" + std::to_string(a->min) + "," +
                   (a->max == kInfinity ? std::string("inf") : std::to_string(a->max)) + "(";
            ast_key(a->child, out);
            out += ")";
            return;
    }
}

inline std::string ast_key(const RegexAst& a) {
    std::string out;
    ast_key(a, out);
    return out;
}

/// One token of the rendered form. Terminals (a whole character class, a
/// literal, an abstract symbol, ε, ∅) are single tokens, each quantifier bound
/// is a single token, and every punctuation mark is its own token.
using TokenSeq = std::vector<std::string>;

namespace detail {

// Precedence, tightest first: repeat > negation > concat > intersection >
// disjunction. Parentheses override.
enum Prec { kDisj = 0, kInter = 1, kConcat = 2, kNeg = 3, kRepeat = 4, kAtom = 5 };

inline Prec node_prec(const RegexAst& a) {
    switch (a->kind) {
        case NodeKind::Disjunction: return kDisj;
        case NodeKind::Intersection: return kInter;
        case NodeKind::Concat: return kConcat;
        case NodeKind::Negation: return kNeg;
        case NodeKind::Repeat: return kRepeat;
        default: return kAtom;
    }
}

inline std::string class_text(const SymbolSet& cls, const Alphabet& alphabet) {
    for (const char* name : {"upper", "lower", "digit", "letter", "alnum"}) {
        if (cls == alphabet.named_class(name)) {
            if (cls == alphabet.named_class("upper")) return "[A-Z]";
            if (cls == alphabet.named_class("lower")) return "[a-z]";
            if (cls == alphabet.named_class("digit")) return "[0-9]";
            if (cls == alphabet.named_class("letter")) return "[A-Za-z]";
            return "[A-Za-z0-9]";
        }
    }
    // Run-length compression over consecutive symbol ids.
    std::string out = "[";
    auto it = cls.begin();
    while (it != cls.end()) {
        SymbolId lo = *it, hi = lo;
        auto next = std::next(it);
        while (next != cls.end() && *next == hi + 1 &&
               alphabet.name(*next).size() == 1 && !alphabet.is_reserved(*next)) {
            hi = *next;
            ++next;
        }
        if (hi - lo >= 2) {
            out += alphabet.name(lo) + "-" + alphabet.name(hi);
        } else {
            for (SymbolId s = lo; s <= hi; ++s) out += alphabet.name(s);
        }
        it = next;
    }
    return out + "]";
}

inline void emit_tokens(const RegexAst& a, const Alphabet& alphabet, Prec parent,
                        TokenSeq& out) {
    Prec mine = node_prec(a);
    bool parens = mine < parent;
    if (parens) out.push_back("(");
    switch (a->kind) {
        case NodeKind::Empty: out.push_back("∅"); break;
        case NodeKind::Epsilon: out.push_back("ε"); break;
        case NodeKind::Literal: out.push_back(alphabet.name(a->symbol)); break;
        case NodeKind::CharClass: out.push_back(class_text(a->cls, alphabet)); break;
        case NodeKind::Abstract: out.push_back("[" + a->name + "]"); break;
        case NodeKind::Concat:
            // Left-associative: a right-nested concat needs parentheses.
            emit_tokens(a->left, alphabet, kConcat, out);
            emit_tokens(a->right, alphabet, static_cast<Prec>(kConcat + 1), out);
            break;
        case NodeKind::Disjunction:
            emit_tokens(a->left, alphabet, kDisj, out);
            out.push_back("|");
            emit_tokens(a->right, alphabet, static_cast<Prec>(kDisj + 1), out);
            break;
        case NodeKind::Intersection:
            emit_tokens(a->left, alphabet, kInter, out);
            out.push_back("&");
            emit_tokens(a->right, alphabet, static_cast<Prec>(kInter + 1), out);
            break;
        case NodeKind::Negation:
            out.push_back("~");
            emit_tokens(a->child, alphabet, kNeg, out);
            break;
        case NodeKind::Repeat:
            emit_tokens(a->child, alphabet, kAtom, out);
            out.push_back("{");
            out.push_back(std::to_string(a->min));
            if (a->max == kInfinity) {
                out.push_back(",");
            } else if (a->max != a->min) {
                out.push_back(",");
                out.push_back(std::to_string(a->max));
            }
            out.push_back("}");
            break;
    }
    if (parens) out.push_back(")");
}

}  // namespace detail

/// Deterministic token stream of the canonical rendering.
inline TokenSeq tokenize_regex(const RegexAst& ast, const Alphabet& alphabet) {
    TokenSeq out;
    detail::emit_tokens(ast, alphabet, detail::kDisj, out);
    return out;
}

/// Canonical text with minimal parenthesization; parse(render(ast))
/// structurally equals ast.
inline std::string render_regex(const RegexAst& ast, const Alphabet& alphabet) {
    std::string out;
    for (const auto& tok : tokenize_regex(ast, alphabet)) out += tok;
    return out;
}

}  // namespace semmt

#endif  // SEMMT_REGEX_AST_HPP

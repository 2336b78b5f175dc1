#ifndef SEMMT_NL2REGEX_HPP
#define SEMMT_NL2REGEX_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <semmt/alphabet.hpp>
#include <semmt/errors.hpp>
#include <semmt/lexicon.hpp>
#include <semmt/regex_ast.hpp>

namespace semmt {

enum class VagueMode { over, under, context };

namespace nl {

enum class ItemKind { Terminal, Quantifier, Vague, Logic, Number, AbstractSym, Filler };

struct Item {
    ItemKind kind;
    std::string text;          // original-case phrase text
    std::string payload;       // terminal payload / vague anchor
    Bounds bounds;             // Quantifier
    LogicOp op = LogicOp::Disjunction;  // Logic
    long number = -1;          // Number
    std::string symbol;        // AbstractSym name
};

}  // namespace nl

/// A sentence after abstraction: the matched item skeleton plus the bindings
/// of abstract symbols to their original spans.
struct AbstractedSentence {
    std::string original;
    std::vector<nl::Item> items;
    std::map<std::string, std::string> bindings;  // symbol -> original phrase

    /// Skeleton with abstract spans replaced by [X]-style placeholders.
    [[nodiscard]] std::string skeleton() const {
        std::string out;
        for (const auto& it : items) {
            if (!out.empty()) out += ' ';
            out += it.kind == nl::ItemKind::AbstractSym ? "[" + it.symbol + "]" : it.text;
        }
        return out;
    }

    /// Original token text recovered by substituting bindings back in.
    [[nodiscard]] std::string resubstitute() const {
        std::string out;
        for (const auto& it : items) {
            if (!out.empty()) out += ' ';
            out += it.kind == nl::ItemKind::AbstractSym ? bindings.at(it.symbol) : it.text;
        }
        return out;
    }

    [[nodiscard]] bool has_vague() const {
        for (const auto& it : items)
            if (it.kind == nl::ItemKind::Vague) return true;
        return false;
    }
};

namespace nl {

struct Word {
    std::string original;
    std::string folded;
};

inline std::vector<Word> sentence_words(const std::string& text) {
    std::vector<Word> words;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) return;
        // strip sentence punctuation at the edges but keep inner dots (U.S., 19.6%)
        while (!cur.empty() && (cur.back() == '.' || cur.back() == ',' || cur.back() == ';' ||
                                cur.back() == '!' || cur.back() == '?'))
            cur.pop_back();
        if (!cur.empty()) {
            Word w{cur, cur};
            std::transform(w.folded.begin(), w.folded.end(), w.folded.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            words.push_back(std::move(w));
        }
        cur.clear();
    };
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            cur += c;
        }
    }
    flush();
    return words;
}

}  // namespace nl

/// Identify quantifier/logic non-terminals and replace the noun phrases they
/// group by fresh abstract symbols (X, Y, ... in textual order). Phrases
/// already in the terminal map are not abstracted.
inline AbstractedSentence abstract_sentence(const std::string& text, const Lexicon& lex,
                                            const Alphabet& alphabet = *standard_alphabet()) {
    if (text.empty()) throw EmptyInput();
    auto words = nl::sentence_words(text);
    std::vector<std::string> folded;
    folded.reserve(words.size());
    for (const auto& w : words) folded.push_back(w.folded);

    // First pass: classify token spans via longest-match lexicon lookup.
    struct RawItem {
        nl::Item item;
        bool unknown = false;
    };
    std::vector<RawItem> raw;
    std::size_t pos = 0;
    while (pos < words.size()) {
        auto m = lex.match(folded, pos);
        if (m) {
            nl::Item it;
            std::string orig;
            for (std::size_t i = 0; i < m->length; ++i)
                orig += (i ? " " : "") + words[pos + i].original;
            it.text = orig;
            switch (m->entry->kind) {
                case PhraseKind::Terminal:
                    it.kind = nl::ItemKind::Terminal;
                    it.payload = m->entry->payload;
                    break;
                case PhraseKind::Quantifier:
                    it.kind = nl::ItemKind::Quantifier;
                    it.bounds = Lexicon::quantifier_bounds(*m);
                    break;
                case PhraseKind::Vague:
                    it.kind = nl::ItemKind::Vague;
                    it.payload = m->entry->payload;
                    break;
                case PhraseKind::Logic:
                    it.kind = nl::ItemKind::Logic;
                    it.op = Lexicon::logic_op(m->entry->payload);
                    break;
                case PhraseKind::Filler:
                    it.kind = nl::ItemKind::Filler;
                    break;
            }
            raw.push_back({std::move(it), false});
            pos += m->length;
            continue;
        }
        nl::Item it;
        it.text = words[pos].original;
        if (auto num = parse_number_token(folded[pos])) {
            it.kind = nl::ItemKind::Number;
            it.number = *num;
            raw.push_back({std::move(it), false});
        } else {
            it.kind = nl::ItemKind::Filler;  // reclassified below
            raw.push_back({std::move(it), true});
        }
        ++pos;
    }

    bool has_nonterminal = false;
    for (const auto& r : raw) {
        if (r.item.kind == nl::ItemKind::Quantifier || r.item.kind == nl::ItemKind::Vague ||
            r.item.kind == nl::ItemKind::Logic)
            has_nonterminal = true;
    }
    if (!has_nonterminal) throw NoPatternMatch(text);

    // Second pass: contiguous runs of unknown words (fillers in between are
    // absorbed) become abstract symbols.
    AbstractedSentence abs;
    abs.original = text;
    std::vector<std::string> names;
    for (const auto& [name, id] : alphabet.reserved_names()) names.push_back(name);
    std::size_t next_name = 0;

    std::size_t i = 0;
    while (i < raw.size()) {
        // find a run [i, j) of Unknown/Filler containing at least one Unknown
        if (raw[i].unknown) {
            std::size_t begin = i, end = i;
            std::size_t j = i;
            while (j < raw.size() &&
                   (raw[j].unknown || raw[j].item.kind == nl::ItemKind::Filler)) {
                if (raw[j].unknown) end = j;
                ++j;
            }
            // absorb immediately preceding fillers into the span
            while (begin > 0 && !abs.items.empty() &&
                   abs.items.back().kind == nl::ItemKind::Filler &&
                   raw[begin - 1].item.kind == nl::ItemKind::Filler) {
                abs.items.pop_back();
                --begin;
            }
            if (next_name >= names.size())
                throw UnsupportedSkeleton("too many abstraction spans in: " + text);
            std::string sym = names[next_name++];
            std::string span;
            for (std::size_t k = begin; k <= end; ++k)
                span += (k > begin ? " " : "") + raw[k].item.text;
            nl::Item it;
            it.kind = nl::ItemKind::AbstractSym;
            it.symbol = sym;
            it.text = "[" + sym + "]";
            abs.bindings[sym] = span;
            abs.items.push_back(std::move(it));
            i = end + 1;
            continue;
        }
        abs.items.push_back(raw[i].item);
        ++i;
    }
    return abs;
}

/// Replace vague quantifier phrases by exact bounds: over -> (m,∞),
/// under -> (1,m), context -> (m, context_max).
inline AbstractedSentence approximate_vague(const AbstractedSentence& abs, VagueMode mode,
                                            std::optional<int> context_max, const Lexicon&) {
    if (mode == VagueMode::context && !context_max) throw MissingContext();
    AbstractedSentence out = abs;
    bool found = false;
    for (auto& it : out.items) {
        if (it.kind != nl::ItemKind::Vague) continue;
        found = true;
        int m = std::stoi(it.payload);
        Bounds b;
        switch (mode) {
            case VagueMode::over: b = {m, kInfinity}; break;
            case VagueMode::under: b = {1, m}; break;
            case VagueMode::context: b = {m, *context_max}; break;
        }
        it.kind = nl::ItemKind::Quantifier;
        it.bounds = b;
        it.text = b.max == kInfinity
                      ? "at least " + std::to_string(b.min)
                      : "between " + std::to_string(b.min) + " and " + std::to_string(b.max);
    }
    if (!found) throw NoVagueQuantifier();
    return out;
}

namespace nl {

/// Recursive-descent transformation over the abstracted item sequence.
class Transformer {
public:
    Transformer(const AbstractedSentence& abs, const Alphabet& alphabet)
        : abs_(abs), alphabet_(alphabet) {
        for (const auto& it : abs.items)
            if (it.kind != ItemKind::Filler) items_.push_back(&it);
        // dangling connectives at the sentence edge carry no operands
        while (!items_.empty() && is_connective(*items_.front())) items_.erase(items_.begin());
        while (!items_.empty() && is_connective(*items_.back())) items_.pop_back();
    }

    RegexAst transform() {
        if (items_.empty()) throw UnsupportedSkeleton(abs_.skeleton());
        // Part-whole relations: the container phrase before the relation word
        // is the collection and is dropped; the content forms the regex.
        std::size_t rel = items_.size();
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (items_[i]->kind == ItemKind::Logic && is_relation(items_[i]->op)) {
                rel = i;
                break;
            }
        }
        if (rel < items_.size()) pos_ = rel;
        RegexAst ast = parse_expr();
        if (pos_ != items_.size()) throw UnsupportedSkeleton(abs_.skeleton());
        return ast;
    }

private:
    static bool is_connective(const Item& it) {
        return it.kind == ItemKind::Logic &&
               (it.op == LogicOp::Disjunction || it.op == LogicOp::Intersection ||
                it.op == LogicOp::Concat);
    }

    static bool is_relation(LogicOp op) {
        return op == LogicOp::ContentEquals || op == LogicOp::NegContentEquals ||
               op == LogicOp::Prefix || op == LogicOp::Suffix;
    }

    RegexAst parse_expr() {
        RegexAst acc = parse_operand();
        while (pos_ < items_.size() && is_connective(*items_[pos_])) {
            LogicOp op = items_[pos_]->op;
            ++pos_;
            RegexAst rhs = parse_operand();
            switch (op) {
                case LogicOp::Disjunction: acc = make_disjunction(acc, rhs); break;
                case LogicOp::Intersection: acc = make_intersection(acc, rhs); break;
                case LogicOp::Concat: acc = make_concat(acc, rhs); break;
                default: break;
            }
        }
        return acc;
    }

    RegexAst parse_operand() {
        if (pos_ >= items_.size()) throw UnsupportedSkeleton(abs_.skeleton());
        const Item& it = *items_[pos_];
        if (it.kind == ItemKind::Logic) {
            ++pos_;
            switch (it.op) {
                case LogicOp::Negation:
                case LogicOp::NegContentEquals:
                    return make_negation(parse_operand());
                case LogicOp::ContentEquals:
                    return parse_operand();
                case LogicOp::Prefix:
                    return make_concat(parse_operand(), sigma_star());
                case LogicOp::Suffix:
                    return make_concat(sigma_star(), parse_operand());
                default:
                    throw UnsupportedSkeleton(abs_.skeleton());
            }
        }
        if (it.kind == ItemKind::Vague)
            throw UnsupportedSkeleton("unapproximated vague quantifier '" + it.text +
                                      "' in: " + abs_.skeleton());
        if (it.kind == ItemKind::Quantifier) {
            ++pos_;
            RegexAst atom = parse_atom();
            return make_repeat(atom, it.bounds.min, it.bounds.max);
        }
        if (it.kind == ItemKind::Number) {
            ++pos_;
            RegexAst atom = parse_atom();
            return make_repeat(atom, static_cast<int>(it.number), static_cast<int>(it.number));
        }
        RegexAst atom = parse_atom();
        // postfix quantifier, e.g. "appears 3 or more times"
        if (pos_ < items_.size() && items_[pos_]->kind == ItemKind::Quantifier) {
            const Item& q = *items_[pos_];
            ++pos_;
            return make_repeat(atom, q.bounds.min, q.bounds.max);
        }
        return atom;
    }

    RegexAst parse_atom() {
        if (pos_ >= items_.size()) throw UnsupportedSkeleton(abs_.skeleton());
        const Item& it = *items_[pos_];
        if (it.kind == ItemKind::Terminal) {
            ++pos_;
            return make_class(Lexicon::terminal_set(it.payload, alphabet_), alphabet_);
        }
        if (it.kind == ItemKind::AbstractSym) {
            ++pos_;
            if (alphabet_.reserved(it.symbol) < 0)
                throw UnsupportedSkeleton("abstract symbol " + it.symbol + " not reserved");
            return make_abstract(it.symbol);
        }
        throw UnsupportedSkeleton(abs_.skeleton());
    }

    [[nodiscard]] RegexAst sigma_star() const {
        return make_repeat(make_class(alphabet_.all(), alphabet_), 0, kInfinity);
    }

    const AbstractedSentence& abs_;
    const Alphabet& alphabet_;
    std::vector<const Item*> items_;
    std::size_t pos_ = 0;
};

}  // namespace nl

/// Transform an abstracted sentence into its regex per the skeleton grammar.
inline RegexAst transform_to_regex(const AbstractedSentence& abs, const Lexicon& lex,
                                   const Alphabet& alphabet = *standard_alphabet()) {
    (void)lex;
    return nl::Transformer(abs, alphabet).transform();
}

/// Convenience: abstraction (plus vague approximation when needed) and
/// transformation in one call.
inline RegexAst sentence_to_regex(const std::string& text, const Lexicon& lex,
                                  const Alphabet& alphabet = *standard_alphabet(),
                                  VagueMode mode = VagueMode::over,
                                  std::optional<int> context_max = std::nullopt) {
    AbstractedSentence abs = abstract_sentence(text, lex, alphabet);
    if (abs.has_vague()) abs = approximate_vague(abs, mode, context_max, lex);
    return transform_to_regex(abs, lex, alphabet);
}

}  // namespace semmt

#endif  // SEMMT_NL2REGEX_HPP

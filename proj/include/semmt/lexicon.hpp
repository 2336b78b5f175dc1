#ifndef SEMMT_LEXICON_HPP
#define SEMMT_LEXICON_HPP

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <semmt/errors.hpp>
#include <semmt/regex_ast.hpp>

namespace semmt {

/// Repeat bounds attached to a quantifier phrase; max may be kInfinity.
struct Bounds {
    int min = 0;
    int max = kInfinity;
    bool operator==(const Bounds&) const = default;
};

enum class LogicOp {
    Disjunction,
    Intersection,
    Negation,
    ContentEquals,     // part-whole inclusion: the content forms the regex
    NegContentEquals,  // negated inclusion
    Concat,            // "before", "followed by"
    Prefix,            // "starting with"
    Suffix,            // "ending with"
};

enum class PhraseKind { Terminal, Quantifier, Vague, Logic, Filler };

/// One lexicon record: a token pattern plus its payload. Quantifier patterns
/// may contain the placeholders N and M which match number tokens.
struct LexEntry {
    std::vector<std::string> pattern;
    PhraseKind kind;
    std::string payload;
};

inline std::optional<long> parse_number_token(const std::string& tok) {
    static const std::map<std::string, long> words = {
        {"zero", 0},     {"one", 1},       {"two", 2},      {"three", 3},
        {"four", 4},     {"five", 5},      {"six", 6},      {"seven", 7},
        {"eight", 8},    {"nine", 9},      {"ten", 10},     {"eleven", 11},
        {"twelve", 12},  {"thirteen", 13}, {"fourteen", 14}, {"fifteen", 15},
        {"sixteen", 16}, {"seventeen", 17}, {"eighteen", 18}, {"nineteen", 19},
        {"twenty", 20},  {"once", 1},      {"twice", 2},
    };
    if (!tok.empty() && std::all_of(tok.begin(), tok.end(), [](char c) {
            return c >= '0' && c <= '9';
        })) {
        return std::stol(tok);
    }
    auto it = words.find(tok);
    if (it != words.end()) return it->second;
    return std::nullopt;
}

/// Phrase tables for sentence abstraction and transformation. Lookup is
/// longest-match-first and case-insensitive; the default covers the running
/// examples plus the NL-RX-Synth/KB13 phrase conventions. User-editable via
/// the line-oriented "phrase<TAB>kind<TAB>payload" format.
class Lexicon {
public:
    static Lexicon defaults() {
        Lexicon lex;
        auto t = [&](const char* p, const char* payload) { lex.add(p, PhraseKind::Terminal, payload); };
        t("uppercase letter", "class:upper");
        t("uppercase letters", "class:upper");
        t("upper-case letter", "class:upper");
        t("upper-case letters", "class:upper");
        t("upper case letter", "class:upper");
        t("upper case letters", "class:upper");
        t("capital letter", "class:upper");
        t("capital letters", "class:upper");
        t("lowercase letter", "class:lower");
        t("lowercase letters", "class:lower");
        t("lower-case letter", "class:lower");
        t("lower-case letters", "class:lower");
        t("lower case letter", "class:lower");
        t("lower case letters", "class:lower");
        t("small letter", "class:lower");
        t("small letters", "class:lower");
        t("number", "class:digit");
        t("numbers", "class:digit");
        t("digit", "class:digit");
        t("digits", "class:digit");
        t("numeric character", "class:digit");
        t("numeric characters", "class:digit");
        t("vowel", "chars:AEIOUaeiou");
        t("vowels", "chars:AEIOUaeiou");
        t("letter", "class:letter");
        t("letters", "class:letter");
        t("character", "class:alnum");
        t("characters", "class:alnum");

        auto q = [&](const char* p, const char* payload) { lex.add(p, PhraseKind::Quantifier, payload); };
        q("N or more times", "n,inf");
        q("N or more", "n,inf");
        q("N times or more", "n,inf");
        q("at least N", "n,inf");
        q("no less than N", "n,inf");
        q("not less than N", "n,inf");
        q("no more than N", "0,n");
        q("not more than N", "0,n");
        q("at most N", "0,n");
        q("N or fewer", "0,n");
        q("N or less", "0,n");
        q("more than N", "n+1,inf");
        q("fewer than N", "0,n-1");
        q("less than N", "0,n-1");
        q("exactly N", "n,n");
        q("N times", "n,n");
        q("zero or more times", "0,inf");
        q("any number of times", "0,inf");
        q("at least once", "1,inf");
        q("once or more", "1,inf");
        q("one or more times", "1,inf");
        q("between N and M times", "n,m");
        q("between N and M", "n,m");
        q("N to M times", "n,m");

        auto v = [&](const char* p, const char* m) { lex.add(p, PhraseKind::Vague, m); };
        v("a few", "3");
        v("several", "5");
        v("many", "7");
        v("a couple of", "2");
        v("a couple", "2");

        auto l = [&](const char* p, const char* op) { lex.add(p, PhraseKind::Logic, op); };
        l("not containing only", "neg-content-eq");
        l("not contain only", "neg-content-eq");
        l("not contains only", "neg-content-eq");
        l("not containing", "neg-content-eq");
        l("containing only", "content-eq");
        l("contains only", "content-eq");
        l("contain only", "content-eq");
        l("consisting only of", "content-eq");
        l("consist only of", "content-eq");
        l("made up only of", "content-eq");
        l("containing", "content-eq");
        l("contains", "content-eq");
        l("contain", "content-eq");
        l("consisting of", "content-eq");
        l("followed by", "concat");
        l("before", "concat");
        l("starting with", "prefix");
        l("starts with", "prefix");
        l("start with", "prefix");
        l("beginning with", "prefix");
        l("begin with", "prefix");
        l("ending with", "suffix");
        l("ends with", "suffix");
        l("end with", "suffix");
        l("or", "disj");
        l("and", "inter");
        l("not", "neg");

        for (const char* f :
             {"a",     "an",    "the",  "string", "strings", "line",  "lines", "word",
              "words", "that",  "which", "who",   "whom",    "is",    "are",   "be",
              "it",    "there", "this", "these",  "those",   "while", "of",    "in",
              "on",    "to",    "have", "has",    "its",     "only",  "some",  "all",
              "with",  "having"}) {
            lex.add(f, PhraseKind::Filler, "");
        }
        return lex;
    }

    void add(const std::string& phrase, PhraseKind kind, std::string payload) {
        LexEntry e;
        std::istringstream in(phrase);
        std::string tok;
        while (in >> tok) {
            if (tok != "N" && tok != "M")
                std::transform(tok.begin(), tok.end(), tok.begin(),
                               [](unsigned char c) { return std::tolower(c); });
            e.pattern.push_back(tok);
        }
        if (e.pattern.empty()) throw InvalidParameter("empty lexicon phrase");
        e.kind = kind;
        e.payload = std::move(payload);
        entries_.push_back(std::move(e));
        sorted_ = false;
    }

    struct Match {
        const LexEntry* entry = nullptr;
        std::size_t length = 0;  // tokens consumed
        long n = -1, m = -1;     // captured number placeholders
    };

    /// Longest match over the entry table at token position `pos`.
    [[nodiscard]] std::optional<Match> match(const std::vector<std::string>& tokens,
                                             std::size_t pos) const {
        ensure_sorted();
        for (const auto& e : entries_) {
            if (pos + e.pattern.size() > tokens.size()) continue;
            Match m{&e, e.pattern.size(), -1, -1};
            bool ok = true;
            for (std::size_t i = 0; i < e.pattern.size(); ++i) {
                const std::string& want = e.pattern[i];
                const std::string& got = tokens[pos + i];
                if (want == "N" || want == "M") {
                    auto num = parse_number_token(got);
                    if (!num) {
                        ok = false;
                        break;
                    }
                    (want == "N" ? m.n : m.m) = *num;
                } else if (want != got) {
                    ok = false;
                    break;
                }
            }
            if (ok) return m;
        }
        return std::nullopt;
    }

    /// Resolve a quantifier payload ("n,inf", "0,n-1", "n,m", ...) against the
    /// captured numbers.
    static Bounds quantifier_bounds(const Match& m) {
        auto half = [&](const std::string& part) -> int {
            if (part == "inf") return kInfinity;
            if (part == "n") return static_cast<int>(m.n);
            if (part == "m") return static_cast<int>(m.m);
            if (part == "n+1") return static_cast<int>(m.n + 1);
            if (part == "n-1") return static_cast<int>(std::max(0L, m.n - 1));
            return std::stoi(part);
        };
        auto comma = m.entry->payload.find(',');
        Bounds b{half(m.entry->payload.substr(0, comma)),
                 half(m.entry->payload.substr(comma + 1))};
        if (b.max != kInfinity && b.min > b.max) b = {b.max, b.min};
        return b;
    }

    static LogicOp logic_op(const std::string& payload) {
        if (payload == "disj") return LogicOp::Disjunction;
        if (payload == "inter") return LogicOp::Intersection;
        if (payload == "neg") return LogicOp::Negation;
        if (payload == "content-eq") return LogicOp::ContentEquals;
        if (payload == "neg-content-eq") return LogicOp::NegContentEquals;
        if (payload == "concat") return LogicOp::Concat;
        if (payload == "prefix") return LogicOp::Prefix;
        if (payload == "suffix") return LogicOp::Suffix;
        throw InvalidParameter("unknown logic payload: " + payload);
    }

    /// Terminal payload ("class:upper" or "chars:AEIOU") to a symbol set.
    static SymbolSet terminal_set(const std::string& payload, const Alphabet& alphabet) {
        if (payload.rfind("class:", 0) == 0) return alphabet.named_class(payload.substr(6));
        if (payload.rfind("chars:", 0) == 0) {
            SymbolSet s;
            for (char c : payload.substr(6)) {
                SymbolId id = alphabet.find(c);
                if (id >= 0) s.insert(id);
            }
            if (s.empty()) throw InvalidParameter("terminal chars outside alphabet");
            return s;
        }
        throw InvalidParameter("unknown terminal payload: " + payload);
    }

    static Lexicon load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidParameter("cannot open lexicon file: " + path);
        Lexicon lex;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream row(line);
            std::string phrase, kind, payload;
            if (!std::getline(row, phrase, '\t') || !std::getline(row, kind, '\t'))
                throw InvalidParameter("malformed lexicon line " + std::to_string(lineno));
            std::getline(row, payload, '\t');
            lex.add(phrase, kind_from(kind), payload);
        }
        return lex;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        for (const auto& e : entries_) {
            std::string phrase;
            for (const auto& t : e.pattern) phrase += (phrase.empty() ? "" : " ") + t;
            out << phrase << '\t' << kind_name(e.kind) << '\t' << e.payload << '\n';
        }
    }

    [[nodiscard]] std::size_t size() const { return entries_.size(); }

private:
    static PhraseKind kind_from(const std::string& s) {
        if (s == "terminal") return PhraseKind::Terminal;
        if (s == "quantifier") return PhraseKind::Quantifier;
        if (s == "vague") return PhraseKind::Vague;
        if (s == "logic") return PhraseKind::Logic;
        if (s == "filler") return PhraseKind::Filler;
        throw InvalidParameter("unknown lexicon kind: " + s);
    }

    static const char* kind_name(PhraseKind k) {
        switch (k) {
            case PhraseKind::Terminal: return "terminal";
            case PhraseKind::Quantifier: return "quantifier";
            case PhraseKind::Vague: return "vague";
            case PhraseKind::Logic: return "logic";
            case PhraseKind::Filler: return "filler";
        }
        return "?";
    }

    void ensure_sorted() const {
        if (sorted_) return;
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const LexEntry& a, const LexEntry& b) {
                             return a.pattern.size() > b.pattern.size();
                         });
        sorted_ = true;
    }

    mutable std::vector<LexEntry> entries_;
    mutable bool sorted_ = false;
};

}  // namespace semmt

#endif  // SEMMT_LEXICON_HPP

#ifndef SEMMT_ALPHABET_HPP
#define SEMMT_ALPHABET_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <semmt/errors.hpp>

namespace semmt {

/// A symbol is an index into the alphabet's ordered symbol list.
using SymbolId = int;
using SymbolSet = std::set<SymbolId>;

/// Ordered set of symbols with named classes. The default alphabet is the 62
/// letters-and-digits symbols; abstract symbols introduced by sentence
/// abstraction (X, Y, ...) occupy reserved symbols appended after the base set
/// so that their complement languages are well defined.
class Alphabet {
public:
    /// Letters and digits plus the given reserved abstract-symbol names.
    static Alphabet with_reserved(std::vector<std::string> reserved) {
        Alphabet a;
        for (char c = 'A'; c <= 'Z'; ++c) a.push_symbol(std::string(1, c));
        for (char c = 'a'; c <= 'z'; ++c) a.push_symbol(std::string(1, c));
        for (char c = '0'; c <= '9'; ++c) a.push_symbol(std::string(1, c));
        for (auto& name : reserved) {
            a.reserved_[name] = a.push_symbol(name);
        }
        return a;
    }

    /// Default alphabet: 62 base symbols plus reserved X, Y, Z.
    static Alphabet standard() { return with_reserved({"X", "Y", "Z"}); }

    /// Small bespoke alphabet (used mainly by oracle tests); symbols are the
    /// given single-character names, no reserved abstract symbols.
    static Alphabet custom(const std::string& symbols) {
        Alphabet a;
        for (char c : symbols) a.push_symbol(std::string(1, c));
        return a;
    }

    [[nodiscard]] int size() const { return static_cast<int>(symbols_.size()); }

    [[nodiscard]] const std::string& name(SymbolId id) const { return symbols_.at(id); }

    /// Id of a single-character symbol, or -1 when absent.
    [[nodiscard]] SymbolId find(char c) const {
        auto it = index_.find(std::string(1, c));
        return it == index_.end() ? -1 : it->second;
    }

    [[nodiscard]] SymbolId find(const std::string& s) const {
        auto it = index_.find(s);
        return it == index_.end() ? -1 : it->second;
    }

    /// Reserved symbol id for an abstract name, or -1.
    [[nodiscard]] SymbolId reserved(const std::string& name) const {
        auto it = reserved_.find(name);
        return it == reserved_.end() ? -1 : it->second;
    }

    [[nodiscard]] bool is_reserved(SymbolId id) const {
        return std::any_of(reserved_.begin(), reserved_.end(),
                           [&](auto& kv) { return kv.second == id; });
    }

    [[nodiscard]] const std::map<std::string, SymbolId>& reserved_names() const {
        return reserved_;
    }

    /// Contiguous id range [lo, hi] as a set; both endpoints must exist.
    [[nodiscard]] SymbolSet range(char lo, char hi) const {
        SymbolId a = find(lo), b = find(hi);
        if (a < 0 || b < 0 || a > b) throw InvalidParameter("bad symbol range");
        SymbolSet s;
        for (SymbolId i = a; i <= b; ++i) s.insert(i);
        return s;
    }

    [[nodiscard]] SymbolSet all() const {
        SymbolSet s;
        for (int i = 0; i < size(); ++i) s.insert(i);
        return s;
    }

    /// Named class lookup: upper, lower, digit, alnum, letter. Empty when the
    /// alphabet does not contain the class (e.g. custom test alphabets).
    [[nodiscard]] SymbolSet named_class(const std::string& cls) const {
        auto safe_range = [&](char lo, char hi) -> SymbolSet {
            if (find(lo) < 0 || find(hi) < 0) return {};
            return range(lo, hi);
        };
        if (cls == "upper") return safe_range('A', 'Z');
        if (cls == "lower") return safe_range('a', 'z');
        if (cls == "digit") return safe_range('0', '9');
        if (cls == "letter") {
            SymbolSet s = safe_range('A', 'Z');
            s.merge(safe_range('a', 'z'));
            return s;
        }
        if (cls == "alnum") {
            SymbolSet s = named_class("letter");
            s.merge(safe_range('0', '9'));
            return s;
        }
        throw InvalidParameter("unknown class: " + cls);
    }

    bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

private:
    SymbolId push_symbol(std::string s) {
        SymbolId id = size();
        // Reserved names may shadow a base symbol (Y the abstract symbol vs Y
        // the letter); the first entry wins so bare literals stay base symbols.
        index_.emplace(s, id);
        symbols_.push_back(std::move(s));
        return id;
    }

    std::vector<std::string> symbols_;
    std::map<std::string, SymbolId> index_;
    std::map<std::string, SymbolId> reserved_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr standard_alphabet() {
    static AlphabetPtr a = std::make_shared<Alphabet>(Alphabet::standard());
    return a;
}

}  // namespace semmt

#endif  // SEMMT_ALPHABET_HPP

#ifndef SEMMT_AUTOMATA_HPP
#define SEMMT_AUTOMATA_HPP

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <semmt/alphabet.hpp>
#include <semmt/errors.hpp>
#include <semmt/regex_ast.hpp>

namespace semmt {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

constexpr std::size_t kDefaultStateCap = 100'000;

/// Deterministic automaton over a partitioned alphabet. Transitions are per
/// symbol-class; a class's weight is the number of alphabet symbols in it.
/// The transition function is total (a sink state exists where needed).
struct Dfa {
    AlphabetPtr alphabet;
    std::vector<SymbolSet> classes;        // partition of all alphabet symbols
    std::vector<std::vector<int>> delta;   // [state][class] -> state
    int start = 0;
    std::vector<bool> accepting;
    bool minimal = false;

    [[nodiscard]] int num_states() const { return static_cast<int>(delta.size()); }
    [[nodiscard]] int num_classes() const { return static_cast<int>(classes.size()); }
    [[nodiscard]] int class_weight(int c) const { return static_cast<int>(classes[c].size()); }
};

/// Per-length word counts c[0..λ] with arbitrary precision.
struct CountTable {
    std::vector<BigInt> counts;

    [[nodiscard]] BigInt cumulative() const {
        BigInt sum = 0;
        for (const auto& c : counts) sum += c;
        return sum;
    }
};

namespace detail {

/// Compilation context: canonical (hash-consed) ASTs and Brzozowski
/// derivatives over the class partition.
class DfaBuilder {
public:
    DfaBuilder(const RegexAst& ast, AlphabetPtr alphabet, std::size_t state_cap)
        : alphabet_(std::move(alphabet)), state_cap_(state_cap) {
        collect_atoms(ast);
        build_partition();
        root_ = canon(ast);
    }

    Dfa build() {
        Dfa dfa;
        dfa.alphabet = alphabet_;
        dfa.classes = classes_;
        std::unordered_map<std::string, int> ids;
        std::vector<RegexAst> states;
        auto intern = [&](const RegexAst& node) {
            std::string key = ast_key(node);
            auto it = ids.find(key);
            if (it != ids.end()) return it->second;
            int id = static_cast<int>(states.size());
            if (states.size() >= state_cap_) throw ResourceLimit(states.size() + 1);
            ids.emplace(std::move(key), id);
            states.push_back(node);
            dfa.delta.emplace_back(classes_.size(), -1);
            dfa.accepting.push_back(nullable(node));
            return id;
        };
        dfa.start = intern(root_);
        for (std::size_t s = 0; s < states.size(); ++s) {
            for (std::size_t c = 0; c < classes_.size(); ++c) {
                RegexAst d = derive(states[s], static_cast<int>(c));
                dfa.delta[s][c] = intern(d);
            }
        }
        return dfa;
    }

private:
    void collect_atoms(const RegexAst& a) {
        switch (a->kind) {
            case NodeKind::Literal: add_atom({a->symbol}); break;
            case NodeKind::CharClass: add_atom(a->cls); break;
            case NodeKind::Abstract: {
                SymbolId s = alphabet_->reserved(a->name);
                if (s < 0) throw InvalidParameter("abstract symbol not in alphabet: " + a->name);
                add_atom({s});
                break;
            }
            case NodeKind::Concat:
            case NodeKind::Disjunction:
            case NodeKind::Intersection:
                collect_atoms(a->left);
                collect_atoms(a->right);
                break;
            case NodeKind::Negation:
            case NodeKind::Repeat:
                collect_atoms(a->child);
                break;
            default:
                break;
        }
    }

    void add_atom(SymbolSet s) { atoms_.push_back(std::move(s)); }

    void build_partition() {
        // Symbols with the same atom-membership signature are interchangeable.
        std::map<std::vector<bool>, SymbolSet> groups;
        for (SymbolId s = 0; s < alphabet_->size(); ++s) {
            std::vector<bool> sig(atoms_.size());
            for (std::size_t i = 0; i < atoms_.size(); ++i) sig[i] = atoms_[i].count(s) > 0;
            groups[sig].insert(s);
        }
        for (auto& [sig, set] : groups) classes_.push_back(std::move(set));
    }

    // --- canonical smart constructors (similarity rules) ---

    RegexAst canon(const RegexAst& a) {
        switch (a->kind) {
            case NodeKind::Empty:
            case NodeKind::Epsilon:
            case NodeKind::Literal:
            case NodeKind::CharClass:
                return intern_node(a);
            case NodeKind::Abstract: {
                SymbolId s = alphabet_->reserved(a->name);
                return intern_node(make_literal(s));
            }
            case NodeKind::Concat:
                return mk_concat(canon(a->left), canon(a->right));
            case NodeKind::Disjunction:
                return mk_disj(canon(a->left), canon(a->right));
            case NodeKind::Intersection:
                return mk_inter(canon(a->left), canon(a->right));
            case NodeKind::Negation:
                return mk_neg(canon(a->child));
            case NodeKind::Repeat:
                return mk_repeat(canon(a->child), a->min, a->max);
        }
        return a;
    }

    RegexAst intern_node(const RegexAst& a) {
        std::string key = ast_key(a);
        auto it = interned_.find(key);
        if (it != interned_.end()) return it->second;
        interned_.emplace(std::move(key), a);
        return a;
    }

    static bool is(const RegexAst& a, NodeKind k) { return a->kind == k; }

    RegexAst mk_concat(const RegexAst& l, const RegexAst& r) {
        if (is(l, NodeKind::Empty) || is(r, NodeKind::Empty)) return make_empty();
        if (is(l, NodeKind::Epsilon)) return r;
        if (is(r, NodeKind::Epsilon)) return l;
        // right-nest for derivative locality
        if (is(l, NodeKind::Concat)) return mk_concat(l->left, mk_concat(l->right, r));
        return intern_node(make_concat(l, r));
    }

    void flatten(const RegexAst& a, NodeKind k, std::vector<RegexAst>& out) {
        if (a->kind == k) {
            flatten(a->left, k, out);
            flatten(a->right, k, out);
        } else {
            out.push_back(a);
        }
    }

    RegexAst rebuild_sorted(std::vector<RegexAst> parts, NodeKind k) {
        std::sort(parts.begin(), parts.end(),
                  [](const RegexAst& x, const RegexAst& y) { return ast_key(x) < ast_key(y); });
        parts.erase(std::unique(parts.begin(), parts.end(),
                                [](const RegexAst& x, const RegexAst& y) { return ast_equal(x, y); }),
                    parts.end());
        RegexAst acc = parts.front();
        for (std::size_t i = 1; i < parts.size(); ++i) acc = intern_node(make_binary(k, acc, parts[i]));
        return acc;
    }

    RegexAst mk_disj(const RegexAst& l, const RegexAst& r) {
        std::vector<RegexAst> parts;
        flatten(l, NodeKind::Disjunction, parts);
        flatten(r, NodeKind::Disjunction, parts);
        std::erase_if(parts, [](const RegexAst& p) { return p->kind == NodeKind::Empty; });
        if (parts.empty()) return make_empty();
        return rebuild_sorted(std::move(parts), NodeKind::Disjunction);
    }

    RegexAst mk_inter(const RegexAst& l, const RegexAst& r) {
        std::vector<RegexAst> parts;
        flatten(l, NodeKind::Intersection, parts);
        flatten(r, NodeKind::Intersection, parts);
        for (const auto& p : parts)
            if (p->kind == NodeKind::Empty) return make_empty();
        return rebuild_sorted(std::move(parts), NodeKind::Intersection);
    }

    RegexAst mk_neg(const RegexAst& c) {
        if (is(c, NodeKind::Negation)) return c->child;
        return intern_node(make_negation(c));
    }

    RegexAst mk_repeat(const RegexAst& c, int min, int max) {
        if (max == 0) return make_epsilon();
        if (is(c, NodeKind::Epsilon)) return make_epsilon();
        if (is(c, NodeKind::Empty)) return min == 0 ? make_epsilon() : make_empty();
        if (min == 1 && max == 1) return c;
        return intern_node(make_repeat(c, min, max));
    }

    // --- nullability and derivatives over canonical nodes ---

    static bool nullable(const RegexAst& a) {
        switch (a->kind) {
            case NodeKind::Empty:
            case NodeKind::Literal:
            case NodeKind::CharClass:
            case NodeKind::Abstract:
                return false;
            case NodeKind::Epsilon:
                return true;
            case NodeKind::Concat:
            case NodeKind::Intersection:
                return nullable(a->left) && nullable(a->right);
            case NodeKind::Disjunction:
                return nullable(a->left) || nullable(a->right);
            case NodeKind::Negation:
                return !nullable(a->child);
            case NodeKind::Repeat:
                return a->min == 0 || nullable(a->child);
        }
        return false;
    }

    /// Derivative with respect to symbol class `c`. The partition refines
    /// every leaf set, so one representative symbol decides membership.
    RegexAst derive(const RegexAst& a, int c) {
        auto key = std::make_pair(a.get(), c);
        auto it = dcache_.find(key);
        if (it != dcache_.end()) return it->second;
        RegexAst d = derive_uncached(a, c);
        dcache_.emplace(key, d);
        return d;
    }

    RegexAst derive_uncached(const RegexAst& a, int c) {
        SymbolId rep = *classes_[c].begin();
        switch (a->kind) {
            case NodeKind::Empty:
            case NodeKind::Epsilon:
                return make_empty();
            case NodeKind::Literal:
                return a->symbol == rep ? make_epsilon() : make_empty();
            case NodeKind::CharClass:
                return a->cls.count(rep) ? make_epsilon() : make_empty();
            case NodeKind::Abstract:
                return make_empty();  // canon() replaced these by literals
            case NodeKind::Concat: {
                RegexAst d = mk_concat(derive(a->left, c), a->right);
                if (nullable(a->left)) d = mk_disj(d, derive(a->right, c));
                return d;
            }
            case NodeKind::Disjunction:
                return mk_disj(derive(a->left, c), derive(a->right, c));
            case NodeKind::Intersection:
                return mk_inter(derive(a->left, c), derive(a->right, c));
            case NodeKind::Negation:
                return mk_neg(derive(a->child, c));
            case NodeKind::Repeat: {
                int min = a->min > 0 ? a->min - 1 : 0;
                int max = a->max == kInfinity ? kInfinity : a->max - 1;
                return mk_concat(derive(a->child, c), mk_repeat(a->child, min, max));
            }
        }
        return make_empty();
    }

    struct PairHash {
        std::size_t operator()(const std::pair<const RegexNode*, int>& p) const {
            return std::hash<const RegexNode*>()(p.first) * 31u + std::hash<int>()(p.second);
        }
    };

    AlphabetPtr alphabet_;
    std::size_t state_cap_;
    std::vector<SymbolSet> atoms_;
    std::vector<SymbolSet> classes_;
    std::unordered_map<std::string, RegexAst> interned_;
    std::unordered_map<std::pair<const RegexNode*, int>, RegexAst, PairHash> dcache_;
    RegexAst root_;
};

inline std::vector<int> reachable_states(const Dfa& dfa) {
    std::vector<int> order;
    std::vector<bool> seen(dfa.num_states(), false);
    std::deque<int> q{dfa.start};
    seen[dfa.start] = true;
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        order.push_back(s);
        for (int c = 0; c < dfa.num_classes(); ++c) {
            int t = dfa.delta[s][c];
            if (!seen[t]) {
                seen[t] = true;
                q.push_back(t);
            }
        }
    }
    return order;
}

/// States that are reachable from the start and can reach `accepting`.
inline std::vector<bool> live_mask(const Dfa& dfa, const std::vector<bool>& accepting) {
    std::vector<bool> reach(dfa.num_states(), false);
    for (int s : reachable_states(dfa)) reach[s] = true;
    // reverse reachability from accepting states
    std::vector<std::vector<int>> rev(dfa.num_states());
    for (int s = 0; s < dfa.num_states(); ++s)
        for (int c = 0; c < dfa.num_classes(); ++c) rev[dfa.delta[s][c]].push_back(s);
    std::vector<bool> co(dfa.num_states(), false);
    std::deque<int> q;
    for (int s = 0; s < dfa.num_states(); ++s)
        if (accepting[s]) {
            co[s] = true;
            q.push_back(s);
        }
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        for (int p : rev[s])
            if (!co[p]) {
                co[p] = true;
                q.push_back(p);
            }
    }
    std::vector<bool> live(dfa.num_states(), false);
    for (int s = 0; s < dfa.num_states(); ++s) live[s] = reach[s] && co[s];
    return live;
}

}  // namespace detail

/// Hopcroft minimization followed by canonical BFS renumbering; idempotent.
/// The result keeps one sink state when needed so transitions stay total.
inline Dfa minimize(const Dfa& dfa) {
    // Restrict to reachable states first.
    std::vector<int> order = detail::reachable_states(dfa);
    std::vector<int> remap(dfa.num_states(), -1);
    for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = static_cast<int>(i);
    int n = static_cast<int>(order.size());
    int k = dfa.num_classes();
    std::vector<std::vector<int>> delta(n, std::vector<int>(k));
    std::vector<bool> acc(n);
    for (int i = 0; i < n; ++i) {
        acc[i] = dfa.accepting[order[i]];
        for (int c = 0; c < k; ++c) delta[i][c] = remap[dfa.delta[order[i]][c]];
    }

    // Hopcroft partition refinement.
    std::vector<std::vector<std::vector<int>>> rev(n, std::vector<std::vector<int>>(k));
    for (int s = 0; s < n; ++s)
        for (int c = 0; c < k; ++c) rev[delta[s][c]][c].push_back(s);

    std::vector<int> block_of(n, 0);
    std::vector<std::vector<int>> blocks;
    {
        std::vector<int> a, d;
        for (int s = 0; s < n; ++s) (acc[s] ? a : d).push_back(s);
        if (!a.empty()) {
            for (int s : a) block_of[s] = static_cast<int>(blocks.size());
            blocks.push_back(a);
        }
        if (!d.empty()) {
            for (int s : d) block_of[s] = static_cast<int>(blocks.size());
            blocks.push_back(d);
        }
    }
    std::set<std::pair<int, int>> work;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (int c = 0; c < k; ++c) work.emplace(static_cast<int>(b), c);

    while (!work.empty()) {
        auto [splitter, c] = *work.begin();
        work.erase(work.begin());
        std::vector<int> snapshot = blocks[splitter];
        // states with a c-transition into the splitter block, grouped by block
        std::unordered_map<int, std::vector<int>> touched;
        for (int t : snapshot)
            for (int s : rev[t][c]) touched[block_of[s]].push_back(s);
        for (auto& [b, hits] : touched) {
            if (hits.size() == blocks[b].size()) continue;
            std::vector<bool> in_hits(n, false);
            for (int s : hits) in_hits[s] = true;
            std::vector<int> rest;
            for (int s : blocks[b])
                if (!in_hits[s]) rest.push_back(s);
            int nb = static_cast<int>(blocks.size());
            blocks[b] = hits;
            blocks.push_back(rest);
            for (int s : rest) block_of[s] = nb;
            bool smaller_is_new = rest.size() < hits.size();
            for (int cc = 0; cc < k; ++cc) {
                if (work.count({b, cc})) {
                    work.emplace(nb, cc);
                } else {
                    work.emplace(smaller_is_new ? nb : b, cc);
                }
            }
        }
    }

    // Quotient automaton with canonical BFS numbering.
    std::vector<int> canon_id(blocks.size(), -1);
    std::vector<int> bfs;
    bfs.push_back(block_of[remap[dfa.start]]);
    canon_id[bfs[0]] = 0;
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        int b = bfs[i];
        int s = blocks[b][0];
        for (int c = 0; c < k; ++c) {
            int tb = block_of[delta[s][c]];
            if (canon_id[tb] < 0) {
                canon_id[tb] = static_cast<int>(bfs.size());
                bfs.push_back(tb);
            }
        }
    }

    Dfa out;
    out.alphabet = dfa.alphabet;
    out.classes = dfa.classes;
    out.start = 0;
    out.delta.assign(bfs.size(), std::vector<int>(k));
    out.accepting.assign(bfs.size(), false);
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        int b = bfs[i];
        int s = blocks[b][0];
        out.accepting[i] = acc[s];
        for (int c = 0; c < k; ++c) out.delta[i][c] = canon_id[block_of[delta[s][c]]];
    }
    out.minimal = true;
    return out;
}

/// Compile a desugared AST into the minimal DFA for its language.
inline Dfa compile_to_dfa(const RegexAst& ast, AlphabetPtr alphabet,
                          std::size_t state_cap = kDefaultStateCap) {
    detail::DfaBuilder builder(ast, std::move(alphabet), state_cap);
    return minimize(builder.build());
}

/// Refine two DFAs over the same alphabet to a common class partition.
inline std::pair<Dfa, Dfa> refine_common(const Dfa& a, const Dfa& b) {
    if (!(*a.alphabet == *b.alphabet)) throw InvalidParameter("operands use different alphabets");
    std::vector<SymbolSet> classes;
    std::vector<int> map_a, map_b;
    for (std::size_t i = 0; i < a.classes.size(); ++i) {
        for (std::size_t j = 0; j < b.classes.size(); ++j) {
            SymbolSet inter;
            std::set_intersection(a.classes[i].begin(), a.classes[i].end(),
                                  b.classes[j].begin(), b.classes[j].end(),
                                  std::inserter(inter, inter.begin()));
            if (inter.empty()) continue;
            classes.push_back(std::move(inter));
            map_a.push_back(static_cast<int>(i));
            map_b.push_back(static_cast<int>(j));
        }
    }
    auto reclass = [&](const Dfa& d, const std::vector<int>& map) {
        Dfa out = d;
        out.classes = classes;
        out.delta.assign(d.num_states(), std::vector<int>(classes.size()));
        for (int s = 0; s < d.num_states(); ++s)
            for (std::size_t c = 0; c < classes.size(); ++c)
                out.delta[s][c] = d.delta[s][map[c]];
        return out;
    };
    return {reclass(a, map_a), reclass(b, map_b)};
}

/// Product automaton over a common refinement, with both accept masks kept so
/// intersection and union counts can share one state space.
struct ProductDfa {
    Dfa dfa;  // accepting left empty; use the masks below
    std::vector<bool> accept_both;
    std::vector<bool> accept_either;
};

inline ProductDfa product(const Dfa& a_in, const Dfa& b_in,
                          std::size_t state_cap = kDefaultStateCap) {
    auto [a, b] = refine_common(a_in, b_in);
    int k = static_cast<int>(a.classes.size());
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> states;
    ProductDfa out;
    out.dfa.alphabet = a.alphabet;
    out.dfa.classes = a.classes;
    auto intern = [&](int sa, int sb) {
        auto it = ids.find({sa, sb});
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(states.size());
        if (states.size() >= state_cap) throw ResourceLimit(states.size() + 1);
        ids.emplace(std::make_pair(sa, sb), id);
        states.emplace_back(sa, sb);
        out.dfa.delta.emplace_back(k, -1);
        out.accept_both.push_back(a.accepting[sa] && b.accepting[sb]);
        out.accept_either.push_back(a.accepting[sa] || b.accepting[sb]);
        return id;
    };
    out.dfa.start = intern(a.start, b.start);
    for (std::size_t i = 0; i < states.size(); ++i) {
        auto [sa, sb] = states[i];
        for (int c = 0; c < k; ++c) out.dfa.delta[i][c] = intern(a.delta[sa][c], b.delta[sb][c]);
    }
    out.dfa.accepting.assign(states.size(), false);
    return out;
}

inline Dfa with_accepting(const ProductDfa& p, const std::vector<bool>& mask) {
    Dfa d = p.dfa;
    d.accepting = mask;
    d.minimal = false;
    return d;
}

inline Dfa intersect(const Dfa& a, const Dfa& b, std::size_t state_cap = kDefaultStateCap) {
    ProductDfa p = product(a, b, state_cap);
    return minimize(with_accepting(p, p.accept_both));
}

inline Dfa dfa_union(const Dfa& a, const Dfa& b, std::size_t state_cap = kDefaultStateCap) {
    ProductDfa p = product(a, b, state_cap);
    return minimize(with_accepting(p, p.accept_either));
}

inline Dfa complement(const Dfa& dfa) {
    Dfa out = dfa;
    for (std::size_t s = 0; s < out.accepting.size(); ++s) out.accepting[s] = !out.accepting[s];
    out.minimal = false;
    return minimize(out);
}

inline bool is_empty(const Dfa& dfa) {
    for (int s : detail::reachable_states(dfa))
        if (dfa.accepting[s]) return false;
    return true;
}

/// Minimal DFAs are canonical under the same class partition, so equivalence
/// is structural equality after minimization over a common refinement.
inline bool equivalent(const Dfa& a_in, const Dfa& b_in) {
    auto [a, b] = refine_common(a_in, b_in);
    Dfa ma = minimize(a), mb = minimize(b);
    return ma.delta == mb.delta && ma.accepting == mb.accepting && ma.start == mb.start;
}

/// Exact counts of accepted words per length, transitions weighted by class
/// size; c[0] = 1 iff the start state accepts.
inline CountTable count_words_upto(const Dfa& dfa, int lambda) {
    if (lambda < 0) throw InvalidParameter("lambda must be nonnegative");
    CountTable table;
    std::vector<BigInt> ways(dfa.num_states(), 0);
    ways[dfa.start] = 1;
    auto emit = [&]() {
        BigInt c = 0;
        for (int s = 0; s < dfa.num_states(); ++s)
            if (dfa.accepting[s]) c += ways[s];
        table.counts.push_back(std::move(c));
    };
    emit();
    for (int len = 1; len <= lambda; ++len) {
        std::vector<BigInt> next(dfa.num_states(), 0);
        for (int s = 0; s < dfa.num_states(); ++s) {
            if (ways[s] == 0) continue;
            for (int c = 0; c < dfa.num_classes(); ++c)
                next[dfa.delta[s][c]] += ways[s] * dfa.class_weight(c);
        }
        ways = std::move(next);
        emit();
    }
    return table;
}

/// Word acceptance; the word is a sequence of alphabet symbol ids.
inline bool accepts(const Dfa& dfa, const std::vector<SymbolId>& word) {
    // class lookup per symbol
    std::vector<int> class_of(dfa.alphabet->size(), -1);
    for (int c = 0; c < dfa.num_classes(); ++c)
        for (SymbolId s : dfa.classes[c]) class_of[s] = c;
    int state = dfa.start;
    for (SymbolId s : word) state = dfa.delta[state][class_of[s]];
    return dfa.accepting[state];
}

/// Number of states both reachable and able to reach an either-accepting
/// state; the default λ floor for similarity convergence.
inline int live_state_count(const ProductDfa& p) {
    auto live = detail::live_mask(p.dfa, p.accept_either);
    return static_cast<int>(std::count(live.begin(), live.end(), true));
}

/// Debug dump: one line per transition plus accept flags. Not a stable format.
inline std::string dump_dfa(const Dfa& dfa) {
    std::string out;
    for (int s = 0; s < dfa.num_states(); ++s) {
        out += std::to_string(s);
        out += dfa.accepting[s] ? " [accept]" : "";
        out += s == dfa.start ? " [start]" : "";
        out += "\n";
        for (int c = 0; c < dfa.num_classes(); ++c) {
            out += "  --" + detail::class_text(dfa.classes[c], *dfa.alphabet) + "--> " +
                   std::to_string(dfa.delta[s][c]) + "\n";
        }
    }
    return out;
}

}  // namespace semmt

#endif  // SEMMT_AUTOMATA_HPP

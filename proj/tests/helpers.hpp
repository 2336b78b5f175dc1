// Shared test utilities: seeded random AST generation and a brute-force
// language oracle independent of the DFA code path.
#ifndef SEMMT_TESTS_HELPERS_HPP
#define SEMMT_TESTS_HELPERS_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include <semmt/automata.hpp>
#include <semmt/regex_ast.hpp>

namespace semmt::testing {

// ---------------------------------------------------------------------------
// Brute-force language sets: words of length <= max_len over a small
// alphabet, one bitmap per length (word of length n encoded base |Sigma|).
// ---------------------------------------------------------------------------
struct LangSet {
    int sigma = 0;
    int max_len = 0;
    std::vector<std::vector<bool>> by_len;  // by_len[n][code]

    LangSet(int sigma_, int max_len_) : sigma(sigma_), max_len(max_len_) {
        by_len.resize(max_len + 1);
        std::size_t sz = 1;
        for (int n = 0; n <= max_len; ++n) {
            by_len[n].assign(sz, false);
            sz *= sigma;
        }
    }

    [[nodiscard]] std::size_t count() const {
        std::size_t c = 0;
        for (const auto& row : by_len)
            for (bool b : row) c += b;
        return c;
    }
};

inline LangSet set_union(const LangSet& a, const LangSet& b) {
    LangSet r = a;
    for (int n = 0; n <= r.max_len; ++n)
        for (std::size_t i = 0; i < r.by_len[n].size(); ++i)
            if (b.by_len[n][i]) r.by_len[n][i] = true;
    return r;
}

inline LangSet set_inter(const LangSet& a, const LangSet& b) {
    LangSet r = a;
    for (int n = 0; n <= r.max_len; ++n)
        for (std::size_t i = 0; i < r.by_len[n].size(); ++i)
            r.by_len[n][i] = r.by_len[n][i] && b.by_len[n][i];
    return r;
}

inline LangSet set_neg(const LangSet& a) {
    LangSet r = a;
    for (auto& row : r.by_len)
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = !row[i];
    return r;
}

inline LangSet set_concat(const LangSet& a, const LangSet& b) {
    LangSet r(a.sigma, a.max_len);
    std::size_t pw[16];
    pw[0] = 1;
    for (int n = 1; n <= a.max_len; ++n) pw[n] = pw[n - 1] * a.sigma;
    for (int i = 0; i <= a.max_len; ++i)
        for (std::size_t ca = 0; ca < a.by_len[i].size(); ++ca) {
            if (!a.by_len[i][ca]) continue;
            for (int j = 0; i + j <= a.max_len; ++j)
                for (std::size_t cb = 0; cb < b.by_len[j].size(); ++cb)
                    if (b.by_len[j][cb]) r.by_len[i + j][ca * pw[j] + cb] = true;
        }
    return r;
}

inline LangSet oracle_lang(const RegexAst& a, int sigma, int max_len) {
    LangSet r(sigma, max_len);
    switch (a->kind) {
        case NodeKind::Empty:
            return r;
        case NodeKind::Epsilon:
            r.by_len[0][0] = true;
            return r;
        case NodeKind::Literal:
            if (a->symbol < sigma && max_len >= 1) r.by_len[1][a->symbol] = true;
            return r;
        case NodeKind::Abstract:
            // The random generators only use custom alphabets, which have no
            // reserved abstract symbols.
            throw std::logic_error("oracle does not model abstract symbols");
        case NodeKind::CharClass:
            if (max_len >= 1)
                for (SymbolId s : a->cls)
                    if (s < sigma) r.by_len[1][s] = true;
            return r;
        case NodeKind::Concat:
            return set_concat(oracle_lang(a->left, sigma, max_len),
                              oracle_lang(a->right, sigma, max_len));
        case NodeKind::Disjunction:
            return set_union(oracle_lang(a->left, sigma, max_len),
                             oracle_lang(a->right, sigma, max_len));
        case NodeKind::Intersection:
            return set_inter(oracle_lang(a->left, sigma, max_len),
                             oracle_lang(a->right, sigma, max_len));
        case NodeKind::Negation:
            return set_neg(oracle_lang(a->child, sigma, max_len));
        case NodeKind::Repeat: {
            LangSet child = oracle_lang(a->child, sigma, max_len);
            bool has_eps = child.by_len[0][0];
            LangSet core = child;
            core.by_len[0][0] = false;  // factor out epsilon: R{m,n} over core
            // With epsilon available in the child, any 0..n core factors work
            // (epsilon pads up to m); without it, exactly m..n.
            int lo = has_eps ? 0 : a->min;
            long hi = a->max == kInfinity ? max_len : a->max;
            if (hi > max_len) hi = max_len;  // longer products exceed max_len
            LangSet powk(sigma, max_len);
            powk.by_len[0][0] = true;  // core^0
            if (lo <= 0) r.by_len[0][0] = true;
            for (long k = 1; k <= hi; ++k) {
                powk = set_concat(powk, core);
                if (k >= lo) r = set_union(r, powk);
                if (powk.count() == 0) break;
            }
            if (a->min == 0 && !r.by_len[0][0]) r.by_len[0][0] = true;
            return r;
        }
    }
    return r;
}

inline std::vector<SymbolId> decode_word(std::size_t code, int len, int sigma) {
    std::vector<SymbolId> w(len);
    for (int i = len - 1; i >= 0; --i) {
        w[i] = static_cast<SymbolId>(code % sigma);
        code /= sigma;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Random AST generation.
// ---------------------------------------------------------------------------
struct AstGenConfig {
    int sigma = 2;
    int max_depth = 5;
    bool allow_negation = true;
    bool allow_unbounded = true;  // Repeat with max = infinity
};

inline RegexAst random_ast(std::mt19937& rng, const Alphabet& alphabet, const AstGenConfig& cfg,
                           int depth = 0) {
    auto pick = [&](int n) { return static_cast<int>(rng() % n); };
    bool leaf = depth >= cfg.max_depth || pick(4) == 0;
    if (leaf) {
        switch (pick(4)) {
            case 0: return make_epsilon();
            case 1: return make_empty();
            case 2: return make_literal(pick(cfg.sigma));
            default: {
                SymbolSet cls;
                int k = 1 + pick(cfg.sigma);
                while (static_cast<int>(cls.size()) < k) cls.insert(pick(cfg.sigma));
                return make_class(cls, alphabet);
            }
        }
    }
    switch (pick(cfg.allow_negation ? 5 : 4)) {
        case 0:
            return make_concat(random_ast(rng, alphabet, cfg, depth + 1),
                               random_ast(rng, alphabet, cfg, depth + 1));
        case 1:
            return make_disjunction(random_ast(rng, alphabet, cfg, depth + 1),
                                    random_ast(rng, alphabet, cfg, depth + 1));
        case 2:
            return make_intersection(random_ast(rng, alphabet, cfg, depth + 1),
                                     random_ast(rng, alphabet, cfg, depth + 1));
        case 3: {
            int m = pick(3);
            bool unbounded = cfg.allow_unbounded && pick(2) == 0;
            int n = unbounded ? kInfinity : m + pick(3);
            return make_repeat(random_ast(rng, alphabet, cfg, depth + 1), m, n);
        }
        default:
            return make_negation(random_ast(rng, alphabet, cfg, depth + 1));
    }
}

}  // namespace semmt::testing

#endif  // SEMMT_TESTS_HELPERS_HPP

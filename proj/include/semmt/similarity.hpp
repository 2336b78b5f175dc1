#ifndef SEMMT_SIMILARITY_HPP
#define SEMMT_SIMILARITY_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <semmt/automata.hpp>
#include <semmt/errors.hpp>
#include <semmt/regex_ast.hpp>

namespace semmt {

enum class Metric { SemmtR, SemmtD, SemmtH, Leven, Bleu, External };

inline std::string metric_name(Metric m) {
    switch (m) {
        case Metric::SemmtR: return "semmt-r";
        case Metric::SemmtD: return "semmt-d";
        case Metric::SemmtH: return "semmt-h";
        case Metric::Leven: return "leven";
        case Metric::Bleu: return "bleu";
        case Metric::External: return "external";
    }
    return "?";
}

struct SimilarityScore {
    Metric metric = Metric::External;
    std::string external_name;  // set for Metric::External
    double value = 0.0;
    // SemMT-D convergence metadata
    int lambda_stop = -1;
    bool converged = true;
    // SemMT-H blend weight
    double k = -1.0;

    [[nodiscard]] std::string name() const {
        return metric == Metric::External ? external_name : metric_name(metric);
    }
};

struct DfaSimConfig {
    double eps_conv = 0.001;
    int lambda_min = -1;  // < 0: use the live-state count of the product automaton
    int lambda_max = 64;
    int consecutive_stable = 2;
    std::size_t state_cap = kDefaultStateCap;
};

namespace detail {

template <typename Seq>
int edit_distance(const Seq& a, const Seq& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace detail

/// Token-level edit similarity between regexes: 1 - D / max(|tok1|, |tok2|).
/// Terminals count as distance one via the tokenization rules.
inline SimilarityScore semmt_r(const RegexAst& r1, const RegexAst& r2,
                               const Alphabet& alphabet) {
    TokenSeq t1 = tokenize_regex(r1, alphabet);
    TokenSeq t2 = tokenize_regex(r2, alphabet);
    int d = detail::edit_distance(t1, t2);
    double denom = static_cast<double>(std::max(t1.size(), t2.size()));
    SimilarityScore s;
    s.metric = Metric::SemmtR;
    s.value = 1.0 - static_cast<double>(d) / denom;
    return s;
}

/// Convergent Jaccard similarity over bounded languages. Counts words of
/// length at most λ for intersection and union on one product automaton, and
/// iterates λ until the value is stable.
inline SimilarityScore semmt_d(const RegexAst& r1, const RegexAst& r2, AlphabetPtr alphabet,
                               const DfaSimConfig& cfg = {}) {
    SimilarityScore s;
    s.metric = Metric::SemmtD;

    Dfa d1 = compile_to_dfa(r1, alphabet, cfg.state_cap);
    Dfa d2 = compile_to_dfa(r2, alphabet, cfg.state_cap);
    if (equivalent(d1, d2)) {
        s.value = 1.0;
        s.lambda_stop = 0;
        s.converged = true;
        return s;
    }

    ProductDfa p = product(d1, d2, cfg.state_cap);
    int lambda_min = cfg.lambda_min >= 0 ? cfg.lambda_min : live_state_count(p);
    BigRational eps(cfg.eps_conv);

    std::vector<BigInt> ways(p.dfa.num_states(), 0);
    ways[p.dfa.start] = 1;
    BigInt cum_inter = 0, cum_union = 0;
    BigRational prev = 0, cur = 0;
    int stable = 0;
    int lambda = 0;
    bool converged = false;

    for (;; ++lambda) {
        for (int st = 0; st < p.dfa.num_states(); ++st) {
            if (ways[st] == 0) continue;
            if (p.accept_both[st]) cum_inter += ways[st];
            if (p.accept_either[st]) cum_union += ways[st];
        }
        cur = cum_union == 0 ? BigRational(1) : BigRational(cum_inter, cum_union);
        if (lambda > 0) {
            BigRational diff = cur > prev ? cur - prev : prev - cur;
            stable = diff < eps ? stable + 1 : 0;
        }
        if (lambda >= lambda_min && stable >= cfg.consecutive_stable) {
            converged = true;
            break;
        }
        if (lambda >= cfg.lambda_max) break;
        prev = cur;
        std::vector<BigInt> next(p.dfa.num_states(), 0);
        for (int st = 0; st < p.dfa.num_states(); ++st) {
            if (ways[st] == 0) continue;
            for (int c = 0; c < p.dfa.num_classes(); ++c)
                next[p.dfa.delta[st][c]] += ways[st] * p.dfa.class_weight(c);
        }
        ways = std::move(next);
    }

    s.value = cur.convert_to<double>();
    s.lambda_stop = lambda;
    s.converged = converged;
    return s;
}

/// One bounded-λ evaluation of the Jaccard ratio, as an exact rational.
inline BigRational semmt_d_at(const RegexAst& r1, const RegexAst& r2, AlphabetPtr alphabet,
                              int lambda, std::size_t state_cap = kDefaultStateCap) {
    Dfa d1 = compile_to_dfa(r1, alphabet, state_cap);
    Dfa d2 = compile_to_dfa(r2, alphabet, state_cap);
    ProductDfa p = product(d1, d2, state_cap);
    BigInt inter = count_words_upto(with_accepting(p, p.accept_both), lambda).cumulative();
    BigInt uni = count_words_upto(with_accepting(p, p.accept_either), lambda).cumulative();
    if (uni == 0) return 1;
    return {inter, uni};
}

/// K-weighted blend of SemMT-R and SemMT-D.
inline SimilarityScore semmt_h(const RegexAst& r1, const RegexAst& r2, AlphabetPtr alphabet,
                               double k, const DfaSimConfig& cfg = {}) {
    if (!(k >= 0.0 && k <= 1.0)) throw InvalidParameter("K must lie in [0,1]");
    SimilarityScore reg = semmt_r(r1, r2, *alphabet);
    SimilarityScore dfa = semmt_d(r1, r2, alphabet, cfg);
    SimilarityScore s;
    s.metric = Metric::SemmtH;
    s.value = k * reg.value + (1.0 - k) * dfa.value;
    s.k = k;
    s.lambda_stop = dfa.lambda_stop;
    s.converged = dfa.converged;
    return s;
}

namespace detail {

inline std::string normalize_sentence(const std::string& text) {
    std::string out;
    bool pending_space = false;
    for (char raw : text) {
        auto c = static_cast<unsigned char>(raw);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

/// Case-folded word tokens with punctuation split into separate tokens.
inline std::vector<std::string> word_tokens(const std::string& text) {
    std::vector<std::string> toks;
    std::string cur;
    auto flush = [&]() {
        if (!cur.empty()) {
            toks.push_back(cur);
            cur.clear();
        }
    };
    for (char raw : text) {
        auto c = static_cast<unsigned char>(raw);
        if (std::isspace(c)) {
            flush();
        } else if (std::ispunct(c)) {
            flush();
            toks.emplace_back(1, static_cast<char>(c));
        } else {
            cur += static_cast<char>(std::tolower(c));
        }
    }
    flush();
    return toks;
}

}  // namespace detail

/// Character-level edit similarity on case-folded, whitespace-normalized text.
inline SimilarityScore leven_sim(const std::string& s1, const std::string& s2) {
    std::string a = detail::normalize_sentence(s1);
    std::string b = detail::normalize_sentence(s2);
    if (a.empty() || b.empty()) throw EmptyInput();
    int d = detail::edit_distance(a, b);
    SimilarityScore s;
    s.metric = Metric::Leven;
    s.value = 1.0 - static_cast<double>(d) / static_cast<double>(std::max(a.size(), b.size()));
    return s;
}

/// Sentence-level BLEU, n-grams 1..4, add-one smoothing on the higher-order
/// precisions, brevity penalty. Directional: candidate is the back
/// translation, reference the original.
inline SimilarityScore bleu_sim(const std::string& candidate, const std::string& reference) {
    auto cand = detail::word_tokens(candidate);
    auto ref = detail::word_tokens(reference);
    if (cand.empty() || ref.empty()) throw EmptyInput();

    auto ngrams = [](const std::vector<std::string>& toks, std::size_t n) {
        std::map<std::vector<std::string>, int> grams;
        if (toks.size() >= n)
            for (std::size_t i = 0; i + n <= toks.size(); ++i)
                grams[{toks.begin() + i, toks.begin() + i + n}]++;
        return grams;
    };

    double log_sum = 0.0;
    bool zero = false;
    for (std::size_t n = 1; n <= 4; ++n) {
        auto cg = ngrams(cand, n);
        auto rg = ngrams(ref, n);
        long total = 0, matched = 0;
        for (auto& [gram, count] : cg) {
            total += count;
            auto it = rg.find(gram);
            if (it != rg.end()) matched += std::min(count, it->second);
        }
        double p;
        if (n == 1) {
            p = total == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total);
            if (p == 0.0) zero = true;
        } else {
            p = static_cast<double>(matched + 1) / static_cast<double>(total + 1);
        }
        if (!zero) log_sum += 0.25 * std::log(p);
    }

    SimilarityScore s;
    s.metric = Metric::Bleu;
    if (zero) {
        s.value = 0.0;
        return s;
    }
    double bp = cand.size() >= ref.size()
                    ? 1.0
                    : std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size()));
    s.value = std::clamp(bp * std::exp(log_sum), 0.0, 1.0);
    return s;
}

}  // namespace semmt

#endif  // SEMMT_SIMILARITY_HPP

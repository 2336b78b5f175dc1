#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include <semmt/automata.hpp>
#include <semmt/nl2regex.hpp>
#include <semmt/regex_parser.hpp>
#include <semmt/similarity.hpp>

using namespace semmt;

namespace {
const Lexicon& lex() {
    static Lexicon l = Lexicon::defaults();
    return l;
}
AlphabetPtr alpha() { return standard_alphabet(); }

std::string x(const std::string& sentence) {
    return render_regex(sentence_to_regex(sentence, lex(), *alpha()), *alpha());
}
}  // namespace

TEST_CASE("running-example sentences transform to their regexes") {
    CHECK(x("A string that contains only 3 or more uppercase letters.") == "[A-Z]{3,}");
    CHECK(x("A string that contains only at most 3 uppercase letters.") == "[A-Z]{0,3}");
    CHECK(x("The U.S. report does not contain only that promise.") == "~[Y]");
    CHECK(x("The U.S. report contains only that promise.") == "[Y]");
}

TEST_CASE("quantifier phrasing variants") {
    CHECK(x("A string that contains only at least 3 uppercase letters.") == "[A-Z]{3,}");
    CHECK(x("A string that contains only no more than 5 digits.") == "[0-9]{0,5}");
    CHECK(x("A string that contains only more than 2 lowercase letters.") == "[a-z]{3,}");
    CHECK(x("A string that contains only fewer than 4 digits.") == "[0-9]{0,3}");
    CHECK(x("A string that contains only three or more vowels.") == "[AEIOUaeiou]{3,}");
}

TEST_CASE("vague quantifier approximation: over, under, context") {
    std::string sentence = "The report contains only a few promises.";
    AbstractedSentence abs = abstract_sentence(sentence, lex(), *alpha());
    CHECK(abs.has_vague());

    auto regex_for = [&](VagueMode mode, std::optional<int> ctx = std::nullopt) {
        AbstractedSentence approx = approximate_vague(abs, mode, ctx, lex());
        return transform_to_regex(approx, lex(), *alpha());
    };
    CHECK(render_regex(regex_for(VagueMode::over), *alpha()) == "[Y]{3,}");
    CHECK(render_regex(regex_for(VagueMode::under), *alpha()) == "[Y]{1,3}");
    CHECK(render_regex(regex_for(VagueMode::context, 25), *alpha()) == "[Y]{3,25}");

    // "several" defaults to 5
    AbstractedSentence sev =
        abstract_sentence("The report contains only several promises.", lex(), *alpha());
    AbstractedSentence over = approximate_vague(sev, VagueMode::over, std::nullopt, lex());
    CHECK(render_regex(transform_to_regex(over, lex(), *alpha()), *alpha()) == "[Y]{5,}");
}

TEST_CASE("approximation ordering between the three modes") {
    // With the published bounds (under (1,m), context (m,c), over (m,inf)),
    // context is a subset of over, and under agrees with both at and above
    // the anchor m; the words under adds below m are in neither.
    AbstractedSentence abs =
        abstract_sentence("The report contains only a few promises.", lex(), *alpha());
    auto dfa_for = [&](VagueMode mode, std::optional<int> ctx) {
        AbstractedSentence approx = approximate_vague(abs, mode, ctx, lex());
        return compile_to_dfa(transform_to_regex(approx, lex(), *alpha()), alpha());
    };
    Dfa under = dfa_for(VagueMode::under, std::nullopt);
    Dfa context = dfa_for(VagueMode::context, 25);
    Dfa over = dfa_for(VagueMode::over, std::nullopt);
    auto subset = [](const Dfa& a, const Dfa& b) {
        return is_empty(intersect(a, complement(b)));
    };
    CHECK(subset(context, over));
    // anchor overlap: the shared part of under and over lies inside context
    CHECK(subset(intersect(under, over), context));
    CHECK_FALSE(subset(over, under));
    CHECK_FALSE(subset(over, context));
    // all three agree on the anchor word Y{3}
    Dfa anchor = compile_to_dfa(parse_regex("[Y]{3}", *alpha()), alpha());
    CHECK(subset(anchor, under));
    CHECK(subset(anchor, context));
    CHECK(subset(anchor, over));
}

TEST_CASE("abstraction bindings re-substitute to the original words") {
    std::string sentence = "The U.S. report does not contain only that promise.";
    AbstractedSentence abs = abstract_sentence(sentence, lex(), *alpha());
    // token-for-token faithfulness: edge punctuation aside, the original
    // word sequence is recovered exactly
    std::string expected;
    for (const auto& w : nl::sentence_words(sentence)) {
        if (!expected.empty()) expected += ' ';
        expected += w.original;
    }
    CHECK(abs.resubstitute() == expected);
    CHECK(!abs.bindings.empty());
}

TEST_CASE("abstraction is deterministic") {
    std::string s = "The quarterly report contains only a few promises.";
    AbstractedSentence a = abstract_sentence(s, lex(), *alpha());
    AbstractedSentence b = abstract_sentence(s, lex(), *alpha());
    CHECK(a.skeleton() == b.skeleton());
    CHECK(a.bindings == b.bindings);
    CHECK(ast_equal(sentence_to_regex(s, lex(), *alpha()),
                    sentence_to_regex(s, lex(), *alpha())));
}

TEST_CASE("error paths") {
    // no quantifier or logic content
    CHECK_THROWS_AS(abstract_sentence("The weather is nice today.", lex(), *alpha()),
                    NoPatternMatch);
    // context mode without a bound
    AbstractedSentence abs =
        abstract_sentence("The report contains only a few promises.", lex(), *alpha());
    CHECK_THROWS_AS(approximate_vague(abs, VagueMode::context, std::nullopt, lex()),
                    MissingContext);
    // approximating a sentence with no vague quantifier
    AbstractedSentence exact = abstract_sentence(
        "A string that contains only 3 or more uppercase letters.", lex(), *alpha());
    CHECK_THROWS_AS(approximate_vague(exact, VagueMode::over, std::nullopt, lex()),
                    NoVagueQuantifier);
    // vague quantifier reaching transformation unapproximated
    CHECK_THROWS_AS(transform_to_regex(abs, lex(), *alpha()), UnsupportedSkeleton);
}

TEST_CASE("longest match wins: 'no more than 3' is not 'more than 3'") {
    CHECK(x("A string that contains only no more than 3 digits.") == "[0-9]{0,3}");
}

TEST_CASE("number words parse up to twenty") {
    CHECK(x("A string that contains only at least seventeen digits.") == "[0-9]{17,}");
    CHECK(x("A string that contains only at most twenty digits.") == "[0-9]{0,20}");
}

TEST_CASE("lexicon round-trips through its TSV format") {
    Lexicon original = Lexicon::defaults();
    std::string path = "lexicon_roundtrip_test.tsv";
    original.save(path);
    Lexicon loaded = Lexicon::load(path);
    std::remove(path.c_str());
    // the reloaded lexicon drives identical transformations
    for (const char* s : {"A string that contains only 3 or more uppercase letters.",
                          "The U.S. report does not contain only that promise.",
                          "The report contains only a few promises."}) {
        CHECK(abstract_sentence(s, original, *alpha()).skeleton() ==
              abstract_sentence(s, loaded, *alpha()).skeleton());
    }
    CHECK(render_regex(sentence_to_regex("A string that contains only at most 3 digits.", loaded,
                                         *alpha()),
                       *alpha()) == "[0-9]{0,3}");
}

TEST_CASE("paired vague phrases give high language similarity") {
    auto a = sentence_to_regex("The report contains only a few promises.", lex(), *alpha());
    auto b = sentence_to_regex("The report contains only several promises.", lex(), *alpha());
    SimilarityScore s = semmt_d(a, b, alpha());
    CHECK(s.value == doctest::Approx(0.957).epsilon(0.011));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <semmt/regex_ast.hpp>
#include <semmt/regex_parser.hpp>

#include "helpers.hpp"

using namespace semmt;

namespace {
const Alphabet& alpha() {
    static Alphabet a = Alphabet::standard();
    return a;
}
RegexAst parse(const std::string& s) { return parse_regex(s, alpha()); }
std::string rt(const std::string& s) { return render_regex(parse(s), alpha()); }
}  // namespace

TEST_CASE("parse and render the running-example regexes") {
    CHECK(rt("[A-Z]{3,}") == "[A-Z]{3,}");
    CHECK(rt("[A-Z]{0,3}") == "[A-Z]{0,3}");
    CHECK(rt("~[Y]") == "~[Y]");
    CHECK(rt("[Y]") == "[Y]");
}

TEST_CASE("whitespace inside braces is tolerated but not re-emitted") {
    CHECK(rt("[A-Z]{3, }") == "[A-Z]{3,}");
    CHECK(rt("[A-Z]{ 0 , 3 }") == "[A-Z]{0,3}");
}

TEST_CASE("sugar desugars to Repeat") {
    RegexAst q = parse("a?");
    CHECK(q->kind == NodeKind::Repeat);
    CHECK(q->min == 0);
    CHECK(q->max == 1);
    RegexAst st = parse("a*");
    CHECK(st->min == 0);
    CHECK(st->max == kInfinity);
    RegexAst pl = parse("a+");
    CHECK(pl->min == 1);
    CHECK(pl->max == kInfinity);
    RegexAst ex = parse("a{4}");
    CHECK(ex->min == 4);
    CHECK(ex->max == 4);
    RegexAst lo = parse("a{2,}");
    CHECK(lo->min == 2);
    CHECK(lo->max == kInfinity);
}

TEST_CASE("desugar soundness: sugar equals explicit Repeat by enumeration") {
    Alphabet ab = Alphabet::custom("ab");
    struct Pair {
        const char* sugar;
        const char* expanded;
    };
    for (const auto& [sugar, expanded] : {Pair{"a?", "a{0,1}"}, Pair{"a*", "a{0,}"},
                                          Pair{"a+", "a{1,}"}, Pair{"(a|b){2}", "(a|b){2,2}"},
                                          Pair{"(ab){1,}", "ab(ab){0,}"}}) {
        auto l1 = testing::oracle_lang(parse_regex(sugar, ab), 2, 5);
        auto l2 = testing::oracle_lang(parse_regex(expanded, ab), 2, 5);
        for (int n = 0; n <= 5; ++n) CHECK(l1.by_len[n] == l2.by_len[n]);
    }
}

TEST_CASE("operator precedence: repetition, negation, concat, &, |") {
    // ~ binds tighter than concat: ~ab == (~a)b
    CHECK(ast_equal(parse("~ab"), make_concat(make_negation(parse("a")), parse("b"))));
    // concat binds tighter than &: ab&cd == (ab)&(cd)
    CHECK(ast_equal(parse("ab&cd"), make_intersection(parse("ab"), parse("cd"))));
    // & binds tighter than |
    CHECK(ast_equal(parse("a|b&c"), make_disjunction(parse("a"), parse("b&c"))));
    // repetition binds tighter than ~: ~a{2} == ~(a{2})
    CHECK(ast_equal(parse("~a{2}"), make_negation(parse("a{2}"))));
    // left associativity
    CHECK(ast_equal(parse("a|b|c"), make_disjunction(parse("a|b"), parse("c"))));
}

TEST_CASE("character class rendering compresses runs and names known classes") {
    CHECK(rt("[A-Z]") == "[A-Z]");
    CHECK(rt("[a-z]") == "[a-z]");
    CHECK(rt("[0-9]") == "[0-9]");
    CHECK(rt("[abc]") == "[a-c]");
    CHECK(rt("[ace]") == "[ace]");
}

TEST_CASE("singleton class canonicalizes to a literal") {
    CHECK(ast_equal(parse("[a]"), parse("a")));
    // ...and to an abstract symbol for reserved names
    CHECK(parse("[Y]")->kind == NodeKind::Abstract);
    CHECK(parse("Y")->kind == NodeKind::Literal);
}

TEST_CASE("tokenization goldens") {
    CHECK(tokenize_regex(parse("[A-Z]{3,}"), alpha()) ==
          TokenSeq{"[A-Z]", "{", "3", ",", "}"});
    CHECK(tokenize_regex(parse("[A-Z]{0,3}"), alpha()) ==
          TokenSeq{"[A-Z]", "{", "0", ",", "3", "}"});
    CHECK(tokenize_regex(parse("~[Y]"), alpha()) == TokenSeq{"~", "[Y]"});
    CHECK(tokenize_regex(parse("[Y]"), alpha()) == TokenSeq{"[Y]"});
}

TEST_CASE("tokenization is deterministic on equal ASTs") {
    RegexAst a = parse("(a|b){2,4}&~c");
    RegexAst b = parse("(a|b){2,4}&~c");
    CHECK(ast_equal(a, b));
    CHECK(tokenize_regex(a, alpha()) == tokenize_regex(b, alpha()));
}

TEST_CASE("syntax errors carry a position") {
    CHECK_THROWS_AS(parse("a|"), SyntaxError);
    CHECK_THROWS_AS(parse("a{3,2}"), SyntaxError);
    CHECK_THROWS_AS(parse("[z-a]"), SyntaxError);
    CHECK_THROWS_AS(parse("(a"), SyntaxError);
    CHECK_THROWS_AS(parse(""), SyntaxError);
    CHECK_THROWS_AS(parse("a)"), SyntaxError);
    try {
        parse("a{3,2}");
    } catch (const SyntaxError& e) {
        CHECK(e.position() > 0);
        CHECK(!e.reason().empty());
    }
}

TEST_CASE("property: parse(render(ast)) round-trips random ASTs") {
    Alphabet ab = Alphabet::custom("abcd");
    std::mt19937 rng(20260826);
    testing::AstGenConfig cfg;
    cfg.sigma = 4;
    cfg.max_depth = 6;
    for (int i = 0; i < 400; ++i) {
        RegexAst a = testing::random_ast(rng, ab, cfg);
        std::string text = render_regex(a, ab);
        RegexAst back = parse_regex(text, ab);
        CHECK_MESSAGE(ast_equal(a, back), "failed round trip: " << text);
        // render is a fixpoint
        CHECK(render_regex(back, ab) == text);
    }
}

#include "oracle.hh"

#include <posmt/catalog.hh>
#include <posmt/error.hh>
#include <posmt/eval.hh>
#include <posmt/parser.hh>

#include <doctest.h>

using namespace posmt;

TEST_CASE("declared classes are checked")
{
    auto sig = catalog::poset_signature();
    CHECK(parse_formula("positive: exists x y. leq(x,y) & leq(y,x)", sig.get()).kind == ParsedKind::Positive);
    CHECK(parse_formula("huniversal: ! exists x. leq(x,x)", sig.get()).sentence->origin
            == SentenceClass::HUniversal);
    auto h = parse_formula("hinductive: forall x y. leq(x,y) -> leq(y,x) | x = y", sig.get());
    REQUIRE(h.sentence);
    CHECK(h.sentence->conjuncts.size() == 1);

    try {
        parse_formula("positive: exists x. !leq(x,x)", sig.get());
        FAIL("negation accepted in a positive formula");
    }
    catch (const ParseError & e) {
        CHECK(e.where().line == 1);
        CHECK(e.where().column == 21);
    }
    CHECK_THROWS_AS(parse_formula("hinductive: forall x. leq(x,x) -> !leq(x,x)", sig.get()), ParseError);
    CHECK_THROWS_AS(parse_formula("positive: exists x. leq(x", sig.get()), ParseError);
}

TEST_CASE("general formulas are classified by shape")
{
    auto sig = catalog::poset_signature();
    auto cls = [&](const char * text) { return classify_sentence(parse_formula(text, sig.get()).formula); };
    CHECK(cls("exists x. leq(x,x)") == SentenceClass::Positive);
    CHECK(cls("!exists x y. leq(x,y) & !leq(y,x)") == SentenceClass::Outside);
    CHECK(cls("!exists x. leq(x,x)") == SentenceClass::HUniversal);
    CHECK(cls("forall x. exists y. leq(x,y)") == SentenceClass::HInductive);
    CHECK(cls("forall x. exists y. !leq(x,y)") == SentenceClass::Outside);
}

TEST_CASE("printing and parsing round-trip")
{
    auto sig = catalog::group_signature();
    for (auto text : {"positive: exists x. mul(x,x) = e & inv(x) = x",
             "hinductive: forall x y. mul(x,y) = e -> mul(y,x) = e; forall x. true -> mul(x,e) = x",
             "huniversal: !exists x. inv(inv(x)) = mul(x,x) & x = e"}) {
        auto first = parse_formula(text, sig.get());
        REQUIRE(first.sentence);
        auto printed = to_string(*first.sentence);
        auto second = parse_formula(printed, sig.get());
        REQUIRE(second.sentence);
        CHECK(to_string(*second.sentence) == printed);
        CHECK(same_formula(first.sentence->as_formula(), second.sentence->as_formula()));
    }
}

TEST_CASE("evaluation agrees with a direct recursive evaluator")
{
    auto graph = oracle::graph_signature();
    auto unary = oracle::unary_signature();
    std::vector<std::pair<SignatureRef, const char *>> cases{
        {graph, "forall x. exists y. R(x,y)"},
        {graph, "exists x y. R(x,y) & R(y,x) & !(x = y)"},
        {graph, "forall x y z. R(x,y) & R(y,z) -> R(x,z)"},
        {graph, "!exists x. R(x,x) | forall y. R(y,y)"},
        {unary, "forall x. f(f(x)) = x"},
        {unary, "exists x. f(x) = x"},
        {unary, "forall x y. f(x) = f(y) -> x = y"},
    };
    std::mt19937_64 rng(11);
    for (auto & [sig, text] : cases) {
        auto f = parse_formula(text, sig.get()).formula;
        for (int i = 0; i < 60; ++i) {
            auto s = oracle::random_structure(sig, 1 + int(rng() % 4), rng);
            CHECK(eval(s, f) == oracle::eval(s, f));
        }
    }
}

TEST_CASE("unassigned free variables and foreign symbols are rejected")
{
    auto sig = catalog::poset_signature();
    auto f = parse_formula("leq(x,y)", sig.get()).formula;
    CHECK_THROWS_AS(eval(catalog::chain2(), f), UnboundVariable);
    auto g = parse_formula("exists x. R(x,x)").formula;
    CHECK_THROWS_AS(eval(catalog::chain2(), g), SemanticError);
}

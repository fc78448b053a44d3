#include "oracle.hh"

#include <posmt/catalog.hh>
#include <posmt/error.hh>
#include <posmt/morphism.hh>

#include <doctest.h>

using namespace posmt;

TEST_CASE("hom search finds exactly the brute-force homomorphisms")
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        auto sig = i % 2 ? oracle::graph_signature() : oracle::unary_signature();
        auto a = oracle::random_structure(sig, 1 + int(rng() % 3), rng);
        auto b = oracle::random_structure(sig, 1 + int(rng() % 4), rng);
        auto lib = enumerate_homs(a, b);
        auto brute = oracle::homs(a, b);
        REQUIRE(lib.size() == brute.size());
        for (std::size_t j = 0; j < lib.size(); ++j) {
            CHECK(lib[j].morphism.map == brute[j]);
            CHECK(is_embedding(lib[j].morphism) == oracle::is_embedding(a, b, brute[j]));
            CHECK(find_retraction(lib[j].morphism).has_value() == oracle::retracts(a, b, brute[j]));
        }
    }
}

TEST_CASE("constraints restrict the search")
{
    auto c = catalog::chain2();
    auto facts = FactSet::of(c);
    HomConstraint injective;
    injective.injective = true;
    std::size_t n = 0;
    search_homs(facts, c, injective, [&](auto &) { return ++n, true; });
    CHECK(n == 1);

    HomConstraint pinned;
    pinned.required = {*c.element_index("t")};
    auto h = find_hom(facts, c, pinned);
    REQUIRE(h);
    CHECK(*h == std::vector<Element>{1, 1});

    HomConstraint apart;
    apart.distinct = {{0, 1}};
    apart.forbidden = {{0, 0}};
    CHECK(! find_hom(facts, c, apart));
}

TEST_CASE("strong immersions between finite structures are the isomorphisms")
{
    for (auto & sig : {oracle::graph_signature(), oracle::unary_signature()}) {
        auto all = oracle::structures(sig, 2);
        for (auto & a : all)
            for (auto & b : all)
                for (auto & m : oracle::homs(a, b)) {
                    auto s = is_strong_immersion(Morphism{a, b, m});
                    CHECK(s.holds == oracle::is_iso(a, b, m));
                    if (! s.holds && oracle::retracts(a, b, m))
                        CHECK(s.witness.has_value());
                }
    }
}

TEST_CASE("classification of the chain inclusions")
{
    auto point = catalog::point(), chain = catalog::chain2();
    auto bottom = classify_morphism(Morphism{point, chain, {0}});
    auto top = classify_morphism(Morphism{point, chain, {1}});
    CHECK(bottom.kind == MorphismKind::Immersion);
    CHECK(top.kind == MorphismKind::Immersion);
    CHECK(bottom.retraction.has_value());

    auto anti = catalog::antichain2();
    auto collapse = classify_morphism(Morphism{chain, point, {0, 0}});
    CHECK(collapse.kind == MorphismKind::Hom);
    auto into_chain = classify_morphism(Morphism{anti, chain, {0, 1}});
    CHECK(into_chain.kind == MorphismKind::Hom);
    CHECK_THROWS_AS(classify_morphism(Morphism{chain, anti, {0, 1}}), PreconditionError);
}

TEST_CASE("kind names")
{
    for (auto k : {MorphismKind::Hom, MorphismKind::Embedding, MorphismKind::Immersion, MorphismKind::StrongImmersion}) {
        CHECK(parse_kind(to_string(k)) == k);
        CHECK(parse_kind(std::string(1, kind_letter(k))) == k);
    }
    CHECK_THROWS_AS(parse_kind("x"), SemanticError);
}

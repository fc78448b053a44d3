#include "oracle.hh"

#include <posmt/catalog.hh>
#include <posmt/error.hh>
#include <posmt/structure.hh>

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace posmt;

TEST_CASE("tuple indices round-trip")
{
    for (int n = 1; n <= 4; ++n)
        for (int arity = 0; arity <= 3; ++arity)
            for (std::size_t i = 0; i < table_size(n, arity); ++i) {
                auto t = tuple_at(n, arity, i);
                CHECK(tuple_index(n, t) == i);
            }
}

TEST_CASE("structure invariants are enforced")
{
    auto sig = catalog::unary_signature();
    CHECK_THROWS_AS(FiniteStructure(sig, {"a", "b"}, {}, {{0, 2}}, {}), SemanticError);
    CHECK_THROWS_AS(FiniteStructure(sig, {"a", "a"}, {}, {{0, 1}}, {}), SemanticError);
    CHECK_THROWS_AS(FiniteStructure(sig, {}, {}, {{}}, {}), SemanticError);
    CHECK_NOTHROW(FiniteStructure(sig, {"a", "b"}, {}, {{1, 0}}, {}));
}

TEST_CASE("canonical codes agree with the brute-force isomorphism test")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto sig = i % 2 ? oracle::graph_signature() : oracle::unary_signature();
        int n = 1 + int(rng() % 4);
        auto a = oracle::random_structure(sig, n, rng);
        auto b = oracle::random_structure(sig, n, rng);
        CHECK((canonical_code(a) == canonical_code(b)) == (oracle::code(a) == oracle::code(b)));
        std::vector<Element> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(canonical_code(a.permuted(perm)) == canonical_code(a));
        CHECK(are_isomorphic(a, a.permuted(perm)));
    }
}

TEST_CASE("generated substructure closes under functions and constants")
{
    auto z4 = catalog::cyclic_group(4);
    auto two = *z4.element_index("2");
    auto sub = generated_substructure(z4, std::vector<Element>{two});
    CHECK(sub.structure.size() == 2);
    auto one = *z4.element_index("1");
    CHECK(generated_substructure(z4, std::vector<Element>{one}).structure.size() == 4);
    auto s = catalog::chain2();
    CHECK_THROWS_AS(generated_substructure(s, std::vector<Element>{}), SemanticError);
}

TEST_CASE("constant expansion suffixes clashing names")
{
    auto g = catalog::trivial_group().renamed({"e"});
    auto e = expand_with_constants(g, {}, "");
    REQUIRE(e.constant_names.size() == 1);
    CHECK(e.constant_names.front() == "e_1");
    CHECK(e.suffixed == std::vector<std::string>{"e_1"});
    CHECK(e.structure.signature().constants().size() == 2);
}

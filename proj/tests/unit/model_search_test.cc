#include "oracle.hh"

#include <posmt/catalog.hh>
#include <posmt/error.hh>
#include <posmt/model_search.hh>
#include <posmt/theory.hh>

#include <doctest.h>

using namespace posmt;

namespace
{
    auto count(const Theory & t, int size) -> std::size_t
    {
        auto fs = t.formulas();
        return find_models(t.signature, fs, size).size();
    }
}

TEST_CASE("posets up to isomorphism")
{
    auto t = catalog::partial_orders();
    std::size_t expected[] = {1, 2, 5, 16};
    for (int n = 1; n <= 4; ++n) {
        CHECK(count(t, n) == expected[n - 1]);
        if (n <= 3)
            CHECK(oracle::posets(n).size() == expected[n - 1]);
    }
}

TEST_CASE("groups and rings of small order")
{
    auto g = catalog::groups();
    std::size_t groups[] = {1, 1, 1, 2, 1};
    for (int n = 1; n <= 5; ++n)
        CHECK(count(g, n) == groups[n - 1]);
    // Commutative unital rings with 0 != 1: Z2; Z3; Z4, F2[x]/(x^2), F4, F2 x F2.
    auto r = catalog::rings();
    CHECK(count(r, 1) == 0);
    CHECK(count(r, 2) == 1);
    CHECK(count(r, 3) == 1);
    CHECK(count(r, 4) == 4);
}

TEST_CASE("plain enumeration matches the brute-force enumerator")
{
    for (auto & sig : {oracle::graph_signature(), oracle::unary_signature()}) {
        auto lib = enumerate_structures(sig, 3, true);
        auto brute = oracle::structures(sig, 3);
        CHECK(lib.size() == brute.size());
    }
    // Unlabelled functional digraphs: 1, 3, 7, 19.
    CHECK(oracle::structures(oracle::unary_signature(), 4).size() == 30);
}

TEST_CASE("labelled search without symmetry breaking")
{
    auto t = catalog::partial_orders();
    auto fs = t.formulas();
    ModelSearchOptions o;
    o.up_to_iso = false;
    // Labelled posets on 3 points.
    CHECK(find_models(t.signature, fs, 3, o).size() == 19);
    o.limit = 4;
    CHECK(find_models(t.signature, fs, 3, o).size() == 4);
}

TEST_CASE("the node cap is enforced")
{
    auto t = catalog::groups();
    auto fs = t.formulas();
    ModelSearchOptions o;
    o.node_cap = 10;
    CHECK_THROWS_AS(find_models(t.signature, fs, 4, o), BudgetExhausted);
}

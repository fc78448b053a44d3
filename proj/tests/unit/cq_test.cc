#include "oracle.hh"

#include <posmt/cq.hh>
#include <posmt/parser.hh>
#include <posmt/types.hh>

#include <doctest.h>

#include <set>

using namespace posmt;

TEST_CASE("positive formulas flatten into disjunctions of CQs")
{
    auto sig = oracle::graph_signature();
    auto f = parse_formula("exists x. R(x,x) | (exists y z. R(y,z) & R(z,y))", sig.get()).formula;
    CHECK(to_cq_dnf(f).size() == 2);
    CHECK(to_cq_dnf(parse_formula("false | false").formula).empty());

    auto usig = oracle::unary_signature();
    auto g = parse_formula("exists x. f(f(x)) = x", usig.get()).formula;
    auto dnf = to_cq_dnf(g);
    REQUIRE(dnf.size() == 1);
    CHECK(dnf.front().size() == 2);  // x and one auxiliary for f(x)
}

TEST_CASE("compiled CQs agree with direct evaluation")
{
    std::mt19937_64 rng(3);
    for (auto & sig : {oracle::graph_signature(), oracle::unary_signature()}) {
        auto pool = cq_pool(sig, 1, 3);
        for (int i = 0; i < 30; ++i) {
            auto s = oracle::random_structure(sig, 1 + int(rng() % 3), rng);
            for (std::size_t q = 0; q < pool->queries.size(); ++q) {
                auto f = pool->queries[q].to_formula();
                for (Element e = 0; e < s.size(); ++e) {
                    std::vector<Element> at{e};
                    CHECK(pool->compiled[q].holds(s, at)
                            == oracle::eval(s, f, {{pool->queries[q].free_variables.front(), e}}));
                }
            }
        }
    }
}

TEST_CASE("pools list each query once and respect the variable bound")
{
    for (auto & sig : {oracle::graph_signature(), oracle::unary_signature()})
        for (int k = 1; k <= 3; ++k) {
            auto pool = cq_pool(sig, 0, k);
            std::set<std::string> seen;
            for (auto & q : pool->queries) {
                CHECK(q.size() <= k);
                CHECK(is_positive(q.to_formula()));
                CHECK(seen.insert(to_string(q)).second);
            }
        }
}

TEST_CASE("Tu* containment is reverse inclusion of true sentences")
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        auto sig = i % 2 ? oracle::graph_signature() : oracle::unary_signature();
        int k = 1 + int(rng() % 3);
        auto a = oracle::random_structure(sig, 1 + int(rng() % 3), rng);
        auto b = oracle::random_structure(sig, 1 + int(rng() % 3), rng);
        auto pool = cq_pool(sig, 0, k);
        bool b_in_a = true;
        for (auto & q : pool->queries)
            if (oracle::eval(b, q.to_formula()) && ! oracle::eval(a, q.to_formula()))
                b_in_a = false;
        // Tu*(a) ⊆ Tu*(b) iff every sentence true in b is true in a.
        CHECK(tu_contained(type_profile(a, k, 0), type_profile(b, k, 0)) == b_in_a);
    }
}

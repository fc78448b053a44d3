#include "oracle.hh"

#include <report_json.hh>

#include <posmt/amalgamation.hh>
#include <posmt/catalog.hh>
#include <posmt/error.hh>

#include <doctest.h>

using namespace posmt;

TEST_CASE("structures and theories survive a JSON round trip")
{
    for (auto & s : {catalog::chain2(), catalog::cyclic_group(4), catalog::residue_ring(3), catalog::loop()}) {
        auto back = io::structure_from_json(io::to_json(s));
        CHECK(oracle::code(back) == oracle::code(s));
        CHECK(back.element_names() == s.element_names());
    }
    auto t = catalog::groups();
    auto back = io::theory_from_json(io::to_json(t));
    CHECK(back.name == t.name);
    REQUIRE(back.sentences.size() == t.sentences.size());
    for (std::size_t i = 0; i < t.sentences.size(); ++i)
        CHECK(to_string(back.sentences[i]) == to_string(t.sentences[i]));

    Budget b;
    b.N = 9;
    b.jobs = 4;
    auto bj = io::to_json(b);
    CHECK(! bj.contains("jobs"));
    CHECK(io::budget_from_json(bj).N == 9);
}

TEST_CASE("amalgamation reports are rechecked")
{
    AmalgamationProblem p{catalog::point(), catalog::chain2(), catalog::chain2(), {0}, {0},
            uniform_kinds(MorphismKind::Embedding), StructureClass::of(catalog::partial_orders()), true};
    p.budget.N = 4;
    auto j = io::report("amalgamate");
    j["problem"] = io::to_json(p);
    j["result"] = io::to_json(solve_amalgamation(p), p);
    auto ok = io::recheck(j);
    CHECK(ok.checked == 1);
    CHECK(ok.failures.empty());

    auto reread = io::solution_from_json(j["result"]["solution"], io::problem_from_json(j["problem"]));
    CHECK(verify_solution(p, reread).empty());

    auto tampered = j;
    tampered["result"]["solution"]["right_out"] = tampered["result"]["solution"]["left_out"];
    CHECK(! io::recheck(tampered).failures.empty());

    auto broken = j;
    broken["problem"].erase("base");
    CHECK_THROWS_AS(io::recheck(broken), SemanticError);
}

#include <posmt/amalgamation.hh>
#include <posmt/catalog.hh>
#include <posmt/error.hh>

#include <doctest.h>

using namespace posmt;

namespace
{
    auto vee(bool strong) -> AmalgamationProblem
    {
        AmalgamationProblem p{catalog::point(), catalog::chain2(), catalog::chain2(), {0}, {0},
                uniform_kinds(MorphismKind::Embedding), StructureClass::of(catalog::partial_orders()), strong};
        p.budget.N = 4;
        return p;
    }
}

TEST_CASE("kind tuples in every accepted form")
{
    auto k = parse_kind_tuple("[i,i,h,h]");
    CHECK(k == pregeneric_kinds(MorphismKind::Immersion, MorphismKind::Hom));
    CHECK(parse_kind_tuple("i,i,h,h") == k);
    CHECK(parse_kind_tuple("iihh") == k);
    CHECK(parse_kind_tuple("[s]") == uniform_kinds(MorphismKind::StrongImmersion));
    CHECK(parse_kind_tuple("sisi") == asymmetric_kinds(MorphismKind::StrongImmersion, MorphismKind::Immersion));
    CHECK(to_string(k) == "[i,i,h,h]");
    CHECK_THROWS(parse_kind_tuple("[i,x]"));
    CHECK_THROWS(parse_kind_tuple(""));
}

TEST_CASE("strong condition")
{
    AmalgamationSolution s{catalog::point(), {0}, {0}, {}, {}, {0}};
    CHECK(check_strong_condition(s, std::vector<Element>{0}, std::vector<Element>{0}));
    CHECK(check_strong_condition(s, std::vector<Element>{0}, std::vector<Element>{0}, true));
    AmalgamationSolution glued{catalog::point(), {0, 0}, {0, 0}, {}, {}, {0}};
    CHECK(! check_strong_condition(glued, std::vector<Element>{0}, std::vector<Element>{0}));
}

TEST_CASE("gluing two chains at the bottom")
{
    auto p = vee(true);
    auto r = solve_amalgamation(p);
    REQUIRE(r.value == VerdictValue::Yes);
    REQUIRE(r.solution);
    CHECK(r.solution->apex.size() == 3);
    CHECK(r.solution->strong_holds);
    CHECK(verify_solution(p, *r.solution).empty());

    auto bad = *r.solution;
    bad.right_out = bad.left_out;
    CHECK(! verify_solution(p, bad).empty());
    bad.right_out = {bad.left_out[0], bad.left_out[0]};
    CHECK(! verify_solution(p, bad).empty());
}

TEST_CASE("opposite maps into the chain cannot be amalgamated by embeddings")
{
    AmalgamationProblem p{catalog::antichain2(), catalog::chain2(), catalog::chain2(), {0, 1}, {1, 0},
            parse_kind_tuple("hhee"), StructureClass::of(catalog::partial_orders())};
    p.budget.N = 4;
    auto r = solve_amalgamation(p);
    CHECK(r.value == VerdictValue::No);
    CHECK(! r.solution);
    p.kinds = uniform_kinds(MorphismKind::Hom);
    CHECK(solve_amalgamation(p).value == VerdictValue::Yes);
}

TEST_CASE("invalid problems are rejected")
{
    auto p = vee(false);
    p.f = {1};
    p.kinds = parse_kind_tuple("ssee");
    CHECK_THROWS_AS(validate_problem(p), PreconditionError);
}

TEST_CASE("basis check and theorem registry")
{
    Budget b;
    b.n = 2;
    b.N = 4;
    auto report = check_basis(catalog::point(), uniform_kinds(MorphismKind::Embedding),
            StructureClass::of(catalog::partial_orders()), true, b);
    CHECK(report.verdict == VerdictValue::Yes);
    CHECK(! report.instances.empty());
    for (auto & inst : report.instances)
        CHECK(inst.result.value == VerdictValue::Yes);
    CHECK(theorem_ids().size() == 12);
    CHECK_THROWS(verify_theorem("no-such-theorem", {}, b));
}

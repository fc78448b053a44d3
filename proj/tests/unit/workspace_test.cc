#include "oracle.hh"

#include <posmt/catalog.hh>
#include <posmt/error.hh>
#include <posmt/workspace.hh>

#include <doctest.h>

#include <algorithm>

using namespace posmt;

namespace
{
    auto load(Workspace & w, std::string text) -> LoadReport
    {
        std::vector<SourceText> src{{"test.pm", std::move(text)}};
        return w.load(src);
    }

    auto has(const std::vector<std::string> & names, const std::string & n) -> bool
    {
        return std::find(names.begin(), names.end(), n) != names.end();
    }
}

TEST_CASE("prelude objects")
{
    auto w = Workspace::prelude();
    for (auto n : {"point", "chain2", "chain3", "antichain2", "loop", "Z4", "V4", "R3"})
        CHECK(has(w.structure_names(), n));
    for (auto n : {"T_pos", "T_any", "T_f1", "T_g", "T_ring"})
        CHECK(has(w.theory_names(), n));
    CHECK(has(w.morphism_names(), "bottom"));
    CHECK(has(w.problem_names(), "glue"));
    CHECK(oracle::code(w.structure("chain2")) == oracle::code(catalog::chain2()));
    CHECK_THROWS_AS(w.structure("nothing"), SemanticError);
}

TEST_CASE("loading structures, morphisms and problems")
{
    auto w = Workspace::prelude();
    auto r = load(w, R"(
structure v3 over poset { universe: a, b, c; leq: (a,a),(b,b),(c,c),(a,b),(a,c); }
morphism left from point to v3 { map: p -> a; }
amalgamation vv { base: point; left: left; right: left; kinds: [e,e,e,e]; class: theory T_pos; strong: true; budget: {N: 5}; }
)");
    CHECK(r.ok());
    CHECK(w.structure("v3").size() == 3);
    auto p = w.resolve(w.problem("vv"), Budget{});
    CHECK(p.budget.N == 5);
    CHECK(p.strong);
    CHECK(p.left.size() == 3);
}

TEST_CASE("semantic problems are collected per object")
{
    auto w = Workspace::prelude();
    auto r = load(w, R"(
structure bad over poset { universe: a; leq: (a,z); }
structure good over poset { universe: a; leq: (a,a); }
morphism m from good to missing { map: a -> a; }
)");
    CHECK(! r.ok());
    int errors = 0;
    for (auto & o : r.objects)
        errors += ! o.ok();
    CHECK(errors == 2);
    auto dup = load(w, "structure d over poset { universe: a; }\nstructure d over poset { universe: a; }\n");
    CHECK(! dup.ok());
}

TEST_CASE("syntax errors carry the source and position")
{
    auto w = Workspace::prelude();
    try {
        load(w, "structure x over poset {\n  universe a; }\n");
        FAIL("accepted");
    }
    catch (const ParseError & e) {
        CHECK(e.source() == "test.pm");
        CHECK(e.where().line == 2);
    }
    CHECK_THROWS_AS(load(w, "theory T over poset { positive: exists x. !leq(x,x); }"), ParseError);
}

TEST_CASE("formatted objects load back")
{
    auto w = Workspace::prelude();
    auto text = format_structure(catalog::cyclic_group(3), "z3copy") + format_theory(catalog::partial_orders());
    auto pos = catalog::partial_orders();
    Workspace fresh;
    auto r = load(fresh, format_signature(*catalog::group_signature()) + format_signature(*catalog::poset_signature())
                    + text);
    CHECK(r.ok());
    CHECK(oracle::code(fresh.structure("z3copy")) == oracle::code(catalog::cyclic_group(3)));
    CHECK(fresh.theory(pos.name).sentences.size() == pos.sentences.size());
}

TEST_CASE("budget entries")
{
    Budget b;
    set_budget_entry(b, "N", 7);
    set_budget_entry(b, "node-cap", 99);
    CHECK(b.N == 7);
    CHECK(b.node_cap == 99);
    CHECK_THROWS_AS(set_budget_entry(b, "n", 0), SemanticError);
    CHECK_THROWS_AS(set_budget_entry(b, "depth", 3), SemanticError);
}

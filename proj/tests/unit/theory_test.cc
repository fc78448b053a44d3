#include "oracle.hh"

#include <posmt/catalog.hh>
#include <posmt/error.hh>
#include <posmt/parser.hh>
#include <posmt/theory.hh>

#include <doctest.h>

using namespace posmt;

namespace
{
    auto small(int n, int N = 4, int k = 3) -> Budget
    {
        Budget b;
        b.n = n;
        b.N = N;
        b.k = k;
        return b;
    }
}

TEST_CASE("models and pc models of the poset theory")
{
    auto t = catalog::partial_orders();
    CHECK(models(t, small(3)).size() == 8);
    auto pcs = pc_models(t, small(3));
    REQUIRE(pcs.size() == 1);
    CHECK(pcs.front().size() == 1);
    auto v = is_pc_within(catalog::antichain2(), t, small(3));
    CHECK(v.no());
    REQUIRE(v.certificate.map("f"));
}

TEST_CASE("budgets are validated")
{
    auto b = small(3);
    b.k = 0;
    CHECK_THROWS_AS(validate_budget(b), PreconditionError);
    CHECK_THROWS_AS(models(catalog::partial_orders(), b), PreconditionError);
}

TEST_CASE("joint continuation and T-completeness")
{
    auto t = catalog::partial_orders();
    CHECK(is_jc_bounded(t, small(3)).yes());
    CHECK(is_T_complete_pair(t, t, t, small(2)).yes());

    // Two disjoint forced behaviours of f have no common continuation.
    auto sig = catalog::unary_signature();
    auto fixed = parse_formula("hinductive: forall x. true -> f(x) = x", sig.get()).sentence;
    auto swap = parse_formula("huniversal: !exists x. f(x) = x", sig.get()).sentence;
    Theory any{"T_any", sig, {}};
    auto tf = any.with({*fixed}, "fixed");
    auto ts = any.with({*swap}, "free");
    auto v = is_T_complete_pair(tf, ts, any, small(2));
    CHECK(v.yes());  // the fixed point of one maps anywhere; continuations need not satisfy both
    auto w = is_T_complete_pair(tf, ts, ts, small(2));
    CHECK(w.no());
    CHECK(! w.notes.empty());
}

TEST_CASE("ground refutation makes joint consistency fail")
{
    auto chain = catalog::chain2();
    auto d = diagram(chain, DiagramKind::Diag, small(3));
    auto sig = d.signature;
    auto flip = parse_formula("positive: leq(c_t, c_b)", sig.get()).sentence;
    Theory t{"flip", sig, {*flip}};
    auto v = joint_consistency_bounded({d, t}, small(3));
    CHECK(v.no());
    auto ok = joint_consistency_bounded({d, catalog::partial_orders()}, small(3));
    CHECK(ok.yes());
}

TEST_CASE("diagrams of the 2-chain")
{
    auto chain = catalog::chain2();
    auto plus = diagram(chain, DiagramKind::DiagPlus, small(3));
    CHECK(plus.sentences.size() == 3);
    auto full = diagram(chain, DiagramKind::Diag, small(3));
    CHECK(full.sentences.size() > plus.sentences.size());
    for (auto & s : full.sentences)
        CHECK(full.contains(s));
    auto tu = diagram(chain, DiagramKind::TuStar, small(3, 4, 2));
    auto dp = diagram(chain, DiagramKind::DiagPlusStar, small(3, 4, 2));
    for (auto & s : tu.sentences)
        CHECK(! oracle::eval(chain, s.conjuncts.front().premise));
    for (auto & s : dp.sentences)
        CHECK(oracle::eval(chain, s.conjuncts.front().conclusion));
    CHECK_THROWS_AS(parse_diagram_kind("Tx"), SemanticError);
    CHECK(parse_diagram_kind("tu*") == DiagramKind::TuStar);
}

TEST_CASE("characterization, extremality and the hull")
{
    auto t = catalog::has_cycle(1);
    auto r = jc_characterization_report(t, small(2, 3, 2));
    CHECK(r.conditions.size() == 5);
    CHECK(r.agree);
    CHECK(tu_ti_extremality_check(t, small(2, 3, 2)).yes());
    auto pos = catalog::partial_orders();
    auto hull = kaiser_hull_bounded(pos, small(3, 4, 2));
    for (auto & axiom : pos.sentences)
        CHECK(hull.hull.contains(axiom));
    CHECK(! hull.hull.sentences.empty());
}

TEST_CASE("companions from the loop")
{
    auto b = small(2, 4, 2);
    auto loop = catalog::loop();
    auto tu = to_theory(diagram(loop, DiagramKind::TuStar, b));
    auto ti = to_theory(diagram(loop, DiagramKind::TiStar, b));
    CHECK(companion_check_bounded(tu, ti, b).yes());
    CHECK(companion_check_bounded(tu, catalog::has_cycle(2), b).yes());
}

// One line per criterion: PASS or FAIL, the criterion, elapsed time, then any
// detail lines. Exit status is the number of failed criteria.

#include "oracle.hh"

#include <posmt/amalgamation.hh>
#include <posmt/catalog.hh>
#include <posmt/cq.hh>
#include <posmt/morphism.hh>
#include <posmt/parallel.hh>
#include <posmt/theory.hh>

#include <array>
#include <atomic>
#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

using namespace posmt;
using std::string;
using std::vector;

namespace
{
    struct Outcome
    {
        bool pass = true;
        vector<string> details;

        auto fail(const string & why) -> void
        {
            pass = false;
            if (details.size() < 20)
                details.push_back(why);
        }

        auto note(const string & what) -> void { details.push_back(what); }
    };

    struct Criterion
    {
        int id;
        string title;
        double limit_seconds;
        std::function<void(Outcome &)> run;
    };

    auto jobs() -> int
    {
        return int(std::max(1u, std::thread::hardware_concurrency()));
    }

    auto budget(int n, int N, int k) -> Budget
    {
        Budget b;
        b.n = n;
        b.N = N;
        b.k = k;
        b.jobs = jobs();
        return b;
    }

    auto satisfies(const FiniteStructure & s, const Theory & t) -> bool
    {
        for (auto & sentence : t.sentences)
            if (! oracle::eval(s, sentence.as_formula()))
                return false;
        return true;
    }

    auto same_structure(const FiniteStructure & a, const FiniteStructure & b) -> bool
    {
        return oracle::code(a) == oracle::code(b);
    }

    auto sentence_set(const DiagramSet & d) -> std::set<string>
    {
        std::set<string> out;
        for (auto & s : d.sentences)
            out.insert(to_string(s));
        return out;
    }

    auto subset(const std::set<string> & a, const std::set<string> & b) -> bool
    {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }

    auto describe(const FiniteStructure & s) -> string
    {
        std::ostringstream out;
        auto c = oracle::code(s);
        for (auto x : c)
            out << x;
        return s.signature().name() + "#" + out.str();
    }

    // 1
    auto poset_pc(Outcome & out) -> void
    {
        auto t = catalog::partial_orders();
        auto b = budget(4, 6, 3);
        auto v = is_pc_within(catalog::point(), t, b);
        if (! v.yes())
            out.fail("point: " + v.summary);
        int checked = 0;
        for (int size = 2; size <= 3; ++size)
            for (auto & p : oracle::posets(size)) {
                ++checked;
                auto w = is_pc_within(p, t, b);
                if (! w.no()) {
                    out.fail(describe(p) + ": " + w.summary);
                    continue;
                }
                auto * m = w.certificate.structure("M");
                auto * target = w.certificate.structure("B");
                auto * f = w.certificate.map("f");
                if (! m || ! target || ! f) {
                    out.fail(describe(p) + ": counterexample missing");
                    continue;
                }
                if (! satisfies(*target, t) || target->size() > b.n)
                    out.fail(describe(p) + ": counterexample target is not a model of size <= n");
                else if (oracle::strength(*m, *target, f->map) != 1)
                    out.fail(describe(p) + ": counterexample map is not a non-immersive homomorphism");
            }
        out.note("point is pc; " + std::to_string(checked) + " posets of size 2..3 are not, each with a checked "
                "counterexample");
    }

    // 2
    auto unary_pc(Outcome & out) -> void
    {
        auto b = budget(3, 6, 3);
        for (int n = 1; n <= 3; ++n) {
            auto t = catalog::has_cycle(n);
            auto pcs = pc_models(t, b);
            if (pcs.size() != 1 || ! same_structure(pcs.front(), catalog::loop()))
                out.fail(t.name + ": " + std::to_string(pcs.size()) + " bounded-pc models");
            else if (! satisfies(pcs.front(), t))
                out.fail(t.name + ": the pc model does not satisfy the theory");
            else
                out.note(t.name + ": unique bounded-pc model is the loop");
        }
    }

    // 3
    auto group_pc(Outcome & out) -> void
    {
        auto t = catalog::groups();
        auto v = is_pc_within(catalog::trivial_group(), t, budget(4, 6, 3));
        if (! v.yes())
            out.fail("trivial group at n=4: " + v.summary);
        auto pcs = pc_models(t, budget(3, 6, 3));
        if (pcs.size() != 1 || ! same_structure(pcs.front(), catalog::trivial_group()))
            out.fail(std::to_string(pcs.size()) + " bounded-pc groups at n=3");
        else
            out.note("trivial group is bounded-pc at n=4 and the only one at n=3");
    }

    struct Corpus
    {
        SignatureRef signature;
        vector<FiniteStructure> structures;
    };

    auto corpora() -> const vector<Corpus> &
    {
        static const vector<Corpus> all{{oracle::graph_signature(), oracle::structures(oracle::graph_signature(), 3)},
            {oracle::unary_signature(), oracle::structures(oracle::unary_signature(), 3)}};
        return all;
    }

    // Every hom between corpus structures, visited in parallel per source.
    auto for_each_hom(const Corpus & c,
            const std::function<void(const FiniteStructure &, const FiniteStructure &, const oracle::Map &, Outcome &)>
                & visit,
            Outcome & out) -> std::size_t
    {
        auto & s = c.structures;
        vector<Outcome> parts(s.size());
        vector<std::size_t> counts(s.size());
        parallel_for(s.size(), jobs(), [&](std::size_t i) {
            for (auto & b : s)
                for (auto & m : oracle::homs(s[i], b)) {
                    ++counts[i];
                    visit(s[i], b, m, parts[i]);
                }
        });
        std::size_t total = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            total += counts[i];
            for (auto & d : parts[i].details)
                out.fail(d);
        }
        return total;
    }

    // 4
    auto immersion_oracle(Outcome & out) -> void
    {
        for (auto & c : corpora()) {
            std::atomic<std::size_t> immersions = 0;
            auto total = for_each_hom(c, [&](auto & a, auto & b, auto & m, Outcome & o) {
                bool lib = find_retraction(Morphism{a, b, m}).has_value();
                bool cq = oracle::preserves_cqs(a, b, m, 6);
                immersions += cq;
                if (lib != cq)
                    o.fail(describe(a) + " -> " + describe(b) + ": retraction " + (lib ? "yes" : "no")
                            + ", CQ preservation " + (cq ? "yes" : "no"));
            }, out);
            out.note(c.signature->name() + ": " + std::to_string(c.structures.size()) + " structures, "
                    + std::to_string(total) + " homomorphisms, " + std::to_string(immersions.load())
                    + " immersions, disagreements " + (out.pass ? "0" : "> 0"));
        }
    }

    // 5
    auto kind_chain(Outcome & out) -> void
    {
        for (auto & c : corpora()) {
            std::atomic<std::size_t> counts[4] = {0, 0, 0, 0};
            for_each_hom(c, [&](auto & a, auto & b, auto & m, Outcome & o) {
                Morphism mor{a, b, m};
                auto cert = classify_morphism(mor, b.size());
                int level = int(cert.kind);
                ++counts[level];
                auto where = describe(a) + " -> " + describe(b);
                if (level >= int(MorphismKind::StrongImmersion) && ! oracle::preserves_cqs(a, b, m, 6))
                    o.fail(where + ": strong immersion that is not an immersion");
                if (level >= int(MorphismKind::Immersion) && ! oracle::is_embedding(a, b, m))
                    o.fail(where + ": immersion that is not an embedding");
                if (level >= int(MorphismKind::Embedding) && ! oracle::is_hom(a, b, m))
                    o.fail(where + ": embedding that is not a homomorphism");
                if (oracle::strength(a, b, m) != level + 1)
                    o.fail(where + ": classified " + to_string(cert.kind) + ", oracle level "
                            + std::to_string(oracle::strength(a, b, m)));
            }, out);
            out.note(c.signature->name() + ": hom " + std::to_string(counts[0].load()) + ", embedding "
                    + std::to_string(counts[1].load()) + ", immersion " + std::to_string(counts[2].load())
                    + ", strong " + std::to_string(counts[3].load()));
        }
        auto point = catalog::point(), chain = catalog::chain2();
        Morphism inclusion{point, chain, {*chain.element_index("b")}};
        auto cert = classify_morphism(inclusion, chain.size());
        if (cert.kind != MorphismKind::Immersion)
            out.fail("point -> chain2 classified " + to_string(cert.kind));
        else if (! cert.refutation)
            out.fail("point -> chain2 lacks a sentence refuting strong immersion");
        else
            out.note("point -> chain2: immersion, not strong: " + to_string(*cert.refutation));
    }

    // 6
    auto remark_suite(Outcome & out) -> void
    {
        std::mt19937_64 rng(20261016);
        struct Pair
        {
            FiniteStructure a, b;
            int k;
        };
        vector<Pair> pairs;
        for (int i = 0; i < 500; ++i) {
            auto sig = i % 2 ? oracle::unary_signature() : oracle::graph_signature();
            int sa = 1 + int(rng() % 3), sb = 1 + int(rng() % 3), k = 1 + int(rng() % 3);
            auto a = oracle::random_structure(sig, sa, rng);
            auto b = oracle::random_structure(sig, sb, rng);
            pairs.push_back({a, b, k});
        }
        vector<Outcome> parts(pairs.size());
        vector<std::array<int, 5>> exercised(pairs.size(), {0, 0, 0, 0, 0});
        parallel_for(pairs.size(), jobs(), [&](std::size_t i) {
            auto & [a, b, k] = pairs[i];
            auto & o = parts[i];
            auto bud = budget(3, a.size() + b.size(), k);
            bud.jobs = 1;
            auto tu_a = sentence_set(diagram(a, DiagramKind::TuStar, bud));
            auto tu_b = sentence_set(diagram(b, DiagramKind::TuStar, bud));
            auto dp_a_set = diagram(a, DiagramKind::DiagPlusStar, bud);
            auto dp_a = sentence_set(dp_a_set);
            auto dp_b = sentence_set(diagram(b, DiagramKind::DiagPlusStar, bud));
            auto where = "pair " + std::to_string(i) + " (" + describe(a) + ", " + describe(b) + ", k="
                    + std::to_string(k) + ")";

            auto homs = oracle::homs(a, b);
            if (! homs.empty()) {
                exercised[i][0] = 1;
                if (! subset(tu_b, tu_a))
                    o.fail(where + ": (a) hom A->B but Tu*(B) not in Tu*(A)");
            }
            bool immersed = false;
            for (auto & m : homs)
                immersed = immersed || oracle::retracts(a, b, m);
            if (immersed) {
                exercised[i][1] = 1;
                if (tu_a != tu_b)
                    o.fail(where + ": (b) immersion A->B but Tu*(A) != Tu*(B)");
            }

            exercised[i][2] = 1;
            auto pool = cq_pool(a.signature_ref(), 0, k);
            auto tu_list = diagram(a, DiagramKind::TuStar, bud);
            std::set<string> bodies;
            for (auto & s : tu_list.sentences) {
                auto & body = s.conjuncts.front().premise;
                if (s.origin != SentenceClass::HUniversal || oracle::eval(a, body))
                    o.fail(where + ": (c) " + to_string(s) + " is not the negation of a sentence false in A");
                bodies.insert(to_string(body));
            }
            for (auto & s : dp_a_set.sentences) {
                auto & body = s.conjuncts.front().conclusion;
                if (! oracle::eval(a, body))
                    o.fail(where + ": (c) Diag+* lists a sentence false in A");
                bodies.insert(to_string(body));
            }
            if (bodies.size() != pool->queries.size() || tu_list.sentences.size() + dp_a_set.sentences.size()
                    != pool->queries.size())
                o.fail(where + ": (c) Tu*(A) and Diag+*(A) do not partition the " + std::to_string(pool->queries.size())
                        + " positive sentences of size <= k");

            exercised[i][3] = 1;
            if (subset(dp_a, dp_b) != subset(tu_b, tu_a))
                o.fail(where + ": (d) Diag+* inclusion and Tu* inclusion disagree");

            if (subset(tu_a, tu_b)) {
                exercised[i][4] = 1;
                vector<ConsistencyPart> parts_ab{diagram(a, DiagramKind::DiagPlus, bud, {}, "a_"),
                    diagram(b, DiagramKind::DiagPlus, bud, {}, "b_")};
                auto v = joint_consistency_bounded(parts_ab, bud);
                if (! v.yes())
                    o.fail(where + ": (e) Diag+(A) and Diag+(B) not jointly consistent up to |A|+|B|: " + v.summary);
            }
        });
        std::array<int, 5> totals{0, 0, 0, 0, 0};
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            for (int j = 0; j < 5; ++j)
                totals[j] += exercised[i][j];
            for (auto & d : parts[i].details)
                out.fail(d);
        }
        std::ostringstream note;
        note << "500 pairs; premises met: (a) " << totals[0] << ", (b) " << totals[1] << ", (c) " << totals[2]
             << ", (d) " << totals[3] << ", (e) " << totals[4];
        out.note(note.str());
    }

    // 7
    auto jc_report(Outcome & out) -> void
    {
        for (auto t : {catalog::partial_orders(), catalog::has_cycle(1)}) {
            auto r = jc_characterization_report(t, budget(3, 4, 3));
            bool all = r.conditions.size() == 5;
            for (auto & c : r.conditions)
                all = all && c.holds;
            if (! r.jc.yes())
                out.fail(t.name + ": is_jc_bounded " + to_string(r.jc.value));
            if (! all || ! r.agree) {
                for (auto & c : r.conditions)
                    if (! c.holds)
                        out.fail(t.name + ": " + c.name + " fails: " + c.detail);
                if (r.agree)
                    out.fail(t.name + ": fewer than five conditions");
                else
                    out.fail(t.name + ": conditions disagree with the JC verdict");
            }
            else
                out.note(t.name + ": five conditions hold, JC yes");
        }
    }

    // 8
    auto companion(Outcome & out) -> void
    {
        auto b = budget(2, 6, 3);
        auto loop = catalog::loop();
        auto tu = to_theory(diagram(loop, DiagramKind::TuStar, b), "Tu*(loop)");
        auto ti = to_theory(diagram(loop, DiagramKind::TiStar, b), "Ti*(loop)");
        auto v = companion_check_bounded(tu, ti, b);
        if (! v.yes())
            out.fail(v.summary);
        auto pu = pc_models(tu, b), pi = pc_models(ti, b);
        std::set<vector<int>> cu, ci;
        for (auto & m : pu)
            cu.insert(oracle::code(m));
        for (auto & m : pi)
            ci.insert(oracle::code(m));
        if (cu != ci)
            out.fail("bounded-pc model sets differ");
        for (auto & m : pu)
            if (! satisfies(m, tu) || ! satisfies(m, ti))
                out.fail("a pc model does not satisfy both theories");
        out.note(std::to_string(tu.sentences.size()) + " h-universal and " + std::to_string(ti.sentences.size())
                + " h-inductive sentences; " + std::to_string(cu.size()) + " common bounded-pc model(s)");
    }

    auto check_instance(const TheoremReport & r, const TheoremInstance & inst, std::size_t index, Outcome & out)
        -> void
    {
        auto where = r.id + " instance " + std::to_string(index);
        auto letters = to_string(r.kinds);  // "[a,b,c,d]"
        char alpha = letters[1], beta = letters[3], gamma = letters[5], delta = letters[7];
        if (oracle::strength(inst.base, inst.left, inst.f) < oracle::strength_of(alpha)
                || oracle::strength(inst.base, inst.right, inst.g) < oracle::strength_of(beta)) {
            out.fail(where + ": generated wing maps lack the required kind");
            return;
        }
        if (inst.outcome != InstanceOutcome::Witnessed || ! inst.solution || ! inst.reverified) {
            out.fail(where + ": " + to_string(inst.outcome) + " " + inst.note);
            return;
        }
        auto & s = *inst.solution;
        auto & d = s.apex;
        if (d.size() > 2 * (inst.left.size() + inst.right.size()))
            out.fail(where + ": apex exceeds 2(|B|+|C|)");
        if (r.cls.theory && ! satisfies(d, *r.cls.theory))
            out.fail(where + ": apex is not a model of " + r.cls.theory->name);
        if (oracle::strength(inst.left, d, s.left_out) < oracle::strength_of(delta))
            out.fail(where + ": g': B -> D is not of kind " + string(1, delta));
        if (oracle::strength(inst.right, d, s.right_out) < oracle::strength_of(gamma))
            out.fail(where + ": f': C -> D is not of kind " + string(1, gamma));
        for (std::size_t a = 0; a < inst.f.size(); ++a)
            if (s.left_out[inst.f[a]] != s.right_out[inst.g[a]])
                out.fail(where + ": square does not commute");
        if (r.strong) {
            std::set<Element> fa(inst.f.begin(), inst.f.end()), ga(inst.g.begin(), inst.g.end());
            for (Element x = 0; x < inst.left.size(); ++x)
                for (Element y = 0; y < inst.right.size(); ++y)
                    if (s.left_out[x] == s.right_out[y] && (! fa.count(x) || ! ga.count(y)))
                        out.fail(where + ": images of B - f(A) and C - g(A) meet");
        }
    }

    // 9
    auto theorems(Outcome & out) -> void
    {
        for (auto id : {"si-si-strong", "ii-hh-strong"}) {
            TheoremOptions o;
            o.seed = 1;
            o.instances = 50;
            o.N = 0;
            auto r = verify_theorem(id, o, budget(3, 6, 3));
            if (r.instances.size() != 50)
                out.fail(string(id) + ": " + std::to_string(r.instances.size()) + " instances");
            if (! r.red_flags.empty())
                out.fail(string(id) + ": " + std::to_string(r.red_flags.size()) + " exhaustive searches without an apex");
            for (std::size_t i = 0; i < r.instances.size(); ++i)
                check_instance(r, r.instances[i], i, out);
            out.note(string(id) + ": witnessed " + std::to_string(r.witnessed()) + "/"
                    + std::to_string(r.instances.size()) + ", every witness re-checked by brute force");
        }
    }

    // 10
    auto solver_oracle(Outcome & out) -> void
    {
        auto sig = oracle::graph_signature();
        auto small = oracle::structures(sig, 2);
        auto apexes = oracle::structures(sig, 4);
        const int N = 4;

        // kinds[b][d]: each map from small[b] to apexes[d] with its oracle strength.
        vector<vector<vector<std::pair<oracle::Map, int>>>> maps(small.size(),
                vector<vector<std::pair<oracle::Map, int>>>(apexes.size()));
        parallel_for(small.size(), jobs(), [&](std::size_t b) {
            for (std::size_t d = 0; d < apexes.size(); ++d)
                for (auto & m : oracle::homs(small[b], apexes[d]))
                    maps[b][d].emplace_back(m, oracle::strength(small[b], apexes[d], m));
        });

        struct Instance
        {
            std::size_t a, b, c;
            oracle::Map f, g;
            KindTuple kinds;
            bool strong;
        };
        vector<string> tuples{"[h]", "[e]", "[i]", "[s]", "[i,i,h,h]", "[s,i,s,i]", "[i,h,i,h]", "[i,h,s,h]",
            "[e,s,e,s]", "[h,i,h,i]"};
        vector<Instance> instances;
        for (auto & text : tuples)
            for (bool strong : {false, true}) {
                auto k = parse_kind_tuple(text);
                for (std::size_t a = 0; a < small.size(); ++a)
                    for (std::size_t b = 0; b < small.size(); ++b)
                        for (std::size_t c = 0; c < small.size(); ++c)
                            for (auto & f : oracle::homs(small[a], small[b]))
                                if (oracle::strength(small[a], small[b], f) >= int(k.alpha) + 1)
                                    for (auto & g : oracle::homs(small[a], small[c]))
                                        if (oracle::strength(small[a], small[c], g) >= int(k.beta) + 1)
                                            instances.push_back({a, b, c, f, g, k, strong});
            }

        auto exists = [&](const Instance & in) {
            std::set<Element> fa(in.f.begin(), in.f.end()), ga(in.g.begin(), in.g.end());
            for (std::size_t d = 0; d < apexes.size(); ++d) {
                if (apexes[d].size() > N)
                    break;
                for (auto & [gp, gs] : maps[in.b][d]) {
                    if (gs < int(in.kinds.delta) + 1)
                        continue;
                    for (auto & [fp, fs] : maps[in.c][d]) {
                        if (fs < int(in.kinds.gamma) + 1)
                            continue;
                        bool ok = true;
                        for (std::size_t x = 0; x < in.f.size() && ok; ++x)
                            ok = gp[in.f[x]] == fp[in.g[x]];
                        if (ok && in.strong)
                            for (Element y = 0; y < Element(gp.size()) && ok; ++y)
                                for (Element z = 0; z < Element(fp.size()) && ok; ++z)
                                    if (gp[y] == fp[z] && (! fa.count(y) || ! ga.count(z)))
                                        ok = false;
                        if (ok)
                            return true;
                    }
                }
            }
            return false;
        };

        vector<Outcome> parts(instances.size());
        vector<char> yes(instances.size());
        parallel_for(instances.size(), jobs(), [&](std::size_t i) {
            auto & in = instances[i];
            bool expected = exists(in);
            yes[i] = expected;
            AmalgamationProblem p{small[in.a], small[in.b], small[in.c], in.f, in.g, in.kinds,
                StructureClass::all(sig), in.strong, false, budget(2, N, 3)};
            p.budget.jobs = 1;
            auto r = solve_amalgamation(p);
            auto got = r.value;
            if (got != (expected ? VerdictValue::Yes : VerdictValue::No))
                parts[i].fail(to_string(in.kinds) + (in.strong ? " strong" : "") + " " + describe(small[in.a])
                        + " -> " + describe(small[in.b]) + ", " + describe(small[in.c]) + ": solver "
                        + to_string(got) + ", enumeration " + (expected ? "yes" : "no"));
            else if (r.solution && ! verify_solution(p, *r.solution).empty())
                parts[i].fail("solver witness fails verification");
        });
        std::size_t positives = 0;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            positives += yes[i];
            for (auto & d : parts[i].details)
                out.fail(d);
        }
        out.note(std::to_string(instances.size()) + " instances over " + std::to_string(tuples.size())
                + " kind tuples, strong and plain; " + std::to_string(positives) + " amalgamable, "
                + std::to_string(instances.size() - positives) + " not, against "
                + std::to_string(apexes.size()) + " apexes up to isomorphism");
    }
}

int main(int argc, char ** argv)
{
    vector<Criterion> criteria{
        {1, "poset pc verdicts: point yes, posets of size 2..3 no (n=4)", 10, poset_pc},
        {2, "unary-function theories: the loop is the unique bounded-pc model (n=3)", 10, unary_pc},
        {3, "groups: trivial group bounded-pc at n=4, unique at n=3", 60, group_pc},
        {4, "immersion: retraction criterion equals CQ preservation at size <= 6", 0, immersion_oracle},
        {5, "kind chain s => i => e => h, point -> chain2 is an immersion only", 0, kind_chain},
        {6, "remark suite (a)-(e) on 500 random pairs", 0, remark_suite},
        {7, "JC characterization agrees with is_jc_bounded (n=3, N=4, k=3)", 0, jc_report},
        {8, "Tu*(loop) and Ti*(loop) are companions at n=2", 0, companion},
        {9, "[s,i,s,i]-strong and [i,i,h,h]-strong harness: 50/50 witnessed each", 300, theorems},
        {10, "amalgamation solver agrees with apex enumeration (|A|,|B|,|C| <= 2, N = 4)", 0, solver_oracle},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i)
        only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (auto & c : criteria) {
        if (! only.empty() && ! only.count(c.id))
            continue;
        Outcome out;
        auto start = std::chrono::steady_clock::now();
        try {
            c.run(out);
        }
        catch (const std::exception & e) {
            out.fail(string("exception: ") + e.what());
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && seconds > c.limit_seconds)
            out.fail("took " + std::to_string(seconds) + " s, limit " + std::to_string(int(c.limit_seconds)) + " s");
        failed += ! out.pass;
        std::ostringstream time;
        time.precision(2);
        time << std::fixed << seconds;
        std::cout << (out.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.title << "  [" << time.str() << " s]\n";
        for (auto & d : out.details)
            std::cout << "      " << d << '\n';
        std::cout.flush();
    }
    return failed;
}

#include <posmt/amalgamation.hh>
#include <posmt/catalog.hh>
#include <posmt/error.hh>
#include <posmt/eval.hh>
#include <posmt/parallel.hh>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

using std::size_t;
using std::string;
using std::vector;

namespace posmt
{
    auto parse_kind_tuple(std::string_view text) -> KindTuple
    {
        vector<MorphismKind> kinds;
        string word;
        auto flush = [&] {
            if (word.empty())
                return;
            if (word.size() > 1 && word.find_first_not_of("heis") == string::npos && kinds.empty()
                    && text.find(',') == std::string_view::npos)
                for (char c : word)
                    kinds.push_back(parse_kind(string(1, c)));
            else
                kinds.push_back(parse_kind(word));
            word.clear();
        };
        for (char c : text) {
            if (c == '[' || c == ']' || c == ',' || c == ' ' || c == '\t')
                flush();
            else
                word += c;
        }
        flush();
        if (kinds.size() == 1)
            return uniform_kinds(kinds[0]);
        if (kinds.size() == 2)
            return asymmetric_kinds(kinds[0], kinds[1]);
        if (kinds.size() != 4)
            throw SemanticError("a kind tuple has 1, 2 or 4 entries: '" + string(text) + "'");
        return KindTuple{kinds[0], kinds[1], kinds[2], kinds[3]};
    }

    auto to_string(const KindTuple & k) -> string
    {
        return string("[") + kind_letter(k.alpha) + "," + kind_letter(k.beta) + "," + kind_letter(k.gamma) + ","
                + kind_letter(k.delta) + "]";
    }

    auto uniform_kinds(MorphismKind a) -> KindTuple
    {
        return KindTuple{a, a, a, a};
    }

    auto asymmetric_kinds(MorphismKind a, MorphismKind b) -> KindTuple
    {
        return KindTuple{a, b, a, b};
    }

    auto pregeneric_kinds(MorphismKind a, MorphismKind b) -> KindTuple
    {
        return KindTuple{a, a, b, b};
    }

    auto StructureClass::all(SignatureRef sig) -> StructureClass
    {
        return StructureClass{std::move(sig), std::nullopt};
    }

    auto StructureClass::of(Theory t) -> StructureClass
    {
        auto sig = t.signature;
        return StructureClass{sig, std::move(t)};
    }

    auto StructureClass::name() const -> string
    {
        return theory ? "models of " + theory->name : "all " + signature->name() + "-structures";
    }

    auto StructureClass::contains(const FiniteStructure & s) const -> bool
    {
        if (! s.signature().same_symbols(*signature))
            return false;
        return ! theory || models_all(s, theory->sentences);
    }

    auto StructureClass::members(int max_size, size_t node_cap) const -> vector<FiniteStructure>
    {
        ModelSearchOptions o;
        o.node_cap = node_cap;
        vector<FormulaPtr> formulas;
        if (theory)
            formulas = theory->formulas();
        return find_models_up_to(signature, formulas, max_size, o);
    }

    namespace
    {
        auto at_least(MorphismKind k, MorphismKind bound) -> bool
        {
            return int(k) >= int(bound);
        }

        class UnionFind
        {
        public:
            explicit UnionFind(int n) : _parent(n)
            {
                std::iota(_parent.begin(), _parent.end(), 0);
            }

            auto find(int x) -> int
            {
                while (_parent[x] != x)
                    x = _parent[x] = _parent[_parent[x]];
                return x;
            }

            // The smaller representative wins, so classes are named by their least member.
            auto unite(int x, int y) -> bool
            {
                x = find(x);
                y = find(y);
                if (x == y)
                    return false;
                if (y < x)
                    std::swap(x, y);
                _parent[y] = x;
                return true;
            }

        private:
            vector<int> _parent;
        };

        // Raw interpretation over 0..n-1, possibly with merges pending.
        struct RawStructure
        {
            SignatureRef sig;
            int n = 0;
            vector<string> names;
            vector<vector<signed char>> relations;
            vector<vector<int>> functions;
            vector<Element> constants;
        };

        auto raw_of(const FiniteStructure & s) -> RawStructure
        {
            return RawStructure{s.signature_ref(), s.size(), s.element_names(), s.relation_tables(),
                s.function_tables(), s.constants()};
        }

        // Coarsens the partition until it is a congruence for every function.
        auto congruence_close(const RawStructure & r, UnionFind & uf) -> void
        {
            auto & sig = *r.sig;
            bool changed = true;
            while (changed) {
                changed = false;
                for (size_t f = 0; f < sig.functions().size(); ++f) {
                    int arity = sig.functions()[f].arity;
                    std::map<vector<int>, int> seen;
                    for (size_t i = 0; i < r.functions[f].size(); ++i) {
                        auto t = tuple_at(r.n, arity, i);
                        for (auto & x : t)
                            x = uf.find(x);
                        auto [it, fresh] = seen.emplace(t, r.functions[f][i]);
                        if (! fresh)
                            changed = uf.unite(it->second, r.functions[f][i]) || changed;
                    }
                }
            }
        }

        struct Quotient
        {
            FiniteStructure structure;
            /// old element -> class index
            vector<Element> map;
        };

        // Quotient by a congruence, with relations the images of the old tuples.
        auto quotient(const RawStructure & r, UnionFind & uf) -> Quotient
        {
            auto & sig = *r.sig;
            vector<Element> index(r.n, -1), map(r.n);
            vector<string> names;
            for (int x = 0; x < r.n; ++x)
                if (uf.find(x) == x) {
                    index[x] = int(names.size());
                    names.push_back(r.names[x]);
                }
            for (int x = 0; x < r.n; ++x)
                map[x] = index[uf.find(x)];
            int m = int(names.size());
            vector<vector<signed char>> relations;
            for (size_t rel = 0; rel < sig.relations().size(); ++rel) {
                int arity = sig.relations()[rel].arity;
                vector<signed char> table(table_size(m, arity), 0);
                for (size_t i = 0; i < r.relations[rel].size(); ++i)
                    if (r.relations[rel][i] == 1) {
                        auto t = tuple_at(r.n, arity, i);
                        for (auto & x : t)
                            x = map[x];
                        table[tuple_index(m, t)] = 1;
                    }
                relations.push_back(std::move(table));
            }
            vector<vector<int>> functions;
            for (size_t f = 0; f < sig.functions().size(); ++f) {
                int arity = sig.functions()[f].arity;
                vector<int> table(table_size(m, arity), -1);
                for (size_t i = 0; i < r.functions[f].size(); ++i) {
                    auto t = tuple_at(r.n, arity, i);
                    for (auto & x : t)
                        x = map[x];
                    table[tuple_index(m, t)] = map[r.functions[f][i]];
                }
                functions.push_back(std::move(table));
            }
            vector<Element> constants;
            for (auto c : r.constants)
                constants.push_back(map[c]);
            return Quotient{FiniteStructure(r.sig, std::move(names), std::move(relations), std::move(functions),
                                    std::move(constants)),
                std::move(map)};
        }

        // Atoms of a conclusion that the chase can add; false when it has a
        // disjunction or an existential.
        auto horn_atoms(const FormulaPtr & f, vector<FormulaPtr> & atoms) -> bool
        {
            switch (f->kind) {
            case FormulaKind::True: return true;
            case FormulaKind::Relation:
            case FormulaKind::Equality: atoms.push_back(f); return true;
            case FormulaKind::And:
                for (auto & c : f->children)
                    if (! horn_atoms(c, atoms))
                        return false;
                return true;
            default: return false;
            }
        }

        struct HornRule
        {
            vector<string> variables;
            FormulaPtr premise;
            FormulaPtr conclusion;
            bool contradiction = false;
            vector<FormulaPtr> atoms;
        };

        // Conjuncts with a disjunctive or existential conclusion are left out; the
        // chased structure is checked against the whole theory afterwards.
        auto horn_rules(const Theory & t) -> vector<HornRule>
        {
            vector<HornRule> rules;
            for (auto & s : t.sentences)
                for (auto & c : s.conjuncts) {
                    HornRule rule{c.variables, c.premise, c.conclusion, c.conclusion->kind == FormulaKind::False, {}};
                    if (rule.contradiction || horn_atoms(c.conclusion, rule.atoms))
                        rules.push_back(std::move(rule));
                }
            return rules;
        }

        // Least model above s for a Horn theory without existentials: add the
        // forced atoms and merge the forced equalities until nothing fires.
        auto chase(const FiniteStructure & s, const vector<HornRule> & rules, size_t node_cap)
            -> std::optional<Quotient>
        {
            auto & sig = s.signature();
            Quotient current{s, vector<Element>(s.size())};
            std::iota(current.map.begin(), current.map.end(), 0);
            vector<CompiledFormula> premises, conclusions;
            for (auto & r : rules) {
                premises.emplace_back(r.premise, sig, r.variables);
                conclusions.emplace_back(r.conclusion, sig, r.variables);
            }
            size_t steps = 0;
            while (true) {
                auto raw = raw_of(current.structure);
                UnionFind uf(raw.n);
                bool changed = false;
                for (size_t i = 0; i < rules.size(); ++i) {
                    auto arity = rules[i].variables.size();
                    auto count = table_size(raw.n, int(arity));
                    for (size_t j = 0; j < count; ++j) {
                        if (++steps > node_cap)
                            throw BudgetExhausted("chase exceeded the node cap");
                        auto values = tuple_at(raw.n, int(arity), j);
                        if (! premises[i].holds(current.structure, values)
                                || conclusions[i].holds(current.structure, values))
                            continue;
                        if (rules[i].contradiction)
                            return std::nullopt;
                        Assignment env;
                        for (size_t v = 0; v < arity; ++v)
                            env[rules[i].variables[v]] = values[v];
                        for (auto & atom : rules[i].atoms) {
                            vector<Element> args;
                            for (auto & term : atom->terms)
                                args.push_back(evaluate_term(current.structure, term, env));
                            if (atom->kind == FormulaKind::Equality)
                                changed = uf.unite(args[0], args[1]) || changed;
                            else {
                                auto r = *sig.relation_index(atom->symbol);
                                auto & cell = raw.relations[r][tuple_index(raw.n, args)];
                                changed = changed || cell == 0;
                                cell = 1;
                            }
                        }
                    }
                }
                if (! changed)
                    return current;
                congruence_close(raw, uf);
                auto next = quotient(raw, uf);
                for (auto & x : current.map)
                    x = next.map[x];
                current.structure = std::move(next.structure);
            }
        }

        // Restricted growth strings over m blocks, finest partitions first.
        auto partitions(int m) -> vector<vector<int>>
        {
            vector<vector<int>> result;
            vector<int> current(m, 0);
            auto rec = [&](auto & self, int i, int blocks) -> void {
                if (i == m) {
                    result.push_back(current);
                    return;
                }
                for (int b = 0; b <= blocks; ++b) {
                    current[i] = b;
                    self(self, i + 1, std::max(blocks, b + 1));
                }
            };
            if (m > 0)
                rec(rec, 0, 0);
            auto blocks = [](const vector<int> & p) { return *std::max_element(p.begin(), p.end()); };
            std::stable_sort(result.begin(), result.end(),
                    [&](const vector<int> & x, const vector<int> & y) { return blocks(x) > blocks(y); });
            return result;
        }

        constexpr int partition_limit = 9;

        class Solver
        {
        public:
            explicit Solver(const AmalgamationProblem & p) :
                _p(p), _left_facts(FactSet::of(p.left)), _right_facts(FactSet::of(p.right))
            {
                _in_f.assign(p.left.size(), false);
                _in_g.assign(p.right.size(), false);
                for (auto x : p.f)
                    _in_f[x] = true;
                for (auto x : p.g)
                    _in_g[x] = true;
                if (p.cls.theory)
                    _formulas = p.cls.theory->formulas();
            }

            auto solve() -> AmalgamationResult
            {
                AmalgamationResult result;
                try {
                    bool exhaustive = false;
                    if (auto s = from_quotients(result, exhaustive)) {
                        result.value = VerdictValue::Yes;
                        result.summary = "yes: apex of size " + std::to_string(s->apex.size()) + " from the glued sum";
                        result.solution = std::move(s);
                        return result;
                    }
                    if (exhaustive) {
                        result.value = VerdictValue::No;
                        result.summary = "no: no quotient of the glued sum of size <= " + std::to_string(_p.budget.N)
                                + " works";
                        result.notes.push_back("every apex maps onto such a quotient through its image of B and C");
                        return result;
                    }
                    if (auto s = from_search(result)) {
                        result.value = VerdictValue::Yes;
                        result.summary = "yes: apex of size " + std::to_string(s->apex.size()) + " from model search";
                        result.solution = std::move(s);
                        return result;
                    }
                    result.value = VerdictValue::No;
                    result.summary = "no: no apex of size <= " + std::to_string(_p.budget.N) + " in the class";
                    result.notes.push_back("bounded: larger apexes are not excluded");
                }
                catch (const BudgetExhausted & e) {
                    result.value = VerdictValue::Unknown;
                    result.summary = string("unknown: ") + e.what();
                }
                return result;
            }

        private:
            const AmalgamationProblem & _p;
            FactSet _left_facts, _right_facts;
            vector<bool> _in_f, _in_g;
            vector<FormulaPtr> _formulas;
            size_t _nodes = 0;

            auto charge(size_t nodes) -> void
            {
                _nodes += nodes;
                if (_nodes > _p.budget.node_cap)
                    throw BudgetExhausted("amalgamation search exceeded the node cap");
            }

            auto strict_ok(const vector<Element> & left_out, const vector<Element> & right_out) const -> bool
            {
                AmalgamationSolution s;
                s.left_out = left_out;
                s.right_out = right_out;
                return check_strong_condition(s, _p.f, _p.g, _p.strict);
            }

            // Certifies a candidate pair of out-maps.
            auto accept(const FiniteStructure & apex, const vector<Element> & left_out,
                    const vector<Element> & right_out, const string & method) -> std::optional<AmalgamationSolution>
            {
                for (size_t a = 0; a < _p.f.size(); ++a)
                    if (left_out[_p.f[a]] != right_out[_p.g[a]])
                        return std::nullopt;
                if (_p.strong && ! strict_ok(left_out, right_out))
                    return std::nullopt;
                auto lk = certify_kind(Morphism{_p.left, apex, left_out}, _p.kinds.delta);
                if (! lk)
                    return std::nullopt;
                auto rk = certify_kind(Morphism{_p.right, apex, right_out}, _p.kinds.gamma);
                if (! rk)
                    return std::nullopt;
                AmalgamationSolution s{apex, left_out, right_out, *lk, *rk, {}, false, method};
                for (size_t a = 0; a < _p.f.size(); ++a)
                    s.commutation.push_back(left_out[_p.f[a]]);
                s.strong_holds = check_strong_condition(s, _p.f, _p.g, _p.strict);
                return s;
            }

            auto size_allowed(int size) const -> bool
            {
                if (size > _p.budget.N)
                    return false;
                if (_p.kinds.delta == MorphismKind::StrongImmersion && size != _p.left.size())
                    return false;
                if (_p.kinds.gamma == MorphismKind::StrongImmersion && size != _p.right.size())
                    return false;
                return true;
            }

            auto from_quotients(AmalgamationResult & result, bool & exhaustive)
                -> std::optional<AmalgamationSolution>
            {
                auto & sig = _p.left.signature();
                exhaustive = false;
                if (sig.max_function_arity() > 1)
                    return std::nullopt;
                std::optional<vector<HornRule>> rules;
                if (_p.cls.theory)
                    rules = horn_rules(*_p.cls.theory);

                // The disjoint sum: left elements first, then right ones.
                int nb = _p.left.size(), nc = _p.right.size();
                RawStructure sum;
                sum.sig = _p.left.signature_ref();
                sum.n = nb + nc;
                for (auto & name : _p.left.element_names())
                    sum.names.push_back("l_" + name);
                for (auto & name : _p.right.element_names())
                    sum.names.push_back("r_" + name);
                auto shift = [&](const vector<Element> & tuple, int side) {
                    vector<Element> out = tuple;
                    if (side)
                        for (auto & x : out)
                            x += nb;
                    return out;
                };
                for (size_t r = 0; r < sig.relations().size(); ++r) {
                    int arity = sig.relations()[r].arity;
                    vector<signed char> table(table_size(sum.n, arity), 0);
                    for (int side = 0; side < 2; ++side) {
                        auto & s = side ? _p.right : _p.left;
                        for (size_t i = 0; i < s.relation_table(int(r)).size(); ++i)
                            if (s.relation_table(int(r))[i])
                                table[tuple_index(sum.n, shift(tuple_at(s.size(), arity, i), side))] = 1;
                    }
                    sum.relations.push_back(std::move(table));
                }
                for (size_t f = 0; f < sig.functions().size(); ++f) {
                    vector<int> table;
                    for (auto v : _p.left.function_table(int(f)))
                        table.push_back(v);
                    for (auto v : _p.right.function_table(int(f)))
                        table.push_back(v + nb);
                    sum.functions.push_back(std::move(table));
                }
                sum.constants = _p.left.constants();
                UnionFind glue(sum.n);
                for (size_t c = 0; c < sum.constants.size(); ++c)
                    glue.unite(_p.left.constant(int(c)), nb + _p.right.constant(int(c)));
                for (size_t a = 0; a < _p.f.size(); ++a)
                    glue.unite(_p.f[a], nb + _p.g[a]);
                congruence_close(sum, glue);
                vector<int> classes;
                for (int x = 0; x < sum.n; ++x)
                    if (glue.find(x) == x)
                        classes.push_back(x);
                int m = int(classes.size());

                vector<vector<int>> candidates;
                if (m <= partition_limit) {
                    candidates = partitions(m);
                    exhaustive = ! _p.cls.theory;
                }
                else {
                    vector<int> finest(m);
                    std::iota(finest.begin(), finest.end(), 0);
                    candidates.push_back(finest);
                }

                std::set<vector<int>> seen;
                for (auto & partition : candidates) {
                    charge(1);
                    UnionFind uf(sum.n);
                    for (int x = 0; x < sum.n; ++x)
                        uf.unite(x, glue.find(x));
                    vector<int> first(m, -1);
                    for (int i = 0; i < m; ++i) {
                        if (first[partition[i]] < 0)
                            first[partition[i]] = classes[i];
                        uf.unite(first[partition[i]], classes[i]);
                    }
                    congruence_close(sum, uf);
                    vector<int> reps(sum.n);
                    for (int x = 0; x < sum.n; ++x)
                        reps[x] = uf.find(x);
                    if (! seen.insert(reps).second)
                        continue;
                    auto q = quotient(sum, uf);
                    if (rules) {
                        auto chased = chase(q.structure, *rules, _p.budget.node_cap);
                        if (! chased)
                            continue;
                        for (auto & x : q.map)
                            x = chased->map[x];
                        q.structure = std::move(chased->structure);
                        if (! _p.cls.contains(q.structure))
                            continue;
                    }
                    if (! size_allowed(q.structure.size()))
                        continue;
                    ++result.apexes_tried;
                    vector<Element> left_out(q.map.begin(), q.map.begin() + nb);
                    vector<Element> right_out(q.map.begin() + nb, q.map.end());
                    if (auto s = accept(q.structure, left_out, right_out, "quotient"))
                        return s;
                }
                return std::nullopt;
            }

            auto try_apex(const FiniteStructure & apex) -> std::optional<AmalgamationSolution>
            {
                std::optional<AmalgamationSolution> found;
                HomConstraint left;
                left.injective = at_least(_p.kinds.delta, MorphismKind::Embedding);
                if (_p.strong)
                    for (int b = 0; b < _p.left.size(); ++b)
                        if (! _in_f[b])
                            for (auto fa : _p.f)
                                left.distinct.emplace_back(b, fa);
                auto nodes = search_homs(_left_facts, apex, left, [&](const vector<Element> & left_out) {
                    HomConstraint right;
                    right.injective = at_least(_p.kinds.gamma, MorphismKind::Embedding);
                    right.required.assign(_p.right.size(), -1);
                    for (size_t a = 0; a < _p.g.size(); ++a) {
                        auto & slot = right.required[_p.g[a]];
                        auto want = left_out[_p.f[a]];
                        if (slot >= 0 && slot != want)
                            return true;
                        slot = want;
                    }
                    if (_p.strong)
                        for (int c = 0; c < _p.right.size(); ++c)
                            if (! _in_g[c])
                                for (auto v : left_out)
                                    right.forbidden.emplace_back(c, v);
                    auto inner = search_homs(_right_facts, apex, right, [&](const vector<Element> & right_out) {
                        found = accept(apex, left_out, right_out, "search");
                        return ! found;
                    }, _p.budget.node_cap);
                    charge(inner);
                    return ! found;
                }, _p.budget.node_cap);
                charge(nodes);
                return found;
            }

            auto from_search(AmalgamationResult & result) -> std::optional<AmalgamationSolution>
            {
                if (_p.budget.N > 64)
                    throw PreconditionError("apex bound above 64");
                std::optional<AmalgamationSolution> found;
                for (int size = 1; size <= _p.budget.N && ! found; ++size) {
                    if (! size_allowed(size))
                        continue;
                    ModelSearchOptions o;
                    o.node_cap = _p.budget.node_cap;
                    ModelSearchStats stats;
                    visit_models(_p.cls.signature, _formulas, size, o, [&](const FiniteStructure & apex) {
                        ++result.apexes_tried;
                        found = try_apex(apex);
                        return ! found;
                    });
                }
                return found;
            }
        };
    }

    auto validate_problem(const AmalgamationProblem & p) -> void
    {
        validate_budget(p.budget);
        for (auto * s : {&p.base, &p.left, &p.right})
            if (! s->signature().same_symbols(*p.cls.signature))
                throw SignatureMismatch("amalgamation structures must share the class signature");
        for (auto [s, label] : {std::pair{&p.base, "base"}, {&p.left, "left wing"}, {&p.right, "right wing"}})
            if (! p.cls.contains(*s))
                throw PreconditionError(string("the ") + label + " is not in the class " + p.cls.name());
        Morphism f{p.base, p.left, p.f}, g{p.base, p.right, p.g};
        validate_morphism(f);
        validate_morphism(g);
        if (! is_homomorphism(f) || ! certify_kind(f, p.kinds.alpha))
            throw PreconditionError("the left map is not " + to_string(p.kinds.alpha));
        if (! is_homomorphism(g) || ! certify_kind(g, p.kinds.beta))
            throw PreconditionError("the right map is not " + to_string(p.kinds.beta));
    }

    auto solve_amalgamation(const AmalgamationProblem & p) -> AmalgamationResult
    {
        validate_problem(p);
        return Solver(p).solve();
    }

    auto check_strong_condition(const AmalgamationSolution & s, std::span<const Element> f,
            std::span<const Element> g, bool strict) -> bool
    {
        vector<bool> in_f(s.left_out.size()), in_g(s.right_out.size());
        for (auto x : f)
            in_f[x] = true;
        for (auto x : g)
            in_g[x] = true;
        for (size_t b = 0; b < s.left_out.size(); ++b)
            for (size_t c = 0; c < s.right_out.size(); ++c) {
                if (s.left_out[b] != s.right_out[c])
                    continue;
                if (! in_f[b] || ! in_g[c])
                    return false;
                if (strict) {
                    bool common = false;
                    for (size_t a = 0; a < f.size() && ! common; ++a)
                        common = f[a] == Element(b) && g[a] == Element(c);
                    if (! common)
                        return false;
                }
            }
        return true;
    }

    auto verify_solution(const AmalgamationProblem & p, const AmalgamationSolution & s) -> vector<string>
    {
        vector<string> failures;
        if (s.apex.size() > p.budget.N)
            failures.push_back("apex larger than N");
        if (! p.cls.contains(s.apex))
            failures.push_back("apex is not in " + p.cls.name());
        Morphism left{p.left, s.apex, s.left_out}, right{p.right, s.apex, s.right_out};
        for (auto [m, kind, label] : {std::tuple{&left, p.kinds.delta, "left out-map"},
                 std::tuple{&right, p.kinds.gamma, "right out-map"}}) {
            try {
                validate_morphism(*m);
            }
            catch (const Error & e) {
                failures.push_back(string(label) + ": " + e.what());
                continue;
            }
            if (! is_homomorphism(*m))
                failures.push_back(string(label) + " is not a homomorphism");
            else if (! certify_kind(*m, kind))
                failures.push_back(string(label) + " is not " + to_string(kind));
        }
        if (failures.empty())
            for (size_t a = 0; a < p.f.size(); ++a)
                if (s.left_out[p.f[a]] != s.right_out[p.g[a]]) {
                    failures.push_back("square does not commute at " + p.base.element_name(Element(a)));
                    break;
                }
        if (failures.empty() && p.strong && ! check_strong_condition(s, p.f, p.g, p.strict))
            failures.push_back("strong condition fails");
        return failures;
    }

    auto check_basis(const FiniteStructure & a, const KindTuple & kinds, const StructureClass & cls, bool strong,
            const Budget & b, bool strict) -> BasisReport
    {
        validate_budget(b);
        if (! cls.contains(a))
            throw PreconditionError("the base is not in " + cls.name());
        BasisReport report;
        report.base = a;
        report.kinds = kinds;
        report.class_name = cls.name();
        report.cls = cls;
        report.strong = strong;
        report.strict = strict;
        report.budget = b;
        try {
            report.wings = cls.members(b.n, b.node_cap);
        }
        catch (const BudgetExhausted &) {
            report.verdict = VerdictValue::Unknown;
            return report;
        }
        vector<vector<CertifiedMorphism>> alpha_maps, beta_maps;
        for (auto & w : report.wings) {
            alpha_maps.push_back(enumerate_homs(a, w, {}, kinds.alpha, 0, b.node_cap));
            beta_maps.push_back(enumerate_homs(a, w, {}, kinds.beta, 0, b.node_cap));
        }
        for (size_t i = 0; i < report.wings.size(); ++i)
            for (auto & f : alpha_maps[i])
                for (size_t j = 0; j < report.wings.size(); ++j)
                    for (auto & g : beta_maps[j])
                        report.instances.push_back(BasisInstance{i, j, f.morphism.map, g.morphism.map, {}});
        parallel_for(report.instances.size(), b.jobs, [&](size_t k) {
            auto & inst = report.instances[k];
            AmalgamationProblem p{a, report.wings[inst.left_wing], report.wings[inst.right_wing], inst.f, inst.g,
                kinds, cls, strong, strict, b};
            inst.result = solve_amalgamation(p);
        });
        report.verdict = VerdictValue::Yes;
        for (auto & inst : report.instances)
            report.verdict = merge_value(report.verdict, inst.result.value);
        return report;
    }

    auto to_string(InstanceOutcome o) -> string
    {
        return o == InstanceOutcome::Witnessed ? "witnessed" : "budget-exhausted";
    }

    auto TheoremReport::witnessed() const -> size_t
    {
        return size_t(std::count_if(instances.begin(), instances.end(),
                [](const TheoremInstance & i) { return i.outcome == InstanceOutcome::Witnessed; }));
    }

    namespace
    {
        struct TheoremSpec
        {
            string id;
            string statement;
            KindTuple kinds;
            bool strong;
            StructureClass cls;
            /// Restricts the base; empty accepts every member.
            std::function<bool(const FiniteStructure &, const vector<FiniteStructure> &)> base_filter;
        };

        auto is_pc_among(const FiniteStructure & m, const vector<FiniteStructure> & members, size_t node_cap) -> bool
        {
            auto facts = FactSet::of(m);
            for (auto & c : members) {
                bool ok = true;
                search_homs(facts, c, {}, [&](const vector<Element> & map) {
                    ok = find_retraction(Morphism{m, c, map}, node_cap).has_value();
                    return ok;
                }, node_cap);
                if (! ok)
                    return false;
            }
            return true;
        }

        auto is_local_ring(const FiniteStructure & r) -> bool
        {
            // Local iff the non-units are closed under addition.
            auto & sig = r.signature();
            int add = *sig.function_index("add"), mul = *sig.function_index("mul");
            int one = r.constant(*sig.constant_index("one"));
            vector<bool> unit(r.size());
            for (Element x = 0; x < r.size(); ++x)
                for (Element y = 0; y < r.size(); ++y)
                    if (r.apply(mul, vector<Element>{x, y}) == one)
                        unit[x] = true;
            for (Element x = 0; x < r.size(); ++x)
                for (Element y = 0; y < r.size(); ++y)
                    if (! unit[x] && ! unit[y] && unit[r.apply(add, vector<Element>{x, y})])
                        return false;
            return true;
        }

        auto theorem_spec(const string & id, size_t node_cap) -> TheoremSpec
        {
            using K = MorphismKind;
            auto posets = StructureClass::all(catalog::poset_signature());
            auto tpos = StructureClass::of(catalog::partial_orders());
            auto pc = [node_cap](const FiniteStructure & a, const vector<FiniteStructure> & members) {
                return is_pc_among(a, members, node_cap);
            };
            if (id == "si-si-strong")
                return {id, "every structure is an [s,i,s,i]-strong amalgamation basis of the class of structures",
                    KindTuple{K::StrongImmersion, K::Immersion, K::StrongImmersion, K::Immersion}, true, posets, {}};
            if (id == "ii-hh-strong")
                return {id, "every model of T is an [i,i,h,h]-strong amalgamation basis of T",
                    KindTuple{K::Immersion, K::Immersion, K::Hom, K::Hom}, true, tpos, {}};
            if (id == "ih-ih-strong")
                return {id, "every model of T is an [i,h,i,h]-strong amalgamation basis of T",
                    KindTuple{K::Immersion, K::Hom, K::Immersion, K::Hom}, true, tpos, {}};
            if (id == "h-strong-pc")
                return {id, "every pc model of T is an [h]-strong amalgamation basis of T", uniform_kinds(K::Hom),
                    true, tpos, pc};
            if (id == "inheritance")
                return {id, "a model immersed in an [h]-strong amalgamation basis is one",
                    uniform_kinds(K::Hom), true, StructureClass::of(catalog::has_cycle(1)),
                    [node_cap, pc](const FiniteStructure & a, const vector<FiniteStructure> & members) {
                        for (auto & b : members)
                            if (pc(b, members) && ! enumerate_homs(a, b, {}, K::Immersion, 0, node_cap).empty())
                                return true;
                        return false;
                    }};
            if (id == "example-1")
                return {id, "every structure is an [i,h,s,h]-amalgamation basis of the class of structures",
                    KindTuple{K::Immersion, K::Hom, K::StrongImmersion, K::Hom}, false, posets, {}};
            if (id == "example-2")
                return {id, "every structure is an [s,i]-asymmetric amalgamation basis of the class of structures",
                    asymmetric_kinds(K::StrongImmersion, K::Immersion), false, posets, {}};
            if (id == "example-3")
                return {id, "every structure is an [e,s]-asymmetric amalgamation basis of the class of structures",
                    asymmetric_kinds(K::Embedding, K::StrongImmersion), false, posets, {}};
            if (id == "example-4")
                return {id, "every structure is an [i,h]-asymmetric amalgamation basis of the class of structures",
                    asymmetric_kinds(K::Immersion, K::Hom), false, posets, {}};
            if (id == "example-5")
                return {id, "every pc model of T is an [h]-amalgamation basis of T", uniform_kinds(K::Hom), false,
                    tpos, pc};
            if (id == "example-6")
                return {id, "local rings are [h]-amalgamation bases of the theory of rings", uniform_kinds(K::Hom),
                    false, StructureClass::of(catalog::rings()),
                    [](const FiniteStructure & a, const vector<FiniteStructure> &) { return is_local_ring(a); }};
            if (id == "example-7")
                return {id, "every structure is an [s]-amalgamation basis of the class of structures",
                    uniform_kinds(K::StrongImmersion), false, posets, {}};
            throw SemanticError("unknown theorem id '" + id + "'");
        }
    }

    auto theorem_ids() -> vector<string>
    {
        return {"si-si-strong", "ii-hh-strong", "ih-ih-strong", "h-strong-pc", "inheritance", "example-1",
            "example-2", "example-3", "example-4", "example-5", "example-6", "example-7"};
    }

    auto verify_theorem(const string & id, const TheoremOptions & options, const Budget & b) -> TheoremReport
    {
        validate_budget(b);
        if (options.instances < 0)
            throw PreconditionError("instance count must be non-negative");
        auto spec = theorem_spec(id, b.node_cap);
        TheoremReport report;
        report.id = id;
        report.statement = spec.statement;
        report.kinds = spec.kinds;
        report.class_name = spec.cls.name();
        report.cls = spec.cls;
        report.strong = spec.strong;
        report.strict = options.strict;
        report.seed = options.seed;
        report.budget = b;

        auto members = spec.cls.members(b.n, b.node_cap);
        vector<size_t> bases;
        for (size_t i = 0; i < members.size(); ++i)
            if (! spec.base_filter || spec.base_filter(members[i], members))
                bases.push_back(i);
        if (bases.empty())
            throw PreconditionError("no structure of size <= n qualifies as a base for " + id);

        // All wing maps per base, generated once and drawn from by index.
        struct Wing
        {
            size_t member;
            vector<Element> map;
        };
        std::map<std::pair<size_t, MorphismKind>, vector<Wing>> wings;
        auto wings_of = [&](size_t base, MorphismKind kind) -> const vector<Wing> & {
            auto key = std::make_pair(base, kind);
            if (auto it = wings.find(key); it != wings.end())
                return it->second;
            vector<Wing> list;
            for (size_t j = 0; j < members.size(); ++j)
                for (auto & m : enumerate_homs(members[base], members[j], {}, kind, 0, b.node_cap))
                    list.push_back(Wing{j, m.morphism.map});
            return wings.emplace(key, std::move(list)).first->second;
        };

        std::mt19937_64 rng(options.seed);
        auto pick = [&](size_t count) { return size_t(rng() % count); };
        for (int i = 0; i < options.instances; ++i) {
            auto base = bases[pick(bases.size())];
            auto & lefts = wings_of(base, spec.kinds.alpha);
            auto & rights = wings_of(base, spec.kinds.beta);
            if (lefts.empty() || rights.empty())
                throw PreconditionError("generator found no wing maps for a base");
            auto & l = lefts[pick(lefts.size())];
            auto & r = rights[pick(rights.size())];
            TheoremInstance inst;
            inst.base = members[base];
            inst.left = members[l.member];
            inst.right = members[r.member];
            inst.f = l.map;
            inst.g = r.map;
            inst.apex_bound = options.N > 0 ? options.N : 2 * (inst.left.size() + inst.right.size());
            report.instances.push_back(std::move(inst));
        }

        vector<char> exhausted(report.instances.size(), 0);
        parallel_for(report.instances.size(), b.jobs, [&](size_t i) {
            auto & inst = report.instances[i];
            Budget ib = b;
            ib.N = inst.apex_bound;
            AmalgamationProblem p{inst.base, inst.left, inst.right, inst.f, inst.g, spec.kinds, spec.cls,
                spec.strong, options.strict, ib};
            auto result = solve_amalgamation(p);
            if (result.solution) {
                auto failures = verify_solution(p, *result.solution);
                inst.reverified = failures.empty();
                if (inst.reverified)
                    inst.outcome = InstanceOutcome::Witnessed;
                else
                    inst.note = "witness failed re-verification: " + failures.front();
                inst.solution = std::move(result.solution);
            }
            else if (result.value == VerdictValue::No) {
                exhausted[i] = 1;
                inst.note = "search up to N=" + std::to_string(ib.N) + " exhaustive without an apex; the theorem "
                        "only guarantees an apex of some size";
            }
            else
                inst.note = result.summary;
        });
        for (size_t i = 0; i < exhausted.size(); ++i)
            if (exhausted[i])
                report.red_flags.push_back(i);
        return report;
    }
}

#include <posmt/error.hh>
#include <posmt/morphism.hh>

#include <algorithm>
#include <bit>

using std::size_t;
using std::vector;

namespace posmt
{
    auto to_string(MorphismKind k) -> std::string
    {
        switch (k) {
        case MorphismKind::Hom: return "hom";
        case MorphismKind::Embedding: return "embedding";
        case MorphismKind::Immersion: return "immersion";
        case MorphismKind::StrongImmersion: return "strong-immersion";
        }
        return "?";
    }

    auto kind_letter(MorphismKind k) -> char
    {
        return "heis"[int(k)];
    }

    auto parse_kind(std::string_view text) -> MorphismKind
    {
        if (text == "h" || text == "hom" || text == "homomorphism")
            return MorphismKind::Hom;
        if (text == "e" || text == "embedding")
            return MorphismKind::Embedding;
        if (text == "i" || text == "immersion")
            return MorphismKind::Immersion;
        if (text == "s" || text == "strong" || text == "strong-immersion")
            return MorphismKind::StrongImmersion;
        throw SemanticError("unknown morphism kind '" + std::string(text) + "'");
    }

    auto validate_morphism(const Morphism & m) -> void
    {
        if (! m.source.signature().same_symbols(m.target.signature()))
            throw SignatureMismatch("morphism between structures over different signatures");
        if (int(m.map.size()) != m.source.size())
            throw SemanticError("morphism is not total: " + std::to_string(m.map.size()) + " images for "
                    + std::to_string(m.source.size()) + " elements");
        for (auto v : m.map)
            if (v < 0 || v >= m.target.size())
                throw SemanticError("morphism image outside the target universe");
    }

    auto identity_morphism(const FiniteStructure & s) -> Morphism
    {
        vector<Element> map(s.size());
        for (int i = 0; i < s.size(); ++i)
            map[i] = i;
        return Morphism{s, s, map};
    }

    auto compose(const Morphism & first, const Morphism & second) -> Morphism
    {
        if (first.target.size() != second.source.size() || ! first.target.same_tables(second.source))
            throw PreconditionError("compose: target of the first map is not the source of the second");
        vector<Element> map;
        for (auto v : first.map)
            map.push_back(second.map.at(v));
        return Morphism{first.source, second.target, map};
    }

    auto FactSet::of(const FiniteStructure & s) -> FactSet
    {
        FactSet result;
        result.variables = s.size();
        auto & sig = s.signature();
        int n = s.size();
        for (size_t r = 0; r < sig.relations().size(); ++r) {
            auto & table = s.relation_table(int(r));
            for (size_t j = 0; j < table.size(); ++j)
                if (table[j] == 1)
                    result.facts.push_back(Fact{Fact::Kind::Relation, int(r), tuple_at(n, sig.relations()[r].arity, j)});
        }
        for (size_t f = 0; f < sig.functions().size(); ++f) {
            auto & table = s.function_table(int(f));
            for (size_t j = 0; j < table.size(); ++j)
                result.facts.push_back(
                        Fact{Fact::Kind::Function, int(f), tuple_at(n, sig.functions()[f].arity, j), table[j]});
        }
        for (size_t c = 0; c < sig.constants().size(); ++c)
            result.facts.push_back(Fact{Fact::Kind::Constant, int(c), {s.constant(int(c))}});
        return result;
    }

    namespace
    {
        using Fact = FactSet::Fact;

        class HomSearch
        {
        public:
            HomSearch(const FactSet & source, const FiniteStructure & target, const HomConstraint & constraint,
                    const std::function<bool(const vector<Element> &)> & visit, size_t node_cap) :
                _source(source),
                _target(target),
                _constraint(constraint),
                _visit(visit),
                _node_cap(node_cap)
            {
            }

            auto run() -> size_t
            {
                int n = _source.variables;
                int t = _target.size();
                if (t > 64)
                    throw PreconditionError("homomorphism search supports targets of at most 64 elements");
                std::uint64_t full = t == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << t) - 1;
                vector<std::uint64_t> domains(n, full);
                _assign.assign(n, -1);
                _facts_of.assign(n, {});
                _distinct_of.assign(n, {});
                _same_of.assign(n, {});

                auto check_var = [&](int v) {
                    if (v < 0 || v >= n)
                        throw PreconditionError("homomorphism constraint names a missing source element");
                };
                for (size_t a = 0; a < _constraint.required.size() && a < size_t(n); ++a)
                    if (auto r = _constraint.required[a]; r >= 0) {
                        if (r >= t)
                            throw PreconditionError("required image outside the target");
                        domains[a] &= bit(r);
                    }
                for (auto [a, b] : _constraint.forbidden) {
                    check_var(a);
                    if (b >= 0 && b < t)
                        domains[a] &= ~bit(b);
                }
                for (auto [a, b] : _constraint.distinct) {
                    check_var(a), check_var(b);
                    if (a == b)
                        return 0;
                    _distinct_of[a].push_back(b);
                    _distinct_of[b].push_back(a);
                }
                for (auto [a, b] : _constraint.same) {
                    check_var(a), check_var(b);
                    _same_of[a].push_back(b);
                    _same_of[b].push_back(a);
                }

                for (size_t i = 0; i < _source.facts.size(); ++i) {
                    auto & f = _source.facts[i];
                    auto vars = variables_of(f);
                    for (auto v : vars) {
                        check_var(v);
                        _facts_of[v].push_back(int(i));
                    }
                    if (f.kind == Fact::Kind::Constant)
                        domains[f.args[0]] &= bit(_target.constant(f.symbol));
                    else if (vars.size() == 1 && ! filter(f, vars[0], domains))
                        return 0;
                }
                for (auto d : domains)
                    if (d == 0)
                        return 0;
                search(0, domains);
                return _nodes;
            }

        private:
            const FactSet & _source;
            const FiniteStructure & _target;
            const HomConstraint & _constraint;
            const std::function<bool(const vector<Element> &)> & _visit;
            size_t _node_cap;
            size_t _nodes = 0;
            bool _stopped = false;

            vector<Element> _assign;
            vector<vector<int>> _facts_of, _distinct_of, _same_of;

            static auto bit(int v) -> std::uint64_t
            {
                return std::uint64_t(1) << v;
            }

            static auto variables_of(const Fact & f) -> vector<int>
            {
                vector<int> vars = f.args;
                if (f.kind == Fact::Kind::Function)
                    vars.push_back(f.result);
                std::sort(vars.begin(), vars.end());
                vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
                return vars;
            }

            auto holds(const Fact & f) const -> bool
            {
                switch (f.kind) {
                case Fact::Kind::Constant: return _target.constant(f.symbol) == _assign[f.args[0]];
                case Fact::Kind::Relation: {
                    size_t index = 0, scale = 1;
                    for (auto a : f.args) {
                        index += size_t(_assign[a]) * scale;
                        scale *= size_t(_target.size());
                    }
                    return _target.relation_table(f.symbol)[index] == 1;
                }
                case Fact::Kind::Function: {
                    size_t index = 0, scale = 1;
                    for (auto a : f.args) {
                        index += size_t(_assign[a]) * scale;
                        scale *= size_t(_target.size());
                    }
                    return _target.function_table(f.symbol)[index] == _assign[f.result];
                }
                }
                return false;
            }

            // Keeps the values of v for which the fact can hold, all its other
            // variables being assigned.
            auto filter(const Fact & f, int v, vector<std::uint64_t> & domains) -> bool
            {
                auto d = domains[v];
                std::uint64_t kept = 0;
                while (d) {
                    int value = std::countr_zero(d);
                    d &= d - 1;
                    _assign[v] = value;
                    if (holds(f))
                        kept |= bit(value);
                }
                _assign[v] = -1;
                domains[v] = kept;
                return kept != 0;
            }

            auto search(int assigned, const vector<std::uint64_t> & domains) -> void
            {
                if (_stopped)
                    return;
                if (++_nodes > _node_cap)
                    throw BudgetExhausted(
                            "homomorphism search exceeded the node cap of " + std::to_string(_node_cap));
                int n = _source.variables;
                if (assigned == n) {
                    if (! _visit(_assign))
                        _stopped = true;
                    return;
                }
                int var = -1, best = 65;
                for (int v = 0; v < n; ++v)
                    if (_assign[v] < 0) {
                        int c = std::popcount(domains[v]);
                        if (c < best)
                            best = c, var = v;
                    }
                auto d = domains[var];
                while (d && ! _stopped) {
                    int value = std::countr_zero(d);
                    d &= d - 1;
                    _assign[var] = value;
                    auto next = domains;
                    next[var] = bit(value);
                    if (propagate(var, value, next))
                        search(assigned + 1, next);
                }
                _assign[var] = -1;
            }

            auto propagate(int var, int value, vector<std::uint64_t> & domains) -> bool
            {
                for (auto u : _distinct_of[var]) {
                    if (_assign[u] == value)
                        return false;
                    if (_assign[u] < 0 && ! (domains[u] &= ~bit(value)))
                        return false;
                }
                for (auto u : _same_of[var]) {
                    if (_assign[u] >= 0 && _assign[u] != value)
                        return false;
                    if (_assign[u] < 0 && ! (domains[u] &= bit(value)))
                        return false;
                }
                if (_constraint.injective)
                    for (int u = 0; u < _source.variables; ++u)
                        if (u != var && _assign[u] < 0 && ! (domains[u] &= ~bit(value)))
                            return false;
                for (auto i : _facts_of[var]) {
                    auto & f = _source.facts[i];
                    int open = -1, count = 0;
                    for (auto v : variables_of(f))
                        if (_assign[v] < 0)
                            open = v, ++count;
                    if (count == 0 && ! holds(f))
                        return false;
                    if (count == 1 && ! filter(f, open, domains))
                        return false;
                }
                return true;
            }
        };
    }

    auto search_homs(const FactSet & source, const FiniteStructure & target, const HomConstraint & constraint,
            const std::function<bool(const vector<Element> &)> & visit, size_t node_cap) -> size_t
    {
        return HomSearch(source, target, constraint, visit, node_cap).run();
    }

    auto find_hom(const FactSet & source, const FiniteStructure & target, const HomConstraint & constraint,
            size_t node_cap) -> std::optional<vector<Element>>
    {
        std::optional<vector<Element>> found;
        search_homs(source, target, constraint, [&](const vector<Element> & m) {
            found = m;
            return false;
        }, node_cap);
        return found;
    }

    auto is_homomorphism(const Morphism & m) -> bool
    {
        validate_morphism(m);
        auto & a = m.source;
        auto & b = m.target;
        auto & sig = a.signature();
        int n = a.size();
        for (size_t r = 0; r < sig.relations().size(); ++r) {
            auto & table = a.relation_table(int(r));
            for (size_t j = 0; j < table.size(); ++j)
                if (table[j] == 1) {
                    auto t = tuple_at(n, sig.relations()[r].arity, j);
                    for (auto & x : t)
                        x = m.map[x];
                    if (! b.holds(int(r), t))
                        return false;
                }
        }
        for (size_t f = 0; f < sig.functions().size(); ++f) {
            auto & table = a.function_table(int(f));
            for (size_t j = 0; j < table.size(); ++j) {
                auto t = tuple_at(n, sig.functions()[f].arity, j);
                for (auto & x : t)
                    x = m.map[x];
                if (b.apply(int(f), t) != m.map[table[j]])
                    return false;
            }
        }
        for (size_t c = 0; c < sig.constants().size(); ++c)
            if (b.constant(int(c)) != m.map[a.constant(int(c))])
                return false;
        return true;
    }

    auto is_embedding(const Morphism & m) -> bool
    {
        if (! is_homomorphism(m))
            return false;
        vector<Element> sorted = m.map;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            return false;
        // An injective homomorphism reflects function and constant facts; only
        // relations remain.
        auto & sig = m.source.signature();
        int n = m.source.size();
        for (size_t r = 0; r < sig.relations().size(); ++r) {
            auto & table = m.source.relation_table(int(r));
            for (size_t j = 0; j < table.size(); ++j)
                if (table[j] == 0) {
                    auto t = tuple_at(n, sig.relations()[r].arity, j);
                    for (auto & x : t)
                        x = m.map[x];
                    if (m.target.holds(int(r), t))
                        return false;
                }
        }
        return true;
    }

    auto find_retraction(const Morphism & m, size_t node_cap) -> std::optional<vector<Element>>
    {
        if (! is_homomorphism(m))
            return std::nullopt;
        HomConstraint c;
        c.required.assign(m.target.size(), -1);
        for (Element a = 0; a < m.source.size(); ++a) {
            auto & slot = c.required[m.map[a]];
            if (slot >= 0 && slot != a)
                return std::nullopt;
            slot = a;
        }
        return find_hom(FactSet::of(m.target), m.source, c, node_cap);
    }

    auto is_immersion(const Morphism & m) -> bool
    {
        return find_retraction(m).has_value();
    }

    auto strong_witness_signature(const Morphism & m) -> Expansion
    {
        return expand_with_constants(m.source);
    }

    auto is_strong_immersion(const Morphism & m, int k) -> StrongImmersionCheck
    {
        validate_morphism(m);
        auto & a = m.source;
        auto & b = m.target;
        auto & sig = a.signature();
        int n = b.size();
        StrongImmersionCheck result;
        result.bound = k <= 0 ? n : k;
        auto names = strong_witness_signature(m).constant_names;

        vector<Element> preimage(n, -1);
        for (Element x = 0; x < a.size(); ++x) {
            auto y = m.map[x];
            if (preimage[y] >= 0) {
                result.witness = Sentence::h_universal(
                        make_equality(Term::constant(names[preimage[y]]), Term::constant(names[x])));
                return result;
            }
            preimage[y] = x;
        }

        int limit = std::min(result.bound, n);
        for (int size = 1; size <= limit; ++size) {
            vector<int> subset(size);
            for (int i = 0; i < size; ++i)
                subset[i] = i;
            while (true) {
                vector<int> local(n, -1);
                for (int i = 0; i < size; ++i)
                    local[subset[i]] = i;

                // Positive diagram of the subset in the target, as facts over
                // subset positions and as formulas with images named by constants.
                vector<Term> term_of(n, Term::variable(""));
                vector<std::string> vars;
                for (auto e : subset)
                    if (preimage[e] >= 0)
                        term_of[e] = Term::constant(names[preimage[e]]);
                    else {
                        vars.push_back("y" + std::to_string(vars.size()));
                        term_of[e] = Term::variable(vars.back());
                    }

                FactSet facts;
                facts.variables = size;
                vector<FormulaPtr> atoms;
                for (size_t r = 0; r < sig.relations().size(); ++r) {
                    int arity = sig.relations()[r].arity;
                    for (size_t j = 0; j < table_size(size, arity); ++j) {
                        auto t = tuple_at(size, arity, j);
                        vector<Element> elems;
                        for (auto x : t)
                            elems.push_back(subset[x]);
                        if (! b.holds(int(r), elems))
                            continue;
                        facts.facts.push_back(Fact{Fact::Kind::Relation, int(r), t});
                        vector<Term> args;
                        for (auto e : elems)
                            args.push_back(term_of[e]);
                        atoms.push_back(make_relation(sig.relations()[r].name, args));
                    }
                }
                for (size_t f = 0; f < sig.functions().size(); ++f) {
                    int arity = sig.functions()[f].arity;
                    for (size_t j = 0; j < table_size(size, arity); ++j) {
                        auto t = tuple_at(size, arity, j);
                        vector<Element> elems;
                        for (auto x : t)
                            elems.push_back(subset[x]);
                        auto v = b.apply(int(f), elems);
                        if (local[v] < 0)
                            continue;
                        facts.facts.push_back(Fact{Fact::Kind::Function, int(f), t, local[v]});
                        vector<Term> args;
                        for (auto e : elems)
                            args.push_back(term_of[e]);
                        atoms.push_back(make_equality(Term::application(sig.functions()[f].name, args), term_of[v]));
                    }
                }
                for (size_t c = 0; c < sig.constants().size(); ++c) {
                    auto v = b.constant(int(c));
                    if (local[v] < 0)
                        continue;
                    facts.facts.push_back(Fact{Fact::Kind::Constant, int(c), {local[v]}});
                    atoms.push_back(make_equality(Term::constant(sig.constants()[c]), term_of[v]));
                }

                HomConstraint fix;
                fix.required.assign(size, -1);
                for (int i = 0; i < size; ++i)
                    fix.required[i] = preimage[subset[i]];

                auto premise = make_and(atoms);
                if (vars.empty()) {
                    if (! find_hom(facts, a, fix)) {
                        result.witness = Sentence::h_universal(premise);
                        return result;
                    }
                }
                else {
                    // Every match of the premise in the source, as equalities
                    // between the free elements and source constants.
                    vector<FormulaPtr> disjuncts;
                    search_homs(facts, a, fix, [&](const vector<Element> & s) {
                        vector<FormulaPtr> eqs;
                        for (int i = 0; i < size; ++i)
                            if (preimage[subset[i]] < 0)
                                eqs.push_back(make_equality(term_of[subset[i]], Term::constant(names[s[i]])));
                        disjuncts.push_back(make_and(eqs));
                        return true;
                    });
                    result.witness = Sentence::h_inductive({Implication{vars, premise, make_or(disjuncts)}});
                    return result;
                }

                int i = size - 1;
                while (i >= 0 && subset[i] == n - size + i)
                    --i;
                if (i < 0)
                    break;
                ++subset[i];
                for (int j = i + 1; j < size; ++j)
                    subset[j] = subset[j - 1] + 1;
            }
        }
        result.holds = true;
        return result;
    }

    auto certify_kind(const Morphism & m, MorphismKind at_least, int k) -> std::optional<KindCertificate>
    {
        if (! is_homomorphism(m))
            throw PreconditionError("not a homomorphism");
        KindCertificate cert;
        if (at_least == MorphismKind::Hom)
            return cert;
        if (! is_embedding(m))
            return std::nullopt;
        cert.kind = MorphismKind::Embedding;
        if (at_least == MorphismKind::Embedding)
            return cert;
        cert.retraction = find_retraction(m);
        if (! cert.retraction)
            return std::nullopt;
        cert.kind = MorphismKind::Immersion;
        if (at_least == MorphismKind::Immersion)
            return cert;
        auto strong = is_strong_immersion(m, k);
        cert.strong_bound = strong.bound;
        if (! strong.holds)
            return std::nullopt;
        cert.kind = MorphismKind::StrongImmersion;
        return cert;
    }

    auto classify_morphism(const Morphism & m, int k) -> KindCertificate
    {
        if (! is_homomorphism(m))
            throw PreconditionError("not a homomorphism");
        KindCertificate cert;
        if (! is_embedding(m))
            return cert;
        cert.kind = MorphismKind::Embedding;
        cert.retraction = find_retraction(m);
        if (! cert.retraction)
            return cert;
        cert.kind = MorphismKind::Immersion;
        auto strong = is_strong_immersion(m, k);
        cert.strong_bound = strong.bound;
        if (strong.holds)
            cert.kind = MorphismKind::StrongImmersion;
        else
            cert.refutation = strong.witness;
        return cert;
    }

    auto enumerate_homs(const FiniteStructure & a, const FiniteStructure & b, const HomConstraint & constraint,
            MorphismKind kind, int k, size_t node_cap) -> vector<CertifiedMorphism>
    {
        if (! a.signature().same_symbols(b.signature()))
            throw SignatureMismatch("enumerate_homs: structures over different signatures");
        auto c = constraint;
        if (kind >= MorphismKind::Embedding)
            c.injective = true;
        vector<vector<Element>> maps;
        search_homs(FactSet::of(a), b, c, [&](const vector<Element> & m) {
            maps.push_back(m);
            return true;
        }, node_cap);
        std::sort(maps.begin(), maps.end());
        vector<CertifiedMorphism> result;
        for (auto & map : maps) {
            Morphism m{a, b, map};
            if (auto cert = certify_kind(m, kind, k))
                result.push_back(CertifiedMorphism{std::move(m), std::move(*cert)});
        }
        return result;
    }
}

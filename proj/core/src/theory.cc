#include <posmt/error.hh>
#include <posmt/eval.hh>
#include <posmt/parallel.hh>
#include <posmt/theory.hh>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using std::size_t;
using std::string;
using std::vector;

namespace posmt
{
    auto Theory::formulas() const -> vector<FormulaPtr>
    {
        vector<FormulaPtr> result;
        for (auto & s : sentences)
            result.push_back(s.as_formula());
        return result;
    }

    auto Theory::with(vector<Sentence> extra, string new_name) const -> Theory
    {
        Theory t = *this;
        if (! new_name.empty())
            t.name = std::move(new_name);
        t.sentences.insert(t.sentences.end(), extra.begin(), extra.end());
        return t;
    }

    auto validate_theory(const Theory & t) -> void
    {
        if (! t.signature)
            throw SemanticError("theory '" + t.name + "' has no signature");
        for (auto & s : t.sentences) {
            auto f = s.as_formula();
            if (! free_variables(f).empty())
                throw SemanticError("theory '" + t.name + "' has a sentence with free variables: " + to_string(s));
            check_symbols(f, *t.signature);
        }
    }

    auto validate_budget(const Budget & b) -> void
    {
        if (b.n < 1 || b.N < 1 || b.k < 1 || b.node_cap < 1 || b.jobs < 1)
            throw PreconditionError("budget bounds must be positive");
    }

    auto to_string(VerdictValue v) -> string
    {
        switch (v) {
        case VerdictValue::Yes: return "yes";
        case VerdictValue::No: return "no";
        case VerdictValue::Unknown: return "unknown";
        }
        return "?";
    }

    auto Certificate::structure(const string & label) const -> const FiniteStructure *
    {
        for (auto & [l, s] : structures)
            if (l == label)
                return &s;
        return nullptr;
    }

    auto Certificate::map(const string & label) const -> const NamedMap *
    {
        for (auto & m : maps)
            if (m.name == label)
                return &m;
        return nullptr;
    }

    auto Certificate::detail(const string & label) const -> const string *
    {
        for (auto & [l, d] : details)
            if (l == label)
                return &d;
        return nullptr;
    }

    auto merge_value(VerdictValue a, VerdictValue b) -> VerdictValue
    {
        if (a == VerdictValue::No || b == VerdictValue::No)
            return VerdictValue::No;
        if (a == VerdictValue::Unknown || b == VerdictValue::Unknown)
            return VerdictValue::Unknown;
        return VerdictValue::Yes;
    }

    namespace
    {
        auto search_options(const Budget & b) -> ModelSearchOptions
        {
            ModelSearchOptions o;
            o.node_cap = b.node_cap;
            return o;
        }

        auto unknown(const Budget & b, const string & why) -> Verdict
        {
            Verdict v;
            v.value = VerdictValue::Unknown;
            v.budget = b;
            v.summary = "unknown: " + why;
            v.notes.push_back(why);
            return v;
        }

        // Models of sizes 1..max_size; stops at the first size whose search hits the
        // cap and reports that through capped.
        auto models_until_cap(const Theory & t, int max_size, const Budget & b, bool & capped)
            -> vector<FiniteStructure>
        {
            auto formulas = t.formulas();
            vector<FiniteStructure> result;
            capped = false;
            for (int size = 1; size <= max_size; ++size) {
                try {
                    auto batch = find_models(t.signature, formulas, size, search_options(b));
                    result.insert(result.end(), batch.begin(), batch.end());
                }
                catch (const BudgetExhausted &) {
                    capped = true;
                    break;
                }
            }
            return result;
        }

        // A homomorphism from m into some candidate that is not an immersion.
        struct PcFailure
        {
            size_t target;
            vector<Element> map;
        };

        auto pc_failure(const FiniteStructure & m, const vector<FiniteStructure> & candidates, const Budget & b,
                size_t * homs_checked = nullptr) -> std::optional<PcFailure>
        {
            vector<std::optional<vector<Element>>> failures(candidates.size());
            vector<size_t> counts(candidates.size(), 0);
            auto facts = FactSet::of(m);
            parallel_for(candidates.size(), b.jobs, [&](size_t i) {
                search_homs(facts, candidates[i], {}, [&](const vector<Element> & map) {
                    ++counts[i];
                    if (! find_retraction(Morphism{m, candidates[i], map}, b.node_cap)) {
                        failures[i] = map;
                        return false;
                    }
                    return true;
                }, b.node_cap);
            });
            if (homs_checked)
                *homs_checked = std::accumulate(counts.begin(), counts.end(), size_t(0));
            for (size_t i = 0; i < candidates.size(); ++i)
                if (failures[i])
                    return PcFailure{i, *failures[i]};
            return std::nullopt;
        }

        auto pc_subset(const vector<FiniteStructure> & ms, const Budget & b) -> vector<FiniteStructure>
        {
            vector<FiniteStructure> result;
            for (auto & m : ms)
                if (! pc_failure(m, ms, b))
                    result.push_back(m);
            return result;
        }

        auto generators(const TypeProfile & profile, const SignatureRef & sig, int k) -> vector<Sentence>
        {
            vector<Sentence> result;
            for (int m = 0; m <= k && m <= profile.max_free(); ++m) {
                auto pool = cq_pool(sig, m, k);
                vector<string> vars;
                for (int v = 0; v < m; ++v)
                    vars.push_back("x" + std::to_string(v));

                // Each realized type, reduced to its maximal queries.
                vector<FormulaPtr> type_formula;
                for (auto & t : profile.types[m]) {
                    vector<size_t> members;
                    for (size_t q = 0; q < pool->queries.size(); ++q)
                        if (bit_test(t, q))
                            members.push_back(q);
                    vector<FormulaPtr> maximal;
                    for (auto i : members) {
                        bool dominated = false;
                        for (auto j : members)
                            if (j != i && pool->is_subquery(i, j) && ! (pool->is_subquery(j, i) && j > i)) {
                                dominated = true;
                                break;
                            }
                        if (! dominated && ! pool->queries[i].atoms.empty())
                            maximal.push_back(pool->queries[i].to_formula());
                    }
                    type_formula.push_back(make_and(maximal));
                }

                for (size_t q = 0; q < pool->queries.size(); ++q) {
                    vector<FormulaPtr> disjuncts;
                    bool trivial = false;
                    for (size_t t = 0; t < profile.types[m].size(); ++t)
                        if (bit_test(profile.types[m][t], q)) {
                            disjuncts.push_back(type_formula[t]);
                            trivial = trivial || type_formula[t]->kind == FormulaKind::True;
                        }
                    if (trivial)
                        continue;
                    auto premise = pool->queries[q].to_formula();
                    if (m == 0 && disjuncts.empty())
                        result.push_back(Sentence::h_universal(premise));
                    else if (m == 0 && pool->queries[q].atoms.empty())
                        result.push_back(Sentence::positive(make_or(disjuncts)));
                    else
                        result.push_back(Sentence::h_inductive({Implication{vars, premise, make_or(disjuncts)}}));
                }
            }
            return result;
        }

        auto pool0(const SignatureRef & sig, int k) -> std::shared_ptr<const CQPool>
        {
            return cq_pool(sig, 0, k);
        }

        auto star_diagram(const FiniteStructure & a, DiagramKind kind, int k) -> DiagramSet
        {
            DiagramSet d;
            d.kind = kind;
            d.signature = a.signature_ref();
            d.bound = k;
            d.sources = {a};
            auto pool = pool0(d.signature, k);
            if (kind == DiagramKind::TiStar) {
                d.sentences = generators(type_profile(a, k, k), d.signature, k);
                return d;
            }
            auto profile = type_profile(a, k, 0);
            for (size_t q = 0; q < pool->queries.size(); ++q) {
                bool holds = bit_test(profile.sentences(), q);
                if (kind == DiagramKind::DiagPlusStar && holds)
                    d.sentences.push_back(Sentence::positive(pool->queries[q].to_formula()));
                if (kind == DiagramKind::TuStar && ! holds)
                    d.sentences.push_back(Sentence::h_universal(pool->queries[q].to_formula()));
            }
            return d;
        }
    }

    auto models(const Theory & t, const Budget & b) -> vector<FiniteStructure>
    {
        validate_theory(t);
        validate_budget(b);
        auto formulas = t.formulas();
        return find_models_up_to(t.signature, formulas, b.n, search_options(b));
    }

    auto to_string(DiagramKind k) -> string
    {
        switch (k) {
        case DiagramKind::Diag: return "Diag";
        case DiagramKind::DiagPlus: return "Diag+";
        case DiagramKind::DiagPlusStar: return "Diag+*";
        case DiagramKind::Tu: return "Tu";
        case DiagramKind::Ti: return "Ti";
        case DiagramKind::TuStar: return "Tu*";
        case DiagramKind::TiStar: return "Ti*";
        case DiagramKind::TuRelative: return "Tu(A|B)";
        case DiagramKind::TiRelative: return "Ti(A|B)";
        case DiagramKind::Tk: return "Tk";
        case DiagramKind::TuTheory: return "Tu(T)";
        }
        return "?";
    }

    auto parse_diagram_kind(std::string_view text) -> DiagramKind
    {
        for (int i = 0; i <= int(DiagramKind::TuTheory); ++i)
            if (to_string(DiagramKind(i)) == text)
                return DiagramKind(i);
        static const std::map<string, DiagramKind> aliases{{"diag", DiagramKind::Diag},
            {"diag+", DiagramKind::DiagPlus}, {"diag+*", DiagramKind::DiagPlusStar}, {"tu", DiagramKind::Tu},
            {"ti", DiagramKind::Ti}, {"tu*", DiagramKind::TuStar}, {"ti*", DiagramKind::TiStar},
            {"tu-rel", DiagramKind::TuRelative}, {"ti-rel", DiagramKind::TiRelative}};
        if (auto it = aliases.find(string(text)); it != aliases.end())
            return it->second;
        throw SemanticError("unknown diagram kind '" + string(text) + "'");
    }

    auto DiagramSet::contains(const Sentence & s) const -> bool
    {
        if (kind == DiagramKind::Diag || kind == DiagramKind::DiagPlus) {
            auto text = to_string(s);
            for (auto & t : sentences)
                if (to_string(t) == text)
                    return true;
            return false;
        }
        for (auto & src : sources)
            if (! eval(src, s))
                return false;
        return true;
    }

    auto diagram(const FiniteStructure & a, DiagramKind kind, const Budget & b, std::span<const Element> subset,
            const string & prefix) -> DiagramSet
    {
        switch (kind) {
        case DiagramKind::DiagPlusStar:
        case DiagramKind::TuStar:
        case DiagramKind::TiStar: return star_diagram(a, kind, b.k);
        case DiagramKind::Tu:
        case DiagramKind::Ti:
        case DiagramKind::TuRelative:
        case DiagramKind::TiRelative: {
            bool relative = kind == DiagramKind::TuRelative || kind == DiagramKind::TiRelative;
            if (relative && subset.empty())
                throw PreconditionError("relative diagrams need a subset");
            auto e = expand_with_constants(a, relative ? subset : std::span<const Element>{}, prefix);
            bool universal = kind == DiagramKind::Tu || kind == DiagramKind::TuRelative;
            auto d = star_diagram(e.structure, universal ? DiagramKind::TuStar : DiagramKind::TiStar, b.k);
            d.kind = kind;
            d.constant_names = e.constant_names;
            return d;
        }
        case DiagramKind::Diag:
        case DiagramKind::DiagPlus: break;
        default: throw PreconditionError("diagram kind " + to_string(kind) + " belongs to a theory, not a structure");
        }

        auto e = expand_with_constants(a, {}, prefix);
        DiagramSet d;
        d.kind = kind;
        d.signature = e.signature;
        d.sources = {e.structure};
        d.constant_names = e.constant_names;
        bool negative = kind == DiagramKind::Diag;
        auto & sig = a.signature();
        int n = a.size();
        auto name = [&](Element x) { return Term::constant(e.constant_names[x]); };
        auto add = [&](FormulaPtr atom, bool holds) {
            if (holds)
                d.sentences.push_back(Sentence::positive(atom));
            else if (negative)
                d.sentences.push_back(Sentence::h_universal(atom));
        };
        for (size_t r = 0; r < sig.relations().size(); ++r)
            for (size_t j = 0; j < table_size(n, sig.relations()[r].arity); ++j) {
                auto t = tuple_at(n, sig.relations()[r].arity, j);
                vector<Term> args;
                for (auto x : t)
                    args.push_back(name(x));
                add(make_relation(sig.relations()[r].name, args), a.holds(int(r), t));
            }
        for (size_t f = 0; f < sig.functions().size(); ++f)
            for (size_t j = 0; j < table_size(n, sig.functions()[f].arity); ++j) {
                auto t = tuple_at(n, sig.functions()[f].arity, j);
                vector<Term> args;
                for (auto x : t)
                    args.push_back(name(x));
                auto value = a.apply(int(f), t);
                for (Element y = 0; y < n; ++y)
                    if (y == value || negative)
                        add(make_equality(Term::application(sig.functions()[f].name, args), name(y)), y == value);
            }
        for (size_t c = 0; c < sig.constants().size(); ++c)
            for (Element y = 0; y < n; ++y)
                if (y == a.constant(int(c)) || negative)
                    add(make_equality(Term::constant(sig.constants()[c]), name(y)), y == a.constant(int(c)));
        if (negative)
            for (Element x = 0; x < n; ++x)
                for (Element y = x + 1; y < n; ++y)
                    add(make_equality(name(x), name(y)), false);
        return d;
    }

    auto to_theory(const DiagramSet & d, string name) -> Theory
    {
        return Theory{name.empty() ? to_string(d.kind) : std::move(name), d.signature, d.sentences};
    }

    namespace
    {
        // Congruence closure over the ground atomic facts of a sentence set.
        class GroundClosure
        {
        public:
            auto refute(const vector<Sentence> & sentences, string & reason) -> bool
            {
                vector<FormulaPtr> negatives;
                for (auto & s : sentences)
                    for (auto & c : s.conjuncts) {
                        if (! c.variables.empty())
                            continue;
                        if (c.premise->kind == FormulaKind::True) {
                            if (c.conclusion->kind == FormulaKind::False) {
                                reason = "the set contains a sentence equivalent to false: " + to_string(s);
                                return true;
                            }
                            add_positive(c.conclusion);
                        }
                        else if (c.conclusion->kind == FormulaKind::False && is_ground_atom(c.premise))
                            negatives.push_back(c.premise);
                    }
                close();
                for (auto & a : negatives)
                    if (holds(a)) {
                        reason = "ground facts entail " + to_string(a) + ", which is negated";
                        return true;
                    }
                return false;
            }

        private:
            std::map<std::pair<string, vector<int>>, int> _node_of;
            vector<std::pair<string, vector<int>>> _nodes;
            vector<int> _parent;
            vector<std::pair<string, vector<int>>> _relations;

            static auto is_ground(const Term & t) -> bool
            {
                if (t.kind == Term::Kind::Variable)
                    return false;
                return std::all_of(t.args.begin(), t.args.end(), [](const Term & a) { return is_ground(a); });
            }

            static auto is_ground_atom(const FormulaPtr & f) -> bool
            {
                if (f->kind != FormulaKind::Relation && f->kind != FormulaKind::Equality)
                    return false;
                return std::all_of(f->terms.begin(), f->terms.end(), [](const Term & t) { return is_ground(t); });
            }

            // Bare names are constants here: the sentences are closed.
            auto node(const Term & t) -> int
            {
                vector<int> args;
                for (auto & a : t.args)
                    args.push_back(node(a));
                auto key = std::make_pair(t.name, args);
                if (auto it = _node_of.find(key); it != _node_of.end())
                    return it->second;
                int id = int(_nodes.size());
                _nodes.push_back(key);
                _parent.push_back(id);
                _node_of.emplace(key, id);
                return id;
            }

            auto find(int x) -> int
            {
                while (_parent[x] != x)
                    x = _parent[x] = _parent[_parent[x]];
                return x;
            }

            auto add_positive(const FormulaPtr & f) -> void
            {
                if (f->kind == FormulaKind::And) {
                    for (auto & c : f->children)
                        add_positive(c);
                    return;
                }
                if (! is_ground_atom(f))
                    return;
                if (f->kind == FormulaKind::Equality)
                    _parent[find(node(f->terms[0]))] = find(node(f->terms[1]));
                else {
                    vector<int> args;
                    for (auto & t : f->terms)
                        args.push_back(node(t));
                    _relations.emplace_back(f->symbol, args);
                }
            }

            auto close() -> void
            {
                bool changed = true;
                while (changed) {
                    changed = false;
                    std::map<std::pair<string, vector<int>>, int> seen;
                    for (size_t i = 0; i < _nodes.size(); ++i) {
                        auto & [name, args] = _nodes[i];
                        if (args.empty())
                            continue;
                        vector<int> rep;
                        for (auto a : args)
                            rep.push_back(find(a));
                        auto [it, fresh] = seen.emplace(std::make_pair(name, rep), int(i));
                        if (! fresh && find(it->second) != find(int(i))) {
                            _parent[find(int(i))] = find(it->second);
                            changed = true;
                        }
                    }
                }
            }

            auto holds(const FormulaPtr & f) -> bool
            {
                vector<int> args;
                for (auto & t : f->terms)
                    args.push_back(find(node(t)));
                if (f->kind == FormulaKind::Equality) {
                    close();
                    return find(args[0]) == find(args[1]);
                }
                for (auto & [name, rargs] : _relations) {
                    if (name != f->symbol || rargs.size() != args.size())
                        continue;
                    bool same = true;
                    for (size_t i = 0; i < args.size(); ++i)
                        same = same && find(rargs[i]) == find(args[i]);
                    if (same)
                        return true;
                }
                return false;
            }
        };
    }

    auto joint_consistency_bounded(const vector<ConsistencyPart> & parts, const Budget & b) -> Verdict
    {
        validate_budget(b);
        if (parts.empty())
            throw PreconditionError("joint consistency needs at least one set");
        std::optional<Signature> merged;
        vector<Sentence> sentences;
        for (auto & part : parts) {
            auto & sig = std::holds_alternative<Theory>(part) ? std::get<Theory>(part).signature
                                                              : std::get<DiagramSet>(part).signature;
            auto & list = std::holds_alternative<Theory>(part) ? std::get<Theory>(part).sentences
                                                               : std::get<DiagramSet>(part).sentences;
            merged = merged ? merged->merged_with(*sig, "union") : *sig;
            sentences.insert(sentences.end(), list.begin(), list.end());
        }
        auto sig = make_signature(*merged);
        Theory all{"union", sig, sentences};
        validate_theory(all);

        Verdict v;
        v.budget = b;
        string reason;
        if (GroundClosure().refute(sentences, reason)) {
            v.value = VerdictValue::No;
            v.summary = "no: ground refutation";
            v.certificate.details.emplace_back("refutation", reason);
            return v;
        }
        auto formulas = all.formulas();
        for (int size = 1; size <= b.N; ++size) {
            auto o = search_options(b);
            o.limit = 1;
            vector<FiniteStructure> found;
            try {
                found = find_models(sig, formulas, size, o);
            }
            catch (const BudgetExhausted & e) {
                return unknown(b, string("model search stopped at size ") + std::to_string(size) + ": " + e.what());
            }
            if (! found.empty()) {
                v.value = VerdictValue::Yes;
                v.summary = "yes: model of size " + std::to_string(size);
                v.certificate.structures.emplace_back("model", found.front());
                return v;
            }
        }
        auto u = unknown(b, "no model up to size " + std::to_string(b.N) + " and no ground refutation");
        return u;
    }

    auto is_pc_within(const FiniteStructure & m, const Theory & t, const Budget & b) -> Verdict
    {
        validate_theory(t);
        validate_budget(b);
        if (! m.signature().same_symbols(*t.signature))
            throw SignatureMismatch("structure and theory use different signatures");
        if (! models_all(m, t.sentences))
            throw PreconditionError("the structure is not a model of " + t.name);
        try {
            auto ms = models(t, b);
            size_t checked = 0;
            auto failure = pc_failure(m, ms, b, &checked);
            Verdict v;
            v.budget = b;
            v.certificate.details.emplace_back("models", std::to_string(ms.size()));
            v.certificate.details.emplace_back("homomorphisms", std::to_string(checked));
            if (failure) {
                v.value = VerdictValue::No;
                v.summary = "no: a homomorphism into a model of size " + std::to_string(ms[failure->target].size())
                        + " is not an immersion";
                v.certificate.structures.emplace_back("M", m);
                v.certificate.structures.emplace_back("B", ms[failure->target]);
                v.certificate.maps.push_back(NamedMap{"f", "M", "B", failure->map});
                v.certificate.details.emplace_back("reason", "no retraction B -> M inverts f");
            }
            else {
                v.value = VerdictValue::Yes;
                v.summary = "yes: every homomorphism into the " + std::to_string(ms.size())
                        + " models of size <= " + std::to_string(b.n) + " is an immersion";
            }
            return v;
        }
        catch (const BudgetExhausted & e) {
            return unknown(b, e.what());
        }
    }

    auto pc_models(const Theory & t, const Budget & b) -> vector<FiniteStructure>
    {
        return pc_subset(models(t, b), b);
    }

    auto has_hom(const FiniteStructure & a, const FiniteStructure & c, size_t node_cap) -> bool
    {
        return find_hom(FactSet::of(a), c, {}, node_cap).has_value();
    }

    namespace
    {
        // Pairs (left[i], right[j]) with a common continuation among the candidates.
        // Candidates are generated one size at a time, and the search stops at the
        // first size where every pair has a common continuation.
        auto continuation_verdict(const vector<FiniteStructure> & left, const vector<FiniteStructure> & right,
                bool symmetric, const Theory & t, const Budget & b) -> Verdict
        {
            vector<std::pair<size_t, size_t>> open;
            for (size_t i = 0; i < left.size(); ++i)
                for (size_t j = symmetric ? i : 0; j < right.size(); ++j)
                    open.emplace_back(i, j);
            size_t pairs = open.size(), candidates = 0;
            bool capped = false;
            auto formulas = t.formulas();
            for (int size = 1; size <= b.N && ! open.empty(); ++size) {
                vector<FiniteStructure> batch;
                try {
                    batch = find_models(t.signature, formulas, size, search_options(b));
                }
                catch (const BudgetExhausted &) {
                    capped = true;
                    break;
                }
                candidates += batch.size();
                vector<vector<char>> left_hom(left.size(), vector<char>(batch.size()));
                vector<vector<char>> right_hom(right.size(), vector<char>(batch.size()));
                parallel_for(left.size() + (symmetric ? 0 : right.size()), b.jobs, [&](size_t i) {
                    auto & src = i < left.size() ? left[i] : right[i - left.size()];
                    auto & row = i < left.size() ? left_hom[i] : right_hom[i - left.size()];
                    for (size_t c = 0; c < batch.size(); ++c)
                        row[c] = has_hom(src, batch[c], b.node_cap);
                });
                if (symmetric)
                    right_hom = left_hom;
                std::erase_if(open, [&](const std::pair<size_t, size_t> & p) {
                    for (size_t c = 0; c < batch.size(); ++c)
                        if (left_hom[p.first][c] && right_hom[p.second][c])
                            return true;
                    return false;
                });
            }

            Verdict v;
            v.budget = b;
            v.certificate.details.emplace_back("pairs", std::to_string(pairs));
            v.certificate.details.emplace_back("candidates", std::to_string(candidates));
            if (open.empty()) {
                v.value = VerdictValue::Yes;
                v.summary = "yes: every pair of models of size <= " + std::to_string(b.n)
                        + " has a common continuation of size <= " + std::to_string(b.N);
                return v;
            }
            auto [i, j] = open.front();
            v.certificate.structures.emplace_back("A", left[i]);
            v.certificate.structures.emplace_back("B", right[j]);
            if (capped) {
                v.value = VerdictValue::Unknown;
                v.summary = "unknown: no common continuation found before the node cap";
                v.notes.push_back("model search for " + t.name + " hit the node cap below size " + std::to_string(b.N));
                return v;
            }
            v.value = VerdictValue::No;
            v.summary = "no: the pair has no common continuation of size <= " + std::to_string(b.N);
            v.notes.push_back("bounded: the search up to size " + std::to_string(b.N)
                    + " is exhaustive, larger continuations are not excluded");
            return v;
        }
    }

    auto is_jc_bounded(const Theory & t, const Budget & b) -> Verdict
    {
        validate_theory(t);
        validate_budget(b);
        bool capped_small = false;
        auto small = models_until_cap(t, b.n, b, capped_small);
        if (capped_small)
            return unknown(b, "model search for models of size <= n hit the node cap");
        try {
            return continuation_verdict(small, small, true, t, b);
        }
        catch (const BudgetExhausted & e) {
            return unknown(b, e.what());
        }
    }

    auto is_T_complete_pair(const Theory & t1, const Theory & t2, const Theory & t, const Budget & b) -> Verdict
    {
        for (auto * x : {&t1, &t2})
            if (! x->signature->same_symbols(*t.signature))
                throw SignatureMismatch("T-completeness needs theories over one signature");
        validate_theory(t1);
        validate_theory(t2);
        validate_theory(t);
        validate_budget(b);
        bool c1 = false, c2 = false;
        auto left = models_until_cap(t1, b.n, b, c1);
        auto right = models_until_cap(t2, b.n, b, c2);
        if (c1 || c2)
            return unknown(b, "model search for T1 or T2 hit the node cap");
        try {
            return continuation_verdict(left, right, false, t, b);
        }
        catch (const BudgetExhausted & e) {
            return unknown(b, e.what());
        }
    }

    auto jc_characterization_report(const Theory & t, const Budget & b) -> JCReport
    {
        validate_theory(t);
        validate_budget(b);
        JCReport report;
        report.budget = b;
        report.jc = is_jc_bounded(t, b);

        auto small = models(t, b);
        bool capped = false;
        auto large = models_until_cap(t, b.N, b, capped);
        if (capped)
            throw BudgetExhausted("models up to N hit the node cap");
        int k = b.k;
        vector<TypeProfile> small_profiles, large_profiles;
        for (auto & m : small)
            small_profiles.push_back(type_profile(m, k, k));
        for (auto & m : large)
            large_profiles.push_back(type_profile(m, k, k));
        auto pc = pc_subset(small, b);
        vector<TypeProfile> pc_profiles;
        for (auto & m : pc)
            pc_profiles.push_back(type_profile(m, k, k));

        // sat[m][q]: models with an m-tuple satisfying pool_m query q.
        auto satisfiers = [&](const vector<TypeProfile> & profiles, int m, size_t count) {
            vector<vector<bool>> sat(count, vector<bool>(profiles.size()));
            for (size_t i = 0; i < profiles.size(); ++i)
                for (auto & type : profiles[i].types[m])
                    for (size_t q = 0; q < count; ++q)
                        if (bit_test(type, q))
                            sat[q][i] = true;
            return sat;
        };
        auto any = [](const vector<bool> & v) { return std::find(v.begin(), v.end(), true) != v.end(); };
        auto meet = [](const vector<bool> & x, const vector<bool> & y) {
            for (size_t i = 0; i < x.size(); ++i)
                if (x[i] && y[i])
                    return true;
            return false;
        };

        // (1) prime disjunction for h-universal consequences.
        {
            auto pool = cq_pool(t.signature, 0, k);
            auto n_sat = satisfiers(small_profiles, 0, pool->queries.size());
            auto big_sat = satisfiers(large_profiles, 0, pool->queries.size());
            ConditionResult c{"(1) prime disjunction of h-universal consequences", true, ""};
            for (size_t p = 0; p < pool->queries.size() && c.holds; ++p)
                for (size_t q = p; q < pool->queries.size() && c.holds; ++q)
                    if (any(n_sat[p]) && any(n_sat[q]) && ! meet(big_sat[p], big_sat[q])) {
                        c.holds = false;
                        c.detail = "T proves !(" + to_string(pool->queries[p]) + ") | !(" + to_string(pool->queries[q])
                                + ") but neither disjunct";
                    }
            if (c.holds)
                c.detail = "checked all pairs of " + std::to_string(pool->queries.size()) + " positive sentences";
            report.conditions.push_back(c);
        }

        // (2) pairwise consistency of positive formulas with free variables.
        {
            ConditionResult c{"(2) consistent positive formulas are jointly consistent", true, ""};
            size_t checked = 0;
            for (int m1 = 0; m1 <= k && c.holds; ++m1)
                for (int m2 = m1; m2 <= k && c.holds; ++m2) {
                    auto p1 = cq_pool(t.signature, m1, k);
                    auto p2 = cq_pool(t.signature, m2, k);
                    auto s1 = satisfiers(small_profiles, m1, p1->queries.size());
                    auto s2 = satisfiers(small_profiles, m2, p2->queries.size());
                    auto l1 = satisfiers(large_profiles, m1, p1->queries.size());
                    auto l2 = satisfiers(large_profiles, m2, p2->queries.size());
                    for (size_t p = 0; p < p1->queries.size() && c.holds; ++p)
                        for (size_t q = 0; q < p2->queries.size() && c.holds; ++q) {
                            ++checked;
                            if (any(s1[p]) && any(s2[q]) && ! meet(l1[p], l2[q])) {
                                c.holds = false;
                                c.detail = to_string(p1->queries[p]) + " and " + to_string(p2->queries[q])
                                        + " are each consistent with T but not jointly";
                            }
                        }
                }
            if (c.holds)
                c.detail = "checked " + std::to_string(checked) + " pairs";
            report.conditions.push_back(c);
        }

        auto all_small = merge_profiles(small_profiles, k, k);
        // (3) T_u(T) = T_u*(A) for some model A.
        {
            ConditionResult c{"(3) Tu(T) = Tu*(A) for some model A", false, ""};
            if (small.empty()) {
                c.holds = true;
                c.detail = "no models of size <= n; holds vacuously";
            }
            for (size_t i = 0; i < small.size() && ! c.holds; ++i)
                if (tu_contained(small_profiles[i], all_small)) {
                    c.holds = true;
                    c.detail = "witness: model #" + std::to_string(i) + " of size " + std::to_string(small[i].size());
                }
            if (! c.holds)
                c.detail = "no model realizes every positive sentence consistent with T";
            report.conditions.push_back(c);
        }
        // (4) T_k(T) = T_i*(A) for some model A.
        {
            ConditionResult c{"(4) Tk(T) = Ti*(A) for some model A", false, ""};
            auto hull = merge_profiles(pc_profiles, k, k);
            if (small.empty()) {
                c.holds = true;
                c.detail = "no models of size <= n; holds vacuously";
            }
            for (size_t i = 0; i < small.size() && ! c.holds; ++i)
                if (ti_contained(hull, small_profiles[i]) && ti_contained(small_profiles[i], hull)) {
                    c.holds = true;
                    c.detail = "witness: model #" + std::to_string(i) + " of size " + std::to_string(small[i].size());
                }
            if (! c.holds)
                c.detail = "no model has exactly the h-inductive theory of the bounded-pc models";
            report.conditions.push_back(c);
        }
        // (5) all pc models share T_u*.
        {
            ConditionResult c{"(5) all bounded-pc models have the same Tu*", true, ""};
            for (size_t i = 1; i < pc.size() && c.holds; ++i)
                if (! tu_contained(pc_profiles[0], pc_profiles[i]) || ! tu_contained(pc_profiles[i], pc_profiles[0])) {
                    c.holds = false;
                    c.detail = "pc models #0 and #" + std::to_string(i) + " differ";
                }
            if (c.holds)
                c.detail = std::to_string(pc.size()) + " bounded-pc models compared";
            report.conditions.push_back(c);
        }

        bool all = std::all_of(report.conditions.begin(), report.conditions.end(),
                [](const ConditionResult & c) { return c.holds; });
        report.agree = ! report.jc.unknown() && all == report.jc.yes();
        return report;
    }

    auto tu_ti_extremality_check(const Theory & t, const Budget & b) -> Verdict
    {
        validate_theory(t);
        validate_budget(b);
        try {
            auto ms = models(t, b);
            vector<TypeProfile> profiles;
            for (auto & m : ms)
                profiles.push_back(type_profile(m, b.k, b.k));
            vector<bool> is_pc(ms.size());
            for (size_t i = 0; i < ms.size(); ++i)
                is_pc[i] = ! pc_failure(ms[i], ms, b);
            Verdict v;
            v.budget = b;
            for (size_t a = 0; a < ms.size(); ++a) {
                if (! is_pc[a])
                    continue;
                for (size_t c = 0; c < ms.size(); ++c) {
                    string broken;
                    if (tu_contained(profiles[c], profiles[a]) && ! tu_contained(profiles[a], profiles[c]))
                        broken = "Tu*(B) is strictly below Tu*(A)";
                    else if (ti_contained(profiles[a], profiles[c]) && ! ti_contained(profiles[c], profiles[a]))
                        broken = "Ti*(B) is strictly above Ti*(A)";
                    if (! broken.empty()) {
                        v.value = VerdictValue::No;
                        v.summary = "no: " + broken;
                        v.certificate.structures.emplace_back("A", ms[a]);
                        v.certificate.structures.emplace_back("B", ms[c]);
                        return v;
                    }
                }
            }
            v.value = VerdictValue::Yes;
            v.summary = "yes: Tu* minimal and Ti* maximal at every bounded-pc model";
            v.certificate.details.emplace_back("models", std::to_string(ms.size()));
            v.certificate.details.emplace_back("pc models",
                    std::to_string(std::count(is_pc.begin(), is_pc.end(), true)));
            return v;
        }
        catch (const BudgetExhausted & e) {
            return unknown(b, e.what());
        }
    }

    auto companion_check_bounded(const Theory & t1, const Theory & t2, const Budget & b) -> Verdict
    {
        if (! t1.signature->same_symbols(*t2.signature))
            throw SignatureMismatch("companion check needs theories over one signature");
        try {
            auto p1 = pc_models(t1, b);
            auto p2 = pc_models(t2, b);
            std::map<vector<int>, FiniteStructure> c1, c2;
            for (auto & m : p1)
                c1.emplace(canonical_code(m), m);
            for (auto & m : p2)
                c2.emplace(canonical_code(m), m);
            Verdict v;
            v.budget = b;
            v.certificate.details.emplace_back("pc models of " + t1.name, std::to_string(p1.size()));
            v.certificate.details.emplace_back("pc models of " + t2.name, std::to_string(p2.size()));
            for (auto & [code, m] : c1)
                if (! c2.count(code)) {
                    v.value = VerdictValue::No;
                    v.summary = "no: a bounded-pc model of " + t1.name + " is not one of " + t2.name;
                    v.certificate.structures.emplace_back("M", m);
                    return v;
                }
            for (auto & [code, m] : c2)
                if (! c1.count(code)) {
                    v.value = VerdictValue::No;
                    v.summary = "no: a bounded-pc model of " + t2.name + " is not one of " + t1.name;
                    v.certificate.structures.emplace_back("M", m);
                    return v;
                }
            v.value = VerdictValue::Yes;
            v.summary = "yes: same " + std::to_string(p1.size()) + " bounded-pc models";
            for (auto & m : p1)
                v.certificate.structures.emplace_back("pc", m);
            return v;
        }
        catch (const BudgetExhausted & e) {
            return unknown(b, e.what());
        }
    }

    auto kaiser_hull_bounded(const Theory & t, const Budget & b) -> KaiserHull
    {
        auto ms = models(t, b);
        auto pc = pc_subset(ms, b);
        KaiserHull result;
        vector<TypeProfile> pc_profiles;
        for (auto & m : pc)
            pc_profiles.push_back(type_profile(m, b.k, b.k));
        result.hull.kind = DiagramKind::Tk;
        result.hull.signature = t.signature;
        result.hull.bound = b.k;
        result.hull.sources = pc;
        result.hull.sentences = generators(merge_profiles(pc_profiles, b.k, b.k), t.signature, b.k);

        auto pool = cq_pool(t.signature, 0, b.k);
        vector<TypeProfile> profiles;
        for (auto & m : ms)
            profiles.push_back(type_profile(m, b.k, 0));
        auto sat = satisfiable_sentences(merge_profiles(profiles, b.k, 0), pool->queries.size());
        result.universal.kind = DiagramKind::TuTheory;
        result.universal.signature = t.signature;
        result.universal.bound = b.k;
        result.universal.sources = ms;
        for (size_t q = 0; q < pool->queries.size(); ++q)
            if (! bit_test(sat, q))
                result.universal.sentences.push_back(Sentence::h_universal(pool->queries[q].to_formula()));
        return result;
    }
}

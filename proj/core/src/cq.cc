#include <posmt/cq.hh>
#include <posmt/error.hh>

#include <algorithm>
#include <map>
#include <set>

using std::set;
using std::string;
using std::vector;

namespace posmt
{
    auto CQ::to_formula() const -> FormulaPtr
    {
        return make_exists(quantified, make_and(atoms));
    }

    auto to_string(const CQ & q) -> string
    {
        return to_string(q.to_formula());
    }

    namespace
    {
        struct Conjunct
        {
            vector<string> quantified;
            vector<FormulaPtr> atoms;
        };

        class Flattener
        {
        public:
            explicit Flattener(set<string> used) :
                _used(std::move(used))
            {
            }

            auto fresh() -> string
            {
                while (true) {
                    string name = "_v" + std::to_string(_counter++);
                    if (_used.insert(name).second)
                        return name;
                }
            }

            auto rename_apart(const FormulaPtr & f, const std::map<string, string> & renaming) -> FormulaPtr
            {
                auto copy = std::make_shared<Formula>(*f);
                for (auto & t : copy->terms)
                    t = substitute(t, renaming);
                if (f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) {
                    auto inner = renaming;
                    for (auto & v : copy->variables) {
                        if (! _used.insert(v).second) {
                            auto fresh_name = fresh();
                            inner[v] = fresh_name;
                            v = fresh_name;
                        }
                        else
                            inner.erase(v);
                    }
                    copy->children[0] = rename_apart(f->children[0], inner);
                    return copy;
                }
                for (auto & c : copy->children)
                    c = rename_apart(c, renaming);
                return copy;
            }

            auto dnf(const FormulaPtr & f, std::size_t cap) -> vector<Conjunct>
            {
                switch (f->kind) {
                case FormulaKind::True: return {Conjunct{}};
                case FormulaKind::False: return {};
                case FormulaKind::Relation:
                case FormulaKind::Equality: return {flatten_atom(f)};
                case FormulaKind::Or: {
                    vector<Conjunct> result;
                    for (auto & c : f->children) {
                        auto sub = dnf(c, cap);
                        result.insert(result.end(), sub.begin(), sub.end());
                        if (result.size() > cap)
                            throw BudgetExhausted("DNF exceeds " + std::to_string(cap) + " disjuncts");
                    }
                    return result;
                }
                case FormulaKind::And: {
                    vector<Conjunct> result{Conjunct{}};
                    for (auto & c : f->children) {
                        auto sub = dnf(c, cap);
                        if (result.size() * sub.size() > cap)
                            throw BudgetExhausted("DNF exceeds " + std::to_string(cap) + " disjuncts");
                        vector<Conjunct> next;
                        for (auto & a : result)
                            for (auto & b : sub) {
                                Conjunct joined = a;
                                joined.quantified.insert(joined.quantified.end(), b.quantified.begin(), b.quantified.end());
                                joined.atoms.insert(joined.atoms.end(), b.atoms.begin(), b.atoms.end());
                                next.push_back(std::move(joined));
                            }
                        result = std::move(next);
                    }
                    return result;
                }
                case FormulaKind::Exists: {
                    auto result = dnf(f->children[0], cap);
                    for (auto & c : result)
                        c.quantified.insert(c.quantified.begin(), f->variables.begin(), f->variables.end());
                    return result;
                }
                default: throw PreconditionError("to_cq_dnf: formula is not positive: " + to_string(f));
                }
            }

        private:
            set<string> _used;
            int _counter = 0;

            static auto substitute(const Term & t, const std::map<string, string> & renaming) -> Term
            {
                if (t.kind == Term::Kind::Variable) {
                    auto it = renaming.find(t.name);
                    return it == renaming.end() ? t : Term::variable(it->second);
                }
                Term result = t;
                for (auto & a : result.args)
                    a = substitute(a, renaming);
                return result;
            }

            // Reduces a term to a variable or constant, emitting defining atoms.
            auto name_of(const Term & t, Conjunct & out) -> Term
            {
                if (t.kind != Term::Kind::Application)
                    return t;
                auto app = shallow(t, out);
                auto v = fresh();
                out.quantified.push_back(v);
                out.atoms.push_back(make_equality(app, Term::variable(v)));
                return Term::variable(v);
            }

            // Reduces a term to a variable, constant, or application of variables/constants.
            auto shallow(const Term & t, Conjunct & out) -> Term
            {
                if (t.kind != Term::Kind::Application)
                    return t;
                vector<Term> args;
                for (auto & a : t.args)
                    args.push_back(name_of(a, out));
                return Term::application(t.name, std::move(args));
            }

            auto flatten_atom(const FormulaPtr & f) -> Conjunct
            {
                Conjunct out;
                if (f->kind == FormulaKind::Relation) {
                    vector<Term> args;
                    for (auto & a : f->terms)
                        args.push_back(name_of(a, out));
                    out.atoms.push_back(make_relation(f->symbol, std::move(args)));
                    return out;
                }
                auto lhs = shallow(f->terms[0], out);
                auto rhs = f->terms[1];
                if (lhs.kind != Term::Kind::Application) {
                    rhs = shallow(rhs, out);
                    if (rhs.kind == Term::Kind::Application)
                        std::swap(lhs, rhs);
                }
                else
                    rhs = name_of(rhs, out);
                out.atoms.push_back(make_equality(lhs, rhs));
                return out;
            }
        };

    }

    auto to_cq_dnf(const FormulaPtr & positive, std::size_t cap) -> vector<CQ>
    {
        if (! is_positive(positive))
            throw PreconditionError("to_cq_dnf: formula is not positive: " + to_string(positive));
        auto free = free_variables(positive);
        Flattener flattener(set<string>(free.begin(), free.end()));
        auto conjuncts = flattener.dnf(flattener.rename_apart(positive, {}), cap);

        vector<CQ> result;
        for (auto & c : conjuncts)
            result.push_back(CQ{vector<string>(free.begin(), free.end()), c.quantified, c.atoms});
        return result;
    }

    auto pointed_positive_diagram(const PointedStructure & p, std::span<const Element> subset) -> CQ
    {
        auto & s = p.structure;
        auto & sig = s.signature();
        int n = s.size();
        vector<bool> in(n, false);
        for (auto e : subset) {
            if (e < 0 || e >= n)
                throw PreconditionError("diagram subset element outside the universe");
            in[e] = true;
        }

        CQ q;
        vector<Term> var_of(n, Term::variable(""));
        vector<bool> named(n, false);
        for (std::size_t i = 0; i < p.anchors.size(); ++i) {
            auto a = p.anchors[i];
            if (a < 0 || a >= n || ! in[a])
                throw PreconditionError("diagram anchors must lie in the subset");
            string name = "x" + std::to_string(i);
            q.free_variables.push_back(name);
            if (named[a])
                q.atoms.push_back(make_equality(var_of[a], Term::variable(name)));
            else {
                var_of[a] = Term::variable(name);
                named[a] = true;
            }
        }
        int next_y = 0;
        for (int e = 0; e < n; ++e)
            if (in[e] && ! named[e]) {
                string name = "y" + std::to_string(next_y++);
                q.quantified.push_back(name);
                var_of[e] = Term::variable(name);
                named[e] = true;
            }

        vector<Element> members;
        for (int e = 0; e < n; ++e)
            if (in[e])
                members.push_back(e);
        int m = int(members.size());

        for (std::size_t r = 0; r < sig.relations().size(); ++r) {
            int arity = sig.relations()[r].arity;
            for (std::size_t j = 0; j < table_size(m, arity); ++j) {
                auto t = tuple_at(m, arity, j);
                for (auto & x : t)
                    x = members[x];
                if (s.holds(int(r), t)) {
                    vector<Term> args;
                    for (auto x : t)
                        args.push_back(var_of[x]);
                    q.atoms.push_back(make_relation(sig.relations()[r].name, std::move(args)));
                }
            }
        }
        for (std::size_t f = 0; f < sig.functions().size(); ++f) {
            int arity = sig.functions()[f].arity;
            for (std::size_t j = 0; j < table_size(m, arity); ++j) {
                auto t = tuple_at(m, arity, j);
                for (auto & x : t)
                    x = members[x];
                auto v = s.apply(int(f), t);
                if (! in[v])
                    continue;
                vector<Term> args;
                for (auto x : t)
                    args.push_back(var_of[x]);
                q.atoms.push_back(make_equality(Term::application(sig.functions()[f].name, std::move(args)), var_of[v]));
            }
        }
        for (std::size_t c = 0; c < sig.constants().size(); ++c) {
            auto v = s.constant(int(c));
            if (in[v])
                q.atoms.push_back(make_equality(Term::constant(sig.constants()[c]), var_of[v]));
        }
        return q;
    }

    CompiledCQ::CompiledCQ(const CQ & q, const Signature & sig)
    {
        std::map<string, int> slot;
        for (auto & v : q.free_variables)
            if (! slot.count(v))
                slot[v] = _slot_count++;
        _free_count = int(q.free_variables.size());
        if (_slot_count != _free_count)
            throw SemanticError("CQ has repeated free variables");
        for (auto & v : q.quantified)
            if (! slot.emplace(v, _slot_count).second)
                throw SemanticError("CQ quantifies '" + v + "' twice");
            else
                ++_slot_count;

        auto arg_of = [&](const Term & t) -> Arg {
            if (t.kind == Term::Kind::Variable) {
                auto it = slot.find(t.name);
                if (it != slot.end())
                    return Arg{it->second, -1};
                if (auto c = sig.constant_index(t.name))
                    return Arg{-1, *c};
                throw UnboundVariable("unbound variable '" + t.name + "' in CQ");
            }
            if (t.kind == Term::Kind::Constant) {
                auto c = sig.constant_index(t.name);
                if (! c)
                    throw SignatureMismatch("unknown constant '" + t.name + "'");
                return Arg{-1, *c};
            }
            throw PreconditionError("CQ atom is not flat: " + to_string(t));
        };

        for (auto & f : q.atoms) {
            Atom a;
            a.kind = f->kind;
            if (f->kind == FormulaKind::Relation) {
                auto r = sig.relation_index(f->symbol);
                if (! r || sig.relations()[*r].arity != int(f->terms.size()))
                    throw SignatureMismatch("bad relation atom in CQ: " + to_string(f));
                a.symbol = *r;
                for (auto & t : f->terms)
                    a.args.push_back(arg_of(t));
            }
            else if (f->kind == FormulaKind::Equality) {
                auto & lhs = f->terms[0];
                if (lhs.kind == Term::Kind::Application) {
                    auto fn = sig.function_index(lhs.name);
                    if (! fn || sig.functions()[*fn].arity != int(lhs.args.size()))
                        throw SignatureMismatch("bad function atom in CQ: " + to_string(f));
                    a.is_function = true;
                    a.symbol = *fn;
                    for (auto & t : lhs.args)
                        a.args.push_back(arg_of(t));
                }
                else
                    a.args.push_back(arg_of(lhs));
                a.result = arg_of(f->terms[1]);
            }
            else if (f->kind == FormulaKind::True)
                continue;
            else if (f->kind != FormulaKind::False)
                throw PreconditionError("CQ atom expected, got " + to_string(f));
            for (auto & x : a.args)
                a.last_slot = std::max(a.last_slot, x.slot);
            a.last_slot = std::max(a.last_slot, a.result.slot);
            _atoms.push_back(std::move(a));
        }

        _check_at.assign(_slot_count + 1, {});
        _determiner.assign(_slot_count, -1);
        for (std::size_t i = 0; i < _atoms.size(); ++i) {
            auto & a = _atoms[i];
            int bucket = std::max(a.last_slot, _free_count - 1) + 1;
            _check_at[bucket].push_back(int(i));
            if (a.is_function && a.result.slot >= _free_count && a.result.slot == a.last_slot
                    && _determiner[a.result.slot] < 0
                    && std::all_of(a.args.begin(), a.args.end(), [&](const Arg & x) { return x.slot < a.result.slot; }))
                _determiner[a.result.slot] = int(i);
        }
    }

    auto CompiledCQ::atom_holds(const Atom & a, const FiniteStructure & s, const vector<Element> & env) const -> bool
    {
        auto val = [&](const Arg & x) { return x.slot >= 0 ? env[x.slot] : s.constant(x.constant); };
        if (a.kind == FormulaKind::False)
            return false;
        if (a.kind == FormulaKind::Relation) {
            std::size_t index = 0, scale = 1;
            for (auto & x : a.args) {
                index += std::size_t(val(x)) * scale;
                scale *= std::size_t(s.size());
            }
            return s.relation_table(a.symbol)[index] == 1;
        }
        Element lhs;
        if (a.is_function) {
            std::size_t index = 0, scale = 1;
            for (auto & x : a.args) {
                index += std::size_t(val(x)) * scale;
                scale *= std::size_t(s.size());
            }
            lhs = s.function_table(a.symbol)[index];
        }
        else
            lhs = val(a.args[0]);
        return lhs == val(a.result);
    }

    auto CompiledCQ::search(int slot, const FiniteStructure & s, vector<Element> & env) const -> bool
    {
        if (slot == _slot_count)
            return true;
        auto try_value = [&](Element e) {
            env[slot] = e;
            for (auto i : _check_at[slot + 1])
                if (! atom_holds(_atoms[i], s, env))
                    return false;
            return search(slot + 1, s, env);
        };
        if (auto d = _determiner[slot]; d >= 0) {
            auto & a = _atoms[d];
            std::size_t index = 0, scale = 1;
            for (auto & x : a.args) {
                index += std::size_t(x.slot >= 0 ? env[x.slot] : s.constant(x.constant)) * scale;
                scale *= std::size_t(s.size());
            }
            return try_value(s.function_table(a.symbol)[index]);
        }
        for (Element e = 0; e < s.size(); ++e)
            if (try_value(e))
                return true;
        return false;
    }

    auto CompiledCQ::holds(const FiniteStructure & s, std::span<const Element> free_values) const -> bool
    {
        if (int(free_values.size()) != _free_count)
            throw UnboundVariable("CQ expects " + std::to_string(_free_count) + " free values");
        vector<Element> env(_slot_count, -1);
        std::copy(free_values.begin(), free_values.end(), env.begin());
        for (auto i : _check_at[_free_count])
            if (! atom_holds(_atoms[i], s, env))
                return false;
        return search(_free_count, s, env);
    }
}

#include <posmt/eval.hh>

#include <algorithm>

using std::span;
using std::string;
using std::vector;

namespace posmt
{
    namespace
    {
        using CTerm = CompiledFormula::Term;
        using CNode = CompiledFormula::Node;

        struct Compiler
        {
            const Signature & sig;
            std::map<string, int> scope;
            int slots = 0;

            auto term(const posmt::Term & t) -> CTerm
            {
                switch (t.kind) {
                case posmt::Term::Kind::Variable: {
                    auto it = scope.find(t.name);
                    if (it != scope.end())
                        return CTerm{CTerm::Kind::Slot, it->second, {}};
                    if (auto c = sig.constant_index(t.name))
                        return CTerm{CTerm::Kind::Constant, *c, {}};
                    throw UnboundVariable("unbound variable '" + t.name + "'");
                }
                case posmt::Term::Kind::Constant: {
                    auto c = sig.constant_index(t.name);
                    if (! c)
                        throw SignatureMismatch("unknown constant '" + t.name + "'");
                    return CTerm{CTerm::Kind::Constant, *c, {}};
                }
                case posmt::Term::Kind::Application: {
                    auto f = sig.function_index(t.name);
                    if (! f)
                        throw SignatureMismatch("unknown function symbol '" + t.name + "'");
                    if (sig.functions()[*f].arity != int(t.args.size()))
                        throw SignatureMismatch("function '" + t.name + "' applied to the wrong number of arguments");
                    CTerm result{CTerm::Kind::Application, *f, {}};
                    for (auto & a : t.args)
                        result.args.push_back(term(a));
                    return result;
                }
                }
                throw SemanticError("bad term");
            }

            auto node(const FormulaPtr & f) -> CNode
            {
                CNode result;
                result.kind = f->kind;
                switch (f->kind) {
                case FormulaKind::Relation: {
                    auto r = sig.relation_index(f->symbol);
                    if (! r)
                        throw SignatureMismatch("unknown relation symbol '" + f->symbol + "'");
                    if (sig.relations()[*r].arity != int(f->terms.size()))
                        throw SignatureMismatch("relation '" + f->symbol + "' applied to the wrong number of arguments");
                    result.symbol = *r;
                    for (auto & t : f->terms)
                        result.terms.push_back(term(t));
                    break;
                }
                case FormulaKind::Equality:
                    for (auto & t : f->terms)
                        result.terms.push_back(term(t));
                    break;
                case FormulaKind::Exists:
                case FormulaKind::Forall: {
                    auto saved = scope;
                    for (auto & v : f->variables) {
                        scope[v] = slots;
                        result.slots.push_back(slots++);
                    }
                    result.children.push_back(node(f->children[0]));
                    scope = std::move(saved);
                    break;
                }
                default:
                    for (auto & c : f->children)
                        result.children.push_back(node(c));
                }
                return result;
            }
        };

        auto value(const CTerm & t, const Interp & in, const vector<Element> & env) -> Element
        {
            switch (t.kind) {
            case CTerm::Kind::Slot: return env[t.index];
            case CTerm::Kind::Constant: return in.constants[t.index];
            case CTerm::Kind::Application: {
                std::size_t index = 0, scale = 1;
                for (auto & a : t.args) {
                    auto v = value(a, in, env);
                    if (v < 0)
                        return -1;
                    index += std::size_t(v) * scale;
                    scale *= std::size_t(in.size);
                }
                return in.functions[t.index][index];
            }
            }
            return -1;
        }

        auto truth(const CNode & n, const Interp & in, vector<Element> & env) -> Truth;

        auto negate(Truth t) -> Truth
        {
            return Truth(2 - int(t));
        }

        auto quantify(const CNode & n, std::size_t depth, const Interp & in, vector<Element> & env, bool existential)
            -> Truth
        {
            if (depth == n.slots.size())
                return truth(n.children[0], in, env);
            Truth acc = existential ? Truth::False : Truth::True;
            for (Element e = 0; e < in.size; ++e) {
                env[n.slots[depth]] = e;
                auto t = quantify(n, depth + 1, in, env, existential);
                if (existential) {
                    acc = std::max(acc, t);
                    if (acc == Truth::True)
                        break;
                }
                else {
                    acc = std::min(acc, t);
                    if (acc == Truth::False)
                        break;
                }
            }
            env[n.slots[depth]] = -1;
            return acc;
        }

        auto truth(const CNode & n, const Interp & in, vector<Element> & env) -> Truth
        {
            switch (n.kind) {
            case FormulaKind::True: return Truth::True;
            case FormulaKind::False: return Truth::False;
            case FormulaKind::Relation: {
                std::size_t index = 0, scale = 1;
                for (auto & t : n.terms) {
                    auto v = value(t, in, env);
                    if (v < 0)
                        return Truth::Unknown;
                    index += std::size_t(v) * scale;
                    scale *= std::size_t(in.size);
                }
                auto bit = in.relations[n.symbol][index];
                return bit < 0 ? Truth::Unknown : bit ? Truth::True : Truth::False;
            }
            case FormulaKind::Equality: {
                auto a = value(n.terms[0], in, env);
                auto b = value(n.terms[1], in, env);
                if (a < 0 || b < 0)
                    return Truth::Unknown;
                return a == b ? Truth::True : Truth::False;
            }
            case FormulaKind::And: {
                Truth acc = Truth::True;
                for (auto & c : n.children) {
                    acc = std::min(acc, truth(c, in, env));
                    if (acc == Truth::False)
                        break;
                }
                return acc;
            }
            case FormulaKind::Or: {
                Truth acc = Truth::False;
                for (auto & c : n.children) {
                    acc = std::max(acc, truth(c, in, env));
                    if (acc == Truth::True)
                        break;
                }
                return acc;
            }
            case FormulaKind::Not: return negate(truth(n.children[0], in, env));
            case FormulaKind::Implies: {
                auto p = truth(n.children[0], in, env);
                if (p == Truth::False)
                    return Truth::True;
                return std::max(negate(p), truth(n.children[1], in, env));
            }
            case FormulaKind::Exists: return quantify(n, 0, in, env, true);
            case FormulaKind::Forall: return quantify(n, 0, in, env, false);
            }
            return Truth::Unknown;
        }
    }

    CompiledFormula::CompiledFormula(const FormulaPtr & f, const Signature & sig, vector<string> free_variables) :
        _free(std::move(free_variables))
    {
        Compiler c{sig, {}, 0};
        for (auto & v : _free)
            c.scope[v] = c.slots++;
        _root = c.node(f);
        _slot_count = c.slots;
    }

    auto CompiledFormula::evaluate(const Interp & interp, span<const Element> free_values) const -> Truth
    {
        vector<Element> env(_slot_count, -1);
        for (std::size_t i = 0; i < free_values.size() && i < _free.size(); ++i)
            env[i] = free_values[i];
        return truth(_root, interp, env);
    }

    auto CompiledFormula::holds(const FiniteStructure & s, span<const Element> free_values) const -> bool
    {
        if (free_values.size() != _free.size())
            throw UnboundVariable("formula expects " + std::to_string(_free.size()) + " free values");
        return evaluate(s.view(), free_values) == Truth::True;
    }

    auto eval(const FiniteStructure & s, const FormulaPtr & f, const Assignment & env) -> bool
    {
        vector<string> names;
        vector<Element> values;
        for (auto & [name, e] : env) {
            if (e < 0 || e >= s.size())
                throw SemanticError("assignment of '" + name + "' lies outside the universe");
            names.push_back(name);
            values.push_back(e);
        }
        CompiledFormula c(f, s.signature(), names);
        return c.evaluate(s.view(), values) == Truth::True;
    }

    auto eval(const FiniteStructure & s, const Sentence & sentence) -> bool
    {
        return eval(s, sentence.as_formula());
    }

    auto evaluate_term(const FiniteStructure & s, const posmt::Term & t, const Assignment & env) -> Element
    {
        Compiler c{s.signature(), {}, 0};
        vector<Element> values;
        for (auto & [name, e] : env) {
            c.scope[name] = c.slots++;
            values.push_back(e);
        }
        auto compiled = c.term(t);
        return value(compiled, s.view(), values);
    }

    auto models_all(const FiniteStructure & s, span<const Sentence> sentences) -> bool
    {
        return std::all_of(sentences.begin(), sentences.end(), [&](auto & x) { return eval(s, x); });
    }
}

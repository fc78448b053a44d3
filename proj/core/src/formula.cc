#include <posmt/formula.hh>

#include <algorithm>

using std::set;
using std::string;
using std::vector;

namespace posmt
{
    auto Term::variable(string name) -> Term
    {
        return Term{Kind::Variable, std::move(name), {}};
    }

    auto Term::constant(string name) -> Term
    {
        return Term{Kind::Constant, std::move(name), {}};
    }

    auto Term::application(string function, vector<Term> args) -> Term
    {
        return Term{Kind::Application, std::move(function), std::move(args)};
    }

    namespace
    {
        auto node(FormulaKind kind) -> std::shared_ptr<Formula>
        {
            auto f = std::make_shared<Formula>();
            f->kind = kind;
            return f;
        }

        auto is_atomic(const FormulaPtr & f) -> bool
        {
            switch (f->kind) {
            case FormulaKind::True:
            case FormulaKind::False:
            case FormulaKind::Relation:
            case FormulaKind::Equality: return true;
            default: return false;
            }
        }
    }

    auto make_true() -> FormulaPtr
    {
        return node(FormulaKind::True);
    }

    auto make_false() -> FormulaPtr
    {
        return node(FormulaKind::False);
    }

    auto make_relation(string symbol, vector<Term> args) -> FormulaPtr
    {
        auto f = node(FormulaKind::Relation);
        f->symbol = std::move(symbol);
        f->terms = std::move(args);
        return f;
    }

    auto make_equality(Term lhs, Term rhs) -> FormulaPtr
    {
        auto f = node(FormulaKind::Equality);
        f->terms = {std::move(lhs), std::move(rhs)};
        return f;
    }

    auto make_and(vector<FormulaPtr> children) -> FormulaPtr
    {
        if (children.empty())
            return make_true();
        if (children.size() == 1)
            return children.front();
        auto f = node(FormulaKind::And);
        f->children = std::move(children);
        return f;
    }

    auto make_or(vector<FormulaPtr> children) -> FormulaPtr
    {
        if (children.empty())
            return make_false();
        if (children.size() == 1)
            return children.front();
        auto f = node(FormulaKind::Or);
        f->children = std::move(children);
        return f;
    }

    auto make_not(FormulaPtr child) -> FormulaPtr
    {
        auto f = node(FormulaKind::Not);
        f->children = {std::move(child)};
        return f;
    }

    auto make_implies(FormulaPtr premise, FormulaPtr conclusion) -> FormulaPtr
    {
        auto f = node(FormulaKind::Implies);
        f->children = {std::move(premise), std::move(conclusion)};
        return f;
    }

    auto make_exists(vector<string> variables, FormulaPtr body) -> FormulaPtr
    {
        if (variables.empty())
            return body;
        auto f = node(FormulaKind::Exists);
        f->variables = std::move(variables);
        f->children = {std::move(body)};
        return f;
    }

    auto make_forall(vector<string> variables, FormulaPtr body) -> FormulaPtr
    {
        if (variables.empty())
            return body;
        auto f = node(FormulaKind::Forall);
        f->variables = std::move(variables);
        f->children = {std::move(body)};
        return f;
    }

    auto with_span(FormulaPtr f, Span span) -> FormulaPtr
    {
        auto copy = std::make_shared<Formula>(*f);
        copy->span = span;
        return copy;
    }

    auto same_formula(const FormulaPtr & a, const FormulaPtr & b) -> bool
    {
        if (a->kind != b->kind || a->symbol != b->symbol || a->terms != b->terms || a->variables != b->variables
                || a->children.size() != b->children.size())
            return false;
        for (std::size_t i = 0; i < a->children.size(); ++i)
            if (! same_formula(a->children[i], b->children[i]))
                return false;
        return true;
    }

    auto term_variables(const Term & t, set<string> & out) -> void
    {
        if (t.kind == Term::Kind::Variable)
            out.insert(t.name);
        for (auto & a : t.args)
            term_variables(a, out);
    }

    auto free_variables(const FormulaPtr & f) -> set<string>
    {
        set<string> result;
        for (auto & t : f->terms)
            term_variables(t, result);
        for (auto & c : f->children) {
            auto sub = free_variables(c);
            result.insert(sub.begin(), sub.end());
        }
        for (auto & v : f->variables)
            result.erase(v);
        return result;
    }

    auto first_non_positive(const FormulaPtr & f) -> FormulaPtr
    {
        switch (f->kind) {
        case FormulaKind::Not:
        case FormulaKind::Implies:
        case FormulaKind::Forall: return f;
        default: break;
        }
        for (auto & c : f->children)
            if (auto bad = first_non_positive(c))
                return bad;
        return nullptr;
    }

    auto is_positive(const FormulaPtr & f) -> bool
    {
        return first_non_positive(f) == nullptr;
    }

    auto is_quantifier_free(const FormulaPtr & f) -> bool
    {
        if (f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall)
            return false;
        return std::all_of(f->children.begin(), f->children.end(), [](auto & c) { return is_quantifier_free(c); });
    }

    auto to_string(const Term & t) -> string
    {
        if (t.kind != Term::Kind::Application)
            return t.name;
        string result = t.name + "(";
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i > 0)
                result += ",";
            result += to_string(t.args[i]);
        }
        return result + ")";
    }

    namespace
    {
        auto joined(const vector<string> & items, const string & sep) -> string
        {
            string result;
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i > 0)
                    result += sep;
                result += items[i];
            }
            return result;
        }

        auto operand(const FormulaPtr & f) -> string
        {
            if (is_atomic(f))
                return to_string(f);
            return "(" + to_string(f) + ")";
        }
    }

    auto to_string(const FormulaPtr & f) -> string
    {
        switch (f->kind) {
        case FormulaKind::True: return "true";
        case FormulaKind::False: return "false";
        case FormulaKind::Relation: {
            vector<string> args;
            for (auto & t : f->terms)
                args.push_back(to_string(t));
            return f->symbol + "(" + joined(args, ",") + ")";
        }
        case FormulaKind::Equality: return to_string(f->terms[0]) + " = " + to_string(f->terms[1]);
        case FormulaKind::And:
        case FormulaKind::Or: {
            vector<string> parts;
            for (auto & c : f->children)
                parts.push_back(operand(c));
            return joined(parts, f->kind == FormulaKind::And ? " & " : " | ");
        }
        case FormulaKind::Not: return "!" + operand(f->children[0]);
        case FormulaKind::Implies: return operand(f->children[0]) + " -> " + operand(f->children[1]);
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            return string(f->kind == FormulaKind::Exists ? "exists " : "forall ") + joined(f->variables, " ") + ". "
                + to_string(f->children[0]);
        }
        return "?";
    }

    namespace
    {
        auto resolve_term(const Term & t, const Signature & sig, const set<string> & bound) -> Term
        {
            if (t.kind == Term::Kind::Variable) {
                if (! bound.count(t.name) && sig.constant_index(t.name))
                    return Term::constant(t.name);
                return t;
            }
            Term result = t;
            for (auto & a : result.args)
                a = resolve_term(a, sig, bound);
            return result;
        }

        auto resolve(const FormulaPtr & f, const Signature & sig, set<string> bound) -> FormulaPtr
        {
            auto copy = std::make_shared<Formula>(*f);
            for (auto & v : f->variables)
                bound.insert(v);
            for (auto & t : copy->terms)
                t = resolve_term(t, sig, bound);
            for (auto & c : copy->children)
                c = resolve(c, sig, bound);
            return copy;
        }
    }

    auto resolve_constants(const FormulaPtr & f, const Signature & sig) -> FormulaPtr
    {
        return resolve(f, sig, {});
    }

    auto check_symbols(const Term & t, const Signature & sig) -> void
    {
        switch (t.kind) {
        case Term::Kind::Variable: return;
        case Term::Kind::Constant:
            if (! sig.constant_index(t.name))
                throw SemanticError("unknown constant '" + t.name + "'");
            return;
        case Term::Kind::Application: {
            auto i = sig.function_index(t.name);
            if (! i)
                throw SemanticError("unknown function symbol '" + t.name + "'");
            if (sig.functions()[*i].arity != int(t.args.size()))
                throw SemanticError("function '" + t.name + "' expects " + std::to_string(sig.functions()[*i].arity)
                        + " arguments");
            for (auto & a : t.args)
                check_symbols(a, sig);
            return;
        }
        }
    }

    auto check_symbols(const FormulaPtr & f, const Signature & sig) -> void
    {
        if (f->kind == FormulaKind::Relation) {
            auto i = sig.relation_index(f->symbol);
            if (! i)
                throw SemanticError("unknown relation symbol '" + f->symbol + "'");
            if (sig.relations()[*i].arity != int(f->terms.size()))
                throw SemanticError("relation '" + f->symbol + "' expects "
                        + std::to_string(sig.relations()[*i].arity) + " arguments");
        }
        for (auto & t : f->terms)
            check_symbols(t, sig);
        for (auto & c : f->children)
            check_symbols(c, sig);
    }

    auto to_string(SentenceClass c) -> string
    {
        switch (c) {
        case SentenceClass::Positive: return "positive";
        case SentenceClass::HUniversal: return "huniversal";
        case SentenceClass::HInductive: return "hinductive";
        case SentenceClass::Outside: return "outside";
        }
        return "?";
    }

    auto Sentence::positive(FormulaPtr p) -> Sentence
    {
        return Sentence{SentenceClass::Positive, {Implication{{}, make_true(), std::move(p)}}};
    }

    auto Sentence::h_universal(FormulaPtr negated) -> Sentence
    {
        return Sentence{SentenceClass::HUniversal, {Implication{{}, std::move(negated), make_false()}}};
    }

    auto Sentence::h_inductive(vector<Implication> conjuncts) -> Sentence
    {
        return Sentence{SentenceClass::HInductive, std::move(conjuncts)};
    }

    auto Sentence::as_formula() const -> FormulaPtr
    {
        if (origin == SentenceClass::Positive)
            return conjuncts.front().conclusion;
        if (origin == SentenceClass::HUniversal)
            return make_not(conjuncts.front().premise);
        vector<FormulaPtr> parts;
        for (auto & c : conjuncts)
            parts.push_back(make_forall(c.variables, make_implies(c.premise, c.conclusion)));
        return make_and(std::move(parts));
    }

    auto to_string(const Sentence & s) -> string
    {
        switch (s.origin) {
        case SentenceClass::Positive: return "positive: " + to_string(s.conjuncts.front().conclusion);
        case SentenceClass::HUniversal: return "huniversal: !" + operand(s.conjuncts.front().premise);
        default: break;
        }
        vector<string> parts;
        for (auto & c : s.conjuncts) {
            string body = operand(c.premise) + " -> " + operand(c.conclusion);
            if (c.variables.empty())
                parts.push_back(body);
            else
                parts.push_back("forall " + joined(c.variables, " ") + ". " + body);
        }
        return "hinductive: " + joined(parts, "; ");
    }

    namespace
    {
        auto as_implication(const FormulaPtr & f) -> std::optional<Implication>
        {
            vector<string> vars;
            FormulaPtr body = f;
            while (body->kind == FormulaKind::Forall) {
                vars.insert(vars.end(), body->variables.begin(), body->variables.end());
                body = body->children[0];
            }
            if (body->kind == FormulaKind::Implies) {
                if (is_positive(body->children[0]) && is_positive(body->children[1]))
                    return Implication{vars, body->children[0], body->children[1]};
                return std::nullopt;
            }
            if (body->kind == FormulaKind::Not && is_positive(body->children[0]))
                return Implication{vars, body->children[0], make_false()};
            if (is_positive(body))
                return Implication{vars, make_true(), body};
            return std::nullopt;
        }
    }

    auto as_sentence(const FormulaPtr & f) -> std::optional<Sentence>
    {
        if (is_positive(f))
            return Sentence::positive(f);
        if (f->kind == FormulaKind::Not && is_positive(f->children[0]))
            return Sentence::h_universal(f->children[0]);
        vector<FormulaPtr> pieces;
        if (f->kind == FormulaKind::And)
            pieces = f->children;
        else
            pieces = {f};
        vector<Implication> conjuncts;
        for (auto & p : pieces) {
            auto imp = as_implication(p);
            if (! imp)
                return std::nullopt;
            conjuncts.push_back(std::move(*imp));
        }
        return Sentence::h_inductive(std::move(conjuncts));
    }

    auto classify_sentence(const FormulaPtr & f) -> SentenceClass
    {
        auto s = as_sentence(f);
        return s ? s->origin : SentenceClass::Outside;
    }
}

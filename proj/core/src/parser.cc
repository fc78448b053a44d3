#include <posmt/parser.hh>

#include <cctype>

using std::string;
using std::string_view;
using std::vector;

namespace posmt
{
    namespace
    {
        auto is_keyword(string_view s) -> bool
        {
            return s == "exists" || s == "forall" || s == "true" || s == "false";
        }

        class FormulaReader
        {
        public:
            FormulaReader(TokenStream & tokens, const Signature * sig) :
                _tokens(tokens),
                _sig(sig)
            {
            }

            auto formula() -> FormulaPtr
            {
                return implication();
            }

            auto term() -> Term
            {
                auto & t = _tokens.peek();
                if (t.kind != Token::Kind::Identifier || is_keyword(t.text))
                    _tokens.fail("expected a term");
                _tokens.next();
                if (_tokens.accept("(")) {
                    vector<Term> args;
                    if (! _tokens.is(")")) {
                        args.push_back(term());
                        while (_tokens.accept(","))
                            args.push_back(term());
                    }
                    _tokens.expect(")");
                    return Term::application(t.text, std::move(args));
                }
                if (_sig && _sig->constant_index(t.text))
                    return Term::variable(t.text);
                if (! is_variable_name(t.text))
                    _tokens.fail_at(t, "invalid variable name (variables match [a-z][a-zA-Z0-9_]*)");
                return Term::variable(t.text);
            }

        private:
            TokenStream & _tokens;
            const Signature * _sig;

            auto spanned(FormulaPtr f, SourceLocation begin) -> FormulaPtr
            {
                auto end = _tokens.peek().where;
                return with_span(std::move(f), Span{begin, end});
            }

            auto implication() -> FormulaPtr
            {
                auto begin = _tokens.peek().where;
                auto lhs = disjunction();
                if (_tokens.accept("->"))
                    return spanned(make_implies(lhs, implication()), begin);
                return lhs;
            }

            auto disjunction() -> FormulaPtr
            {
                auto begin = _tokens.peek().where;
                vector<FormulaPtr> parts{conjunction()};
                while (_tokens.accept("|"))
                    parts.push_back(conjunction());
                if (parts.size() == 1)
                    return parts.front();
                auto f = std::make_shared<Formula>();
                f->kind = FormulaKind::Or;
                f->children = std::move(parts);
                return spanned(f, begin);
            }

            auto conjunction() -> FormulaPtr
            {
                auto begin = _tokens.peek().where;
                vector<FormulaPtr> parts{unary()};
                while (_tokens.accept("&"))
                    parts.push_back(unary());
                if (parts.size() == 1)
                    return parts.front();
                auto f = std::make_shared<Formula>();
                f->kind = FormulaKind::And;
                f->children = std::move(parts);
                return spanned(f, begin);
            }

            auto unary() -> FormulaPtr
            {
                auto begin = _tokens.peek().where;
                if (_tokens.accept("!"))
                    return spanned(make_not(unary()), begin);
                if (_tokens.peek().kind == Token::Kind::Identifier
                        && (_tokens.peek().text == "exists" || _tokens.peek().text == "forall")) {
                    bool existential = _tokens.next().text == "exists";
                    vector<string> vars;
                    while (_tokens.peek().kind == Token::Kind::Identifier) {
                        auto & v = _tokens.next();
                        if (! is_variable_name(v.text) || is_keyword(v.text))
                            _tokens.fail_at(v, "invalid quantified variable");
                        vars.push_back(v.text);
                    }
                    if (vars.empty())
                        _tokens.fail("expected at least one quantified variable");
                    _tokens.expect(".");
                    auto body = implication();
                    auto f = std::make_shared<Formula>();
                    f->kind = existential ? FormulaKind::Exists : FormulaKind::Forall;
                    f->variables = std::move(vars);
                    f->children = {body};
                    return spanned(f, begin);
                }
                return primary();
            }

            auto primary() -> FormulaPtr
            {
                auto begin = _tokens.peek().where;
                if (_tokens.accept("(")) {
                    auto f = implication();
                    _tokens.expect(")");
                    return f;
                }
                if (_tokens.accept_keyword("true"))
                    return spanned(make_true(), begin);
                if (_tokens.accept_keyword("false"))
                    return spanned(make_false(), begin);
                auto lhs = term();
                if (_tokens.accept("="))
                    return spanned(make_equality(lhs, term()), begin);
                if (lhs.kind != Term::Kind::Application)
                    _tokens.fail("expected '=' after a term");
                return spanned(make_relation(lhs.name, lhs.args), begin);
            }
        };

        auto finish(FormulaPtr f, const Signature * sig) -> FormulaPtr
        {
            if (sig)
                return resolve_constants(f, *sig);
            return f;
        }

        [[noreturn]] auto shape_error(const FormulaPtr & at, const string & message) -> void
        {
            throw ParseError(message, at->span.begin);
        }

        auto require_positive(const FormulaPtr & f, const string & context) -> void
        {
            if (auto bad = first_non_positive(f)) {
                string what = bad->kind == FormulaKind::Not ? "negation"
                    : bad->kind == FormulaKind::Implies     ? "implication"
                                                            : "universal quantifier";
                shape_error(bad, what + " inside a positive formula (" + context + ")");
            }
        }

        auto require_closed(const FormulaPtr & f, const vector<string> & bound, const string & context) -> void
        {
            auto free = free_variables(f);
            for (auto & v : bound)
                free.erase(v);
            if (! free.empty())
                shape_error(f, "free variable '" + *free.begin() + "' in " + context);
        }
    }

    auto is_variable_name(string_view name) -> bool
    {
        if (name.empty() || ! std::islower(static_cast<unsigned char>(name[0])))
            return false;
        for (char c : name)
            if (! std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                return false;
        return true;
    }

    auto parse_general_formula(TokenStream & tokens, const Signature * sig) -> FormulaPtr
    {
        FormulaReader reader(tokens, sig);
        return finish(reader.formula(), sig);
    }

    auto parse_term(TokenStream & tokens, const Signature * sig) -> Term
    {
        FormulaReader reader(tokens, sig);
        auto t = reader.term();
        if (sig)
            return resolve_constants(make_equality(t, t), *sig)->terms[0];
        return t;
    }

    auto parse_sentence_entry(TokenStream & tokens, SentenceClass declared, const Signature * sig) -> Sentence
    {
        auto f = parse_general_formula(tokens, sig);
        switch (declared) {
        case SentenceClass::Positive:
            require_positive(f, "positive sentence");
            require_closed(f, {}, "positive sentence");
            return Sentence::positive(f);
        case SentenceClass::HUniversal:
            if (f->kind != FormulaKind::Not)
                shape_error(f, "h-universal sentence must have the form ! <positive>");
            require_positive(f->children[0], "h-universal sentence");
            require_closed(f, {}, "h-universal sentence");
            return Sentence::h_universal(f->children[0]);
        case SentenceClass::HInductive: {
            vector<string> vars;
            FormulaPtr body = f;
            while (body->kind == FormulaKind::Forall) {
                vars.insert(vars.end(), body->variables.begin(), body->variables.end());
                body = body->children[0];
            }
            Implication imp;
            imp.variables = vars;
            if (body->kind == FormulaKind::Implies) {
                require_positive(body->children[0], "premise of h-inductive sentence");
                require_positive(body->children[1], "conclusion of h-inductive sentence");
                imp.premise = body->children[0];
                imp.conclusion = body->children[1];
            }
            else {
                require_positive(body, "h-inductive sentence");
                imp.premise = make_true();
                imp.conclusion = body;
            }
            require_closed(imp.premise, vars, "h-inductive sentence");
            require_closed(imp.conclusion, vars, "h-inductive sentence");
            return Sentence::h_inductive({imp});
        }
        case SentenceClass::Outside: break;
        }
        throw ParseError("unsupported sentence class", tokens.peek().where);
    }

    auto parse_formula(string_view text, const Signature * sig) -> ParsedFormula
    {
        TokenStream tokens(tokenize(text));
        string keyword = "formula";
        if (tokens.peek().kind == Token::Kind::Identifier && tokens.is(":", 1)) {
            keyword = tokens.next().text;
            tokens.next();
        }

        ParsedFormula result;
        auto expect_end = [&] {
            if (! tokens.at_end())
                tokens.fail("unexpected trailing input");
        };

        if (keyword == "term") {
            result.kind = ParsedKind::Term;
            result.term = parse_term(tokens, sig);
            expect_end();
            term_variables(*result.term, result.free_variables);
            return result;
        }
        if (keyword == "positive") {
            result.formula = parse_general_formula(tokens, sig);
            expect_end();
            require_positive(result.formula, "positive formula");
            result.kind = is_quantifier_free(result.formula) ? ParsedKind::PositiveQF : ParsedKind::Positive;
            result.free_variables = free_variables(result.formula);
            if (result.free_variables.empty())
                result.sentence = Sentence::positive(result.formula);
            return result;
        }
        if (keyword == "huniversal") {
            result.sentence = parse_sentence_entry(tokens, SentenceClass::HUniversal, sig);
            expect_end();
            result.kind = ParsedKind::HUniversal;
            result.formula = result.sentence->as_formula();
            return result;
        }
        if (keyword == "hinductive") {
            vector<Implication> conjuncts;
            do {
                auto s = parse_sentence_entry(tokens, SentenceClass::HInductive, sig);
                conjuncts.push_back(s.conjuncts.front());
            } while (tokens.accept(";") && ! tokens.at_end());
            expect_end();
            result.kind = ParsedKind::HInductive;
            result.sentence = Sentence::h_inductive(std::move(conjuncts));
            result.formula = result.sentence->as_formula();
            return result;
        }
        if (keyword == "formula") {
            result.formula = parse_general_formula(tokens, sig);
            expect_end();
            result.kind = ParsedKind::General;
            result.free_variables = free_variables(result.formula);
            return result;
        }
        throw ParseError("unknown formula class '" + keyword + "'", SourceLocation{1, 1});
    }
}

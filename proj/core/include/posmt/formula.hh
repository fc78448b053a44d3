#pragma once

#include <posmt/error.hh>
#include <posmt/signature.hh>

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace posmt
{
    struct Span
    {
        SourceLocation begin;
        SourceLocation end;
    };

    struct Term
    {
        enum class Kind
        {
            Variable,
            Constant,
            Application
        };

        Kind kind = Kind::Variable;
        std::string name;
        std::vector<Term> args;

        static auto variable(std::string name) -> Term;
        static auto constant(std::string name) -> Term;
        static auto application(std::string function, std::vector<Term> args) -> Term;

        auto operator==(const Term &) const -> bool = default;
    };

    enum class FormulaKind
    {
        True,
        False,
        Relation,
        Equality,
        And,
        Or,
        Not,
        Implies,
        Exists,
        Forall
    };

    struct Formula;
    using FormulaPtr = std::shared_ptr<const Formula>;

    struct Formula
    {
        FormulaKind kind = FormulaKind::True;
        std::string symbol;                  // relation symbol
        std::vector<Term> terms;             // relation arguments, or the two sides of an equality
        std::vector<FormulaPtr> children;    // n-ary for And/Or, one for Not and quantifiers, two for Implies
        std::vector<std::string> variables;  // quantified variables
        Span span;
    };

    auto make_true() -> FormulaPtr;
    auto make_false() -> FormulaPtr;
    auto make_relation(std::string symbol, std::vector<Term> args) -> FormulaPtr;
    auto make_equality(Term lhs, Term rhs) -> FormulaPtr;
    auto make_and(std::vector<FormulaPtr> children) -> FormulaPtr;
    auto make_or(std::vector<FormulaPtr> children) -> FormulaPtr;
    auto make_not(FormulaPtr child) -> FormulaPtr;
    auto make_implies(FormulaPtr premise, FormulaPtr conclusion) -> FormulaPtr;
    auto make_exists(std::vector<std::string> variables, FormulaPtr body) -> FormulaPtr;
    auto make_forall(std::vector<std::string> variables, FormulaPtr body) -> FormulaPtr;
    auto with_span(FormulaPtr f, Span span) -> FormulaPtr;

    /// Structural equality, ignoring source spans.
    auto same_formula(const FormulaPtr & a, const FormulaPtr & b) -> bool;

    auto free_variables(const FormulaPtr & f) -> std::set<std::string>;
    auto term_variables(const Term & t, std::set<std::string> & out) -> void;

    /// Negation-free, implication-free, and without universal quantifiers.
    auto is_positive(const FormulaPtr & f) -> bool;
    auto is_quantifier_free(const FormulaPtr & f) -> bool;

    /// First subformula that breaks positivity, for error reporting.
    auto first_non_positive(const FormulaPtr & f) -> FormulaPtr;

    auto to_string(const Term & t) -> std::string;
    auto to_string(const FormulaPtr & f) -> std::string;

    /// Rewrite bare variables that name constants of the signature into constants,
    /// unless they are bound by a quantifier.
    auto resolve_constants(const FormulaPtr & f, const Signature & sig) -> FormulaPtr;

    /// Throws SemanticError on unknown symbols or arity mismatches.
    auto check_symbols(const FormulaPtr & f, const Signature & sig) -> void;
    auto check_symbols(const Term & t, const Signature & sig) -> void;

    enum class SentenceClass
    {
        Positive,
        HUniversal,
        HInductive,
        Outside
    };

    auto to_string(SentenceClass c) -> std::string;

    struct Implication
    {
        std::vector<std::string> variables;
        FormulaPtr premise;
        FormulaPtr conclusion;
    };

    /// A closed h-inductive sentence, tagged with the class it was written in.
    /// Positive sentences are stored as the single implication true -> p, and
    /// h-universal sentences !p as p -> false.
    struct Sentence
    {
        SentenceClass origin = SentenceClass::HInductive;
        std::vector<Implication> conjuncts;

        static auto positive(FormulaPtr p) -> Sentence;
        static auto h_universal(FormulaPtr negated) -> Sentence;
        static auto h_inductive(std::vector<Implication> conjuncts) -> Sentence;

        /// The sentence as a single first-order formula.
        auto as_formula() const -> FormulaPtr;
    };

    /// Text in the input syntax, starting with the class keyword.
    auto to_string(const Sentence & s) -> std::string;

    /// Most specific class of a closed formula of the general grammar.
    auto classify_sentence(const FormulaPtr & f) -> SentenceClass;

    /// Converts a closed formula that classifies as positive, h-universal or
    /// h-inductive into its sentence form; nullopt for anything outside.
    auto as_sentence(const FormulaPtr & f) -> std::optional<Sentence>;
}

#pragma once

#include <posmt/formula.hh>
#include <posmt/lexer.hh>

#include <optional>
#include <string_view>

namespace posmt
{
    enum class ParsedKind
    {
        Term,
        PositiveQF,
        Positive,
        HInductive,
        HUniversal,
        General
    };

    struct ParsedFormula
    {
        ParsedKind kind = ParsedKind::General;
        std::optional<Term> term;
        FormulaPtr formula;
        std::optional<Sentence> sentence;
        std::set<std::string> free_variables;
    };

    /// Parses one item of the formula language. The text may start with a class
    /// keyword (term:, positive:, hinductive:, huniversal:, formula:); without one
    /// it is read as a general first-order formula. The declared class is checked
    /// and a violation is reported as a ParseError at the offending subformula.
    /// When a signature is given, bare names of its constants become constants.
    auto parse_formula(std::string_view text, const Signature * sig = nullptr) -> ParsedFormula;

    /// Parses one sentence body (after its keyword) from a token stream, stopping
    /// before ';' or '}'. Used for theory blocks, where each entry is one conjunct.
    auto parse_sentence_entry(TokenStream & tokens, SentenceClass declared, const Signature * sig) -> Sentence;

    /// Formula of the general grammar; stops at ';', '}' or end of input.
    auto parse_general_formula(TokenStream & tokens, const Signature * sig) -> FormulaPtr;
    auto parse_term(TokenStream & tokens, const Signature * sig) -> Term;

    auto is_variable_name(std::string_view name) -> bool;
}

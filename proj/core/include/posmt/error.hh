#pragma once

#include <stdexcept>
#include <string>

namespace posmt
{
    struct SourceLocation
    {
        int line = 0;
        int column = 0;
    };

    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Malformed input text. Carries the position of the offending token.
    class ParseError : public Error
    {
    public:
        ParseError(const std::string & message, SourceLocation where);
        /// Same error, located in a named source.
        ParseError(const ParseError & inner, const std::string & source);

        auto where() const -> SourceLocation { return _where; }
        auto message() const -> const std::string & { return _message; }
        auto source() const -> const std::string & { return _source; }

    private:
        SourceLocation _where;
        std::string _message;
        std::string _source;
    };

    /// Well-formed input that refers to unknown names, violates arities, breaks a
    /// structure invariant, or the like.
    class SemanticError : public Error
    {
    public:
        using Error::Error;
    };

    class UnboundVariable : public SemanticError
    {
    public:
        using SemanticError::SemanticError;
    };

    class SignatureMismatch : public SemanticError
    {
    public:
        using SemanticError::SemanticError;
    };

    class PreconditionError : public SemanticError
    {
    public:
        using SemanticError::SemanticError;
    };

    /// A search exceeded its node cap, or an enumeration exceeded its size cap.
    class BudgetExhausted : public Error
    {
    public:
        using Error::Error;
    };
}

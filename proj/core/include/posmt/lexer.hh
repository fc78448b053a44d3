#pragma once

#include <posmt/error.hh>

#include <string>
#include <string_view>
#include <vector>

namespace posmt
{
    struct Token
    {
        enum class Kind
        {
            Identifier,
            Punctuation,
            End
        };

        Kind kind = Kind::End;
        std::string text;
        SourceLocation where;
    };

    /// Identifiers are runs of [A-Za-z0-9_]; punctuation is one of ( ) { } [ ] , ; : . = & | ! / and ->.
    /// '#' starts a comment that runs to the end of the line.
    auto tokenize(std::string_view text) -> std::vector<Token>;

    class TokenStream
    {
    public:
        explicit TokenStream(std::vector<Token> tokens);

        auto peek(std::size_t ahead = 0) const -> const Token &;
        auto next() -> const Token &;
        auto at_end() const -> bool { return peek().kind == Token::Kind::End; }

        auto is(std::string_view punctuation, std::size_t ahead = 0) const -> bool;
        auto accept(std::string_view punctuation) -> bool;
        auto expect(std::string_view punctuation) -> const Token &;
        auto expect_identifier(std::string_view what) -> const Token &;
        auto accept_keyword(std::string_view word) -> bool;

        [[noreturn]] auto fail(const std::string & message) const -> void;
        [[noreturn]] auto fail_at(const Token & token, const std::string & message) const -> void;

    private:
        std::vector<Token> _tokens;
        std::size_t _position = 0;
    };
}

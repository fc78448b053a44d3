#include <posmt/lexer.hh>

#include <cctype>

using std::string;
using std::string_view;

namespace posmt
{
    ParseError::ParseError(const string & message, SourceLocation where) :
        Error(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " + message),
        _where(where),
        _message(message)
    {
    }

    ParseError::ParseError(const ParseError & inner, const string & source) :
        Error(source + ":" + inner.what()),
        _where(inner._where),
        _message(inner._message),
        _source(source)
    {
    }

    auto tokenize(string_view text) -> std::vector<Token>
    {
        std::vector<Token> result;
        int line = 1, column = 1;
        std::size_t i = 0;
        auto advance = [&](std::size_t count) {
            for (std::size_t k = 0; k < count; ++k, ++i) {
                if (text[i] == '\n') {
                    ++line;
                    column = 1;
                }
                else
                    ++column;
            }
        };
        auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };

        while (i < text.size()) {
            char c = text[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
                continue;
            }
            if (c == '#') {
                while (i < text.size() && text[i] != '\n')
                    advance(1);
                continue;
            }
            SourceLocation where{line, column};
            if (is_ident(c)) {
                std::size_t j = i;
                while (j < text.size() && is_ident(text[j]))
                    ++j;
                result.push_back(Token{Token::Kind::Identifier, string(text.substr(i, j - i)), where});
                advance(j - i);
                continue;
            }
            if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
                result.push_back(Token{Token::Kind::Punctuation, "->", where});
                advance(2);
                continue;
            }
            if (string_view("(){}[],;:.=&|!/").find(c) != string_view::npos) {
                result.push_back(Token{Token::Kind::Punctuation, string(1, c), where});
                advance(1);
                continue;
            }
            throw ParseError("unexpected character '" + string(1, c) + "'", where);
        }
        result.push_back(Token{Token::Kind::End, "", SourceLocation{line, column}});
        return result;
    }

    TokenStream::TokenStream(std::vector<Token> tokens) :
        _tokens(std::move(tokens))
    {
        if (_tokens.empty() || _tokens.back().kind != Token::Kind::End)
            _tokens.push_back(Token{Token::Kind::End, "", {}});
    }

    auto TokenStream::peek(std::size_t ahead) const -> const Token &
    {
        auto index = std::min(_position + ahead, _tokens.size() - 1);
        return _tokens[index];
    }

    auto TokenStream::next() -> const Token &
    {
        auto & t = _tokens[_position];
        if (_position + 1 < _tokens.size())
            ++_position;
        return t;
    }

    auto TokenStream::is(string_view punctuation, std::size_t ahead) const -> bool
    {
        auto & t = peek(ahead);
        return t.kind == Token::Kind::Punctuation && t.text == punctuation;
    }

    auto TokenStream::accept(string_view punctuation) -> bool
    {
        if (! is(punctuation))
            return false;
        next();
        return true;
    }

    auto TokenStream::expect(string_view punctuation) -> const Token &
    {
        if (! is(punctuation))
            fail("expected '" + string(punctuation) + "'");
        return next();
    }

    auto TokenStream::expect_identifier(string_view what) -> const Token &
    {
        if (peek().kind != Token::Kind::Identifier)
            fail("expected " + string(what));
        return next();
    }

    auto TokenStream::accept_keyword(string_view word) -> bool
    {
        if (peek().kind == Token::Kind::Identifier && peek().text == word) {
            next();
            return true;
        }
        return false;
    }

    auto TokenStream::fail(const string & message) const -> void
    {
        fail_at(peek(), message);
    }

    auto TokenStream::fail_at(const Token & token, const string & message) const -> void
    {
        string found = token.kind == Token::Kind::End ? "end of input" : "'" + token.text + "'";
        throw ParseError(message + ", found " + found, token.where);
    }
}

#pragma once

// Shared recursive-descent plumbing for the DDL, query, and SQL parsers.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pgqlite/error.hpp"
#include "pgqlite/lexer.hpp"

namespace pgqlite {

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    bool at_end() const { return peek().kind == TokenKind::End; }

    Token next() {
        Token tok = peek();
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return tok;
    }

    bool accept(TokenKind kind, Token* out = nullptr) {
        if (peek().kind != kind) return false;
        Token tok = next();
        if (out) *out = std::move(tok);
        return true;
    }

    bool accept_keyword(const char* upper) {
        if (!peek().is_keyword(upper)) return false;
        next();
        return true;
    }

    Token expect(TokenKind kind, const std::string& what) {
        if (peek().kind != kind) fail(what);
        return next();
    }

    void expect_keyword(const char* upper) {
        if (!peek().is_keyword(upper)) fail(std::string(upper));
        next();
    }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& tok = peek();
        const std::string got =
            tok.kind == TokenKind::End ? "end of input" : "'" + tok.text + "'";
        throw SyntaxError(tok.line, tok.column, "expected " + expected + ", got " + got);
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace pgqlite

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pgqlite {

enum class TokenKind {
    Ident,        // bare identifier or keyword (text preserves original case)
    Integer,
    Float,
    String,       // single-quoted literal, text holds the unescaped payload
    QuotedIdent,  // double-quoted identifier/label
    LParen,
    RParen,
    Comma,
    Semicolon,
    Colon,
    Dot,
    Star,
    Equal,        // =
    NotEqual,     // <> or != (lexeme preserved in text)
    Less,
    LessEqual,
    Greater,
    GreaterEqual,
    Plus,
    Minus,
    EdgeOpen,     // -[
    EdgeOpenBack, // <-[
    EdgeCloseFwd, // ]->
    EdgeClosePlain, // ]-
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;       // original lexeme payload
    std::size_t offset = 0; // byte offset into the source
    std::size_t line = 1;
    std::size_t column = 1;

    /// Case-insensitive keyword check against an UPPERCASE candidate.
    bool is_keyword(const char* upper) const;
};

/// Tokenizes DDL, pattern-query, and SQL text with one token set. ASCII-art
/// edge arrows are multi-character tokens; a Kleene star after a closing
/// arrow lexes as a separate Star token. `--` starts a line comment.
std::vector<Token> tokenize(const std::string& text);

} // namespace pgqlite

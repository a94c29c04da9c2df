#include "pgqlite/lexer.hpp"

#include <cctype>

#include "pgqlite/error.hpp"

namespace pgqlite {

bool Token::is_keyword(const char* upper) const {
    if (kind != TokenKind::Ident) return false;
    const char* p = upper;
    for (char c : text) {
        if (*p == '\0') return false;
        if (std::toupper(static_cast<unsigned char>(c)) != *p) return false;
        ++p;
    }
    return *p == '\0';
}

namespace {

class Cursor {
public:
    explicit Cursor(const std::string& text) : text_(text) {}

    bool done() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    char advance() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    std::size_t pos() const { return pos_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    Cursor cur(text);

    auto push = [&](TokenKind kind, std::string lexeme, std::size_t offset, std::size_t line,
                    std::size_t column) {
        out.push_back({kind, std::move(lexeme), offset, line, column});
    };

    while (!cur.done()) {
        const std::size_t offset = cur.pos();
        const std::size_t line = cur.line();
        const std::size_t column = cur.column();
        const char c = cur.peek();

        if (std::isspace(static_cast<unsigned char>(c))) {
            cur.advance();
            continue;
        }
        if (ident_start(c)) {
            std::string lexeme;
            while (!cur.done() && ident_char(cur.peek())) lexeme.push_back(cur.advance());
            push(TokenKind::Ident, std::move(lexeme), offset, line, column);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string lexeme;
            bool is_float = false;
            while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek())))
                lexeme.push_back(cur.advance());
            if (cur.peek() == '.' && std::isdigit(static_cast<unsigned char>(cur.peek(1)))) {
                is_float = true;
                lexeme.push_back(cur.advance());
                while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek())))
                    lexeme.push_back(cur.advance());
            }
            push(is_float ? TokenKind::Float : TokenKind::Integer, std::move(lexeme), offset, line,
                 column);
            continue;
        }
        if (c == '\'' || c == '"') {
            const char quote = c;
            cur.advance();
            std::string payload;
            bool closed = false;
            while (!cur.done()) {
                const char d = cur.advance();
                if (d == quote) {
                    if (cur.peek() == quote) {
                        payload.push_back(quote);
                        cur.advance();
                    } else {
                        closed = true;
                        break;
                    }
                } else {
                    payload.push_back(d);
                }
            }
            if (!closed) throw LexError(offset, "unterminated string");
            push(quote == '\'' ? TokenKind::String : TokenKind::QuotedIdent, std::move(payload),
                 offset, line, column);
            continue;
        }

        switch (c) {
            case '(': cur.advance(); push(TokenKind::LParen, "(", offset, line, column); continue;
            case ')': cur.advance(); push(TokenKind::RParen, ")", offset, line, column); continue;
            case ',': cur.advance(); push(TokenKind::Comma, ",", offset, line, column); continue;
            case ';': cur.advance(); push(TokenKind::Semicolon, ";", offset, line, column); continue;
            case ':': cur.advance(); push(TokenKind::Colon, ":", offset, line, column); continue;
            case '.': cur.advance(); push(TokenKind::Dot, ".", offset, line, column); continue;
            case '*': cur.advance(); push(TokenKind::Star, "*", offset, line, column); continue;
            case '+': cur.advance(); push(TokenKind::Plus, "+", offset, line, column); continue;
            case '=': cur.advance(); push(TokenKind::Equal, "=", offset, line, column); continue;
            case '!':
                cur.advance();
                if (cur.peek() == '=') {
                    cur.advance();
                    push(TokenKind::NotEqual, "!=", offset, line, column);
                    continue;
                }
                throw LexError(offset, "unexpected character '!'");
            case '<':
                cur.advance();
                if (cur.peek() == '-' && cur.peek(1) == '[') {
                    cur.advance();
                    cur.advance();
                    push(TokenKind::EdgeOpenBack, "<-[", offset, line, column);
                } else if (cur.peek() == '=') {
                    cur.advance();
                    push(TokenKind::LessEqual, "<=", offset, line, column);
                } else if (cur.peek() == '>') {
                    cur.advance();
                    push(TokenKind::NotEqual, "<>", offset, line, column);
                } else {
                    push(TokenKind::Less, "<", offset, line, column);
                }
                continue;
            case '>':
                cur.advance();
                if (cur.peek() == '=') {
                    cur.advance();
                    push(TokenKind::GreaterEqual, ">=", offset, line, column);
                } else {
                    push(TokenKind::Greater, ">", offset, line, column);
                }
                continue;
            case '-':
                cur.advance();
                if (cur.peek() == '[') {
                    cur.advance();
                    push(TokenKind::EdgeOpen, "-[", offset, line, column);
                } else if (cur.peek() == '-') {
                    while (!cur.done() && cur.peek() != '\n') cur.advance();
                } else {
                    push(TokenKind::Minus, "-", offset, line, column);
                }
                continue;
            case ']':
                cur.advance();
                if (cur.peek() == '-' && cur.peek(1) == '>') {
                    cur.advance();
                    cur.advance();
                    push(TokenKind::EdgeCloseFwd, "]->", offset, line, column);
                } else if (cur.peek() == '-') {
                    cur.advance();
                    push(TokenKind::EdgeClosePlain, "]-", offset, line, column);
                } else {
                    throw LexError(offset, "']' outside an edge pattern");
                }
                continue;
            default:
                throw LexError(offset, std::string("illegal character '") + c + "'");
        }
    }

    Token end;
    end.kind = TokenKind::End;
    end.offset = cur.pos();
    end.line = cur.line();
    end.column = cur.column();
    out.push_back(end);
    return out;
}

} // namespace pgqlite

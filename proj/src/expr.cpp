#include "pgqlite/expr.hpp"

#include <cstdint>

#include "expr_parser.hpp"
#include "pgqlite/lexer.hpp"

namespace pgqlite {

namespace {

// -------- parsing ---------------------------------------------------------

ExprRef parse_or(TokenStream& ts, bool unq);

Value parse_literal_value(TokenStream& ts) {
    Token tok;
    if (ts.accept(TokenKind::Integer, &tok)) return Value(std::int64_t(std::stoll(tok.text)));
    if (ts.accept(TokenKind::Float, &tok)) return Value(std::stod(tok.text));
    if (ts.accept(TokenKind::String, &tok)) return Value(tok.text);
    if (ts.accept(TokenKind::Minus)) {
        if (ts.accept(TokenKind::Integer, &tok)) return Value(-std::int64_t(std::stoll(tok.text)));
        if (ts.accept(TokenKind::Float, &tok)) return Value(-std::stod(tok.text));
        ts.fail("numeric literal after '-'");
    }
    ts.fail("literal");
}

ExprRef parse_primary(TokenStream& ts, bool unq) {
    if (ts.accept(TokenKind::LParen)) {
        ExprRef inner = parse_or(ts, unq);
        ts.expect(TokenKind::RParen, "')'");
        return inner;
    }
    if (ts.peek().is_keyword("TRUE")) {
        ts.next();
        return make_literal(Value(true));
    }
    if (ts.peek().is_keyword("FALSE")) {
        ts.next();
        return make_literal(Value(false));
    }
    if (ts.peek().is_keyword("NULL")) {
        ts.next();
        return make_literal(Value::null());
    }
    if (ts.peek().kind == TokenKind::Ident) {
        Token var = ts.next();
        if (ts.accept(TokenKind::Dot)) {
            Token key = ts.expect(TokenKind::Ident, "property name");
            return make_prop_ref(var.text, key.text);
        }
        if (unq) return make_prop_ref("", var.text);
        throw SyntaxError(var.line, var.column,
                          "expected property reference 'variable.key', got bare '" + var.text +
                              "'");
    }
    return make_literal(parse_literal_value(ts));
}

ExprRef parse_additive(TokenStream& ts, bool unq) {
    ExprRef lhs = parse_primary(ts, unq);
    while (ts.accept(TokenKind::Plus)) lhs = make_binary(BinOp::Add, lhs, parse_primary(ts, unq));
    return lhs;
}

ExprRef parse_comparison(TokenStream& ts, bool unq) {
    ExprRef lhs = parse_additive(ts, unq);
    BinOp op;
    std::string spelling = "<>";
    switch (ts.peek().kind) {
        case TokenKind::Equal: op = BinOp::Eq; break;
        case TokenKind::NotEqual: op = BinOp::Ne; spelling = ts.peek().text; break;
        case TokenKind::Less: op = BinOp::Lt; break;
        case TokenKind::LessEqual: op = BinOp::Le; break;
        case TokenKind::Greater: op = BinOp::Gt; break;
        case TokenKind::GreaterEqual: op = BinOp::Ge; break;
        default: return lhs; // bare operand (boolean-valued)
    }
    ts.next();
    ExprRef rhs = parse_additive(ts, unq);
    return make_binary(op, std::move(lhs), std::move(rhs), std::move(spelling));
}

ExprRef parse_not(TokenStream& ts, bool unq) {
    if (ts.accept_keyword("NOT")) return make_not(parse_not(ts, unq));
    return parse_comparison(ts, unq);
}

ExprRef parse_and(TokenStream& ts, bool unq) {
    ExprRef lhs = parse_not(ts, unq);
    while (ts.accept_keyword("AND")) lhs = make_binary(BinOp::And, lhs, parse_not(ts, unq));
    return lhs;
}

ExprRef parse_or(TokenStream& ts, bool unq) {
    ExprRef lhs = parse_and(ts, unq);
    while (ts.accept_keyword("OR")) lhs = make_binary(BinOp::Or, lhs, parse_and(ts, unq));
    return lhs;
}

// -------- printing ---------------------------------------------------------

int precedence(const Expr& e) {
    if (const auto* bin = std::get_if<Expr::Binary>(&e.node)) {
        if (bin->op == BinOp::Or) return 1;
        if (bin->op == BinOp::And) return 2;
        if (bin->op == BinOp::Add) return 4;
        return 3; // comparisons
    }
    if (std::holds_alternative<Expr::Unary>(e.node)) return 3;
    return 5; // leaves
}

std::string print_literal(const Value& v) {
    switch (v.kind()) {
        case ValueKind::Null: return "NULL";
        case ValueKind::Bool: return v.as_bool() ? "TRUE" : "FALSE";
        case ValueKind::Int: return v.to_string();
        case ValueKind::Float: {
            std::string text = v.to_string();
            // keep the token a Float on reparse
            if (text.find('.') == std::string::npos && text.find('e') == std::string::npos &&
                text.find("inf") == std::string::npos && text.find("nan") == std::string::npos)
                text += ".0";
            return text;
        }
        case ValueKind::Text: {
            std::string out = "'";
            for (char c : v.as_text()) {
                out.push_back(c);
                if (c == '\'') out.push_back('\'');
            }
            return out + "'";
        }
    }
    return "";
}

const char* op_symbol(BinOp op) {
    switch (op) {
        case BinOp::Eq: return "=";
        case BinOp::Ne: return "<>";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::And: return "AND";
        case BinOp::Or: return "OR";
        case BinOp::Add: return "+";
    }
    return "?";
}

std::string print_child(const Expr& child, int parent_prec, bool is_right) {
    const int child_prec = precedence(child);
    const bool parens = child_prec < parent_prec || (is_right && child_prec == parent_prec);
    const std::string inner = print_expr(child);
    return parens ? "(" + inner + ")" : inner;
}

} // namespace

ExprRef parse_expr(TokenStream& ts, bool allow_unqualified) {
    return parse_or(ts, allow_unqualified);
}

ExprRef parse_expr_text(const std::string& text) {
    TokenStream ts(tokenize(text));
    ExprRef expr = parse_or(ts, /*unq=*/false);
    if (!ts.at_end()) ts.fail("end of expression");
    return expr;
}

bool truthy(const Value& v) {
    if (v.is_null()) return false;
    if (v.kind() != ValueKind::Bool) throw TypeError("predicate is not boolean");
    return v.as_bool();
}

Value eval_expr(const Expr& expr,
                const std::function<Value(const Expr::PropRef&)>& resolve) {
    if (const auto* ref = std::get_if<Expr::PropRef>(&expr.node)) return resolve(*ref);
    if (const auto* lit = std::get_if<Expr::Literal>(&expr.node)) return lit->value;
    if (const auto* un = std::get_if<Expr::Unary>(&expr.node)) {
        const Value v = eval_expr(*un->operand, resolve);
        if (v.is_null()) return Value::null();
        if (v.kind() != ValueKind::Bool) throw TypeError("NOT over a non-boolean value");
        return Value(!v.as_bool());
    }
    const auto& bin = std::get<Expr::Binary>(expr.node);
    switch (bin.op) {
        case BinOp::And:
            return Value(truthy(eval_expr(*bin.lhs, resolve)) &&
                         truthy(eval_expr(*bin.rhs, resolve)));
        case BinOp::Or:
            return Value(truthy(eval_expr(*bin.lhs, resolve)) ||
                         truthy(eval_expr(*bin.rhs, resolve)));
        case BinOp::Add: {
            const Value l = eval_expr(*bin.lhs, resolve);
            const Value r = eval_expr(*bin.rhs, resolve);
            if (l.is_null() || r.is_null()) return Value::null();
            if (l.kind() == ValueKind::Int && r.kind() == ValueKind::Int)
                return Value(l.as_int() + r.as_int());
            return Value(l.as_numeric() + r.as_numeric());
        }
        default: {
            const Value l = eval_expr(*bin.lhs, resolve);
            const Value r = eval_expr(*bin.rhs, resolve);
            const auto c = l.compare(r);
            if (!c) return Value::null();
            switch (bin.op) {
                case BinOp::Eq: return Value(*c == 0);
                case BinOp::Ne: return Value(*c != 0);
                case BinOp::Lt: return Value(*c < 0);
                case BinOp::Le: return Value(*c <= 0);
                case BinOp::Gt: return Value(*c > 0);
                default: return Value(*c >= 0);
            }
        }
    }
}

std::string print_expr(const Expr& expr) {
    if (const auto* ref = std::get_if<Expr::PropRef>(&expr.node))
        return ref->variable.empty() ? ref->key : ref->variable + "." + ref->key;
    if (const auto* lit = std::get_if<Expr::Literal>(&expr.node))
        return print_literal(lit->value);
    if (const auto* un = std::get_if<Expr::Unary>(&expr.node))
        return "NOT " + print_child(*un->operand, precedence(expr), true);
    const auto& bin = std::get<Expr::Binary>(expr.node);
    const int prec = precedence(expr);
    const char* symbol = bin.op == BinOp::Ne ? bin.ne_spelling.c_str() : op_symbol(bin.op);
    return print_child(*bin.lhs, prec, false) + " " + symbol + " " +
           print_child(*bin.rhs, prec, true);
}

} // namespace pgqlite

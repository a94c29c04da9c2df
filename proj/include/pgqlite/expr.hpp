#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>

#include "pgqlite/value.hpp"

namespace pgqlite {

struct Expr;
using ExprRef = std::shared_ptr<const Expr>;

enum class BinOp { Eq, Ne, Lt, Le, Gt, Ge, And, Or, Add };
enum class UnOp { Not };

/// Boolean/comparison expression shared by the MATCH WHERE clause and the
/// SQL interpreter. Immutable; shared_ptr makes ASTs cheap to copy.
struct Expr {
    struct PropRef {
        std::string variable; // pattern variable or SQL table alias
        std::string key;      // property / column name
    };
    struct Literal {
        Value value;
    };
    struct Binary {
        BinOp op;
        ExprRef lhs;
        ExprRef rhs;
        // Ne is spelled both "<>" and "!=" in the wild; keep the original so
        // printing round-trips.
        std::string ne_spelling;
    };
    struct Unary {
        UnOp op;
        ExprRef operand;
    };

    std::variant<PropRef, Literal, Binary, Unary> node;
};

inline ExprRef make_prop_ref(std::string variable, std::string key) {
    return std::make_shared<Expr>(Expr{Expr::PropRef{std::move(variable), std::move(key)}});
}
inline ExprRef make_literal(Value v) {
    return std::make_shared<Expr>(Expr{Expr::Literal{std::move(v)}});
}
inline ExprRef make_binary(BinOp op, ExprRef lhs, ExprRef rhs, std::string ne_spelling = "<>") {
    return std::make_shared<Expr>(
        Expr{Expr::Binary{op, std::move(lhs), std::move(rhs), std::move(ne_spelling)}});
}
inline ExprRef make_not(ExprRef operand) {
    return std::make_shared<Expr>(Expr{Expr::Unary{UnOp::Not, std::move(operand)}});
}

/// Conjunction helper: a AND b, treating null refs as absent conjuncts.
inline ExprRef conjoin(ExprRef a, ExprRef b) {
    if (!a) return b;
    if (!b) return a;
    return make_binary(BinOp::And, std::move(a), std::move(b));
}

/// Renders an expression with minimal parentheses (AND/OR precedence).
std::string print_expr(const Expr& expr);

/// Two-valued filter view of a predicate result: Null (unknown) folds to
/// false; non-boolean values raise TypeError.
bool truthy(const Value& v);

/// Evaluates an expression with `resolve` supplying PropRef values. The one
/// semantics shared by the pattern executor and the SQL interpreter:
/// comparisons and NOT are three-valued (Null propagates), AND/OR collapse
/// unknown operands through truthy() and short-circuit left to right, Add
/// stays Int for Int operands and otherwise promotes numerically.
Value eval_expr(const Expr& expr,
                const std::function<Value(const Expr::PropRef&)>& resolve);

/// Parses a standalone filter expression (property references must be
/// qualified `variable.key`). Rejects trailing input.
ExprRef parse_expr_text(const std::string& text);

} // namespace pgqlite

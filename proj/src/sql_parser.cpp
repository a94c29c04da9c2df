#include "pgqlite/sql.hpp"

#include "expr_parser.hpp"
#include "pgqlite/lexer.hpp"
#include "token_stream.hpp"

namespace pgqlite {

namespace {

bool is_reserved(const Token& tok) {
    return tok.is_keyword("JOIN") || tok.is_keyword("ON") || tok.is_keyword("WHERE") ||
           tok.is_keyword("UNION") || tok.is_keyword("SELECT") || tok.is_keyword("FROM") ||
           tok.is_keyword("AS") || tok.is_keyword("WITH");
}

std::string name_token(TokenStream& ts, const char* what) {
    Token tok;
    if (ts.accept(TokenKind::Ident, &tok) || ts.accept(TokenKind::QuotedIdent, &tok))
        return tok.text;
    ts.fail(what);
}

SqlTableRef parse_table_ref(TokenStream& ts) {
    SqlTableRef ref;
    ref.table = name_token(ts, "table name");
    ref.alias = ref.table;
    if (ts.accept_keyword("AS")) {
        ref.alias = name_token(ts, "alias");
    } else if ((ts.peek().kind == TokenKind::Ident && !is_reserved(ts.peek())) ||
               ts.peek().kind == TokenKind::QuotedIdent) {
        ref.alias = name_token(ts, "alias");
    }
    return ref;
}

SqlSelect parse_select(TokenStream& ts) {
    SqlSelect sel;
    ts.expect_keyword("SELECT");
    sel.distinct = ts.accept_keyword("DISTINCT");
    do {
        SqlSelectItem item;
        item.expr = parse_expr(ts, /*allow_unqualified=*/true);
        if (ts.accept_keyword("AS")) item.alias = name_token(ts, "column alias");
        sel.items.push_back(std::move(item));
    } while (ts.accept(TokenKind::Comma));

    ts.expect_keyword("FROM");
    sel.from.push_back(parse_table_ref(ts));
    while (ts.accept_keyword("JOIN")) {
        SqlTableRef ref = parse_table_ref(ts);
        ts.expect_keyword("ON");
        ref.on = parse_expr(ts, /*allow_unqualified=*/true);
        sel.from.push_back(std::move(ref));
    }
    if (ts.accept_keyword("WHERE")) sel.where = parse_expr(ts, /*allow_unqualified=*/true);
    return sel;
}

SqlCompound parse_compound(TokenStream& ts) {
    SqlCompound out;
    out.branches.push_back(parse_select(ts));
    while (ts.accept_keyword("UNION")) {
        out.union_all.push_back(ts.accept_keyword("ALL"));
        out.branches.push_back(parse_select(ts));
    }
    return out;
}

SqlCte parse_cte(TokenStream& ts) {
    SqlCte cte;
    cte.name = name_token(ts, "CTE name");
    if (ts.accept(TokenKind::LParen)) {
        do {
            cte.columns.push_back(name_token(ts, "CTE column"));
        } while (ts.accept(TokenKind::Comma));
        ts.expect(TokenKind::RParen, "')'");
    }
    ts.expect_keyword("AS");
    ts.expect(TokenKind::LParen, "'('");
    cte.body = parse_compound(ts);
    ts.expect(TokenKind::RParen, "')'");
    return cte;
}

} // namespace

SqlQuery parse_sql(const std::string& text) {
    TokenStream ts(tokenize(text));
    SqlQuery query;
    if (ts.accept_keyword("WITH")) {
        query.recursive = ts.accept_keyword("RECURSIVE");
        do {
            query.ctes.push_back(parse_cte(ts));
        } while (ts.accept(TokenKind::Comma));
    }
    query.body = parse_compound(ts);
    ts.accept(TokenKind::Semicolon);
    if (!ts.at_end()) ts.fail("end of statement");
    return query;
}

} // namespace pgqlite

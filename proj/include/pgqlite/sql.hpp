#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgqlite/exec.hpp"
#include "pgqlite/expr.hpp"
#include "pgqlite/relstore.hpp"

namespace pgqlite {

// SQL subset interpreter covering exactly what the transpiler emits (plus a
// little slack): WITH [RECURSIVE] CTEs with optional column lists,
// SELECT [DISTINCT] items with optional AS aliases, FROM with inner
// JOIN ... ON chains, WHERE, and UNION [ALL] compounds. Identifier lookup is
// case-insensitive; `--` comments are handled by the lexer.

/// One FROM entry. The first entry of a SELECT has no `on`; every subsequent
/// entry is an inner join whose condition may reference all earlier aliases.
struct SqlTableRef {
    std::string table;
    std::string alias; // defaults to the table name
    ExprRef on;        // null on the first entry
};

struct SqlSelectItem {
    ExprRef expr;
    std::optional<std::string> alias; // AS name; quoted aliases keep their text
};

struct SqlSelect {
    bool distinct = false;
    std::vector<SqlSelectItem> items;
    std::vector<SqlTableRef> from;
    ExprRef where; // null = absent
};

/// One or more SELECTs joined by UNION / UNION ALL. Branch arities must
/// match; column names come from the first branch.
struct SqlCompound {
    std::vector<SqlSelect> branches;
    std::vector<bool> union_all; // size branches-1; false = deduplicating UNION
};

struct SqlCte {
    std::string name;
    std::vector<std::string> columns; // declared list; empty = take body names
    SqlCompound body;
};

struct SqlQuery {
    bool recursive = false; // WITH RECURSIVE was written
    std::vector<SqlCte> ctes;
    SqlCompound body;
};

/// Parses the subset; throws LexError/SyntaxError on malformed input.
SqlQuery parse_sql(const std::string& text);

/// Executes against the database. CTEs shadow base tables; a CTE whose body
/// references its own name runs semi-naive (the self reference sees the rows
/// added in the previous round), with plain UNION deduplicating the result
/// the way the emitted depth-guarded closure queries rely on. Unqualified
/// columns resolve against all aliases in scope and must be unambiguous.
/// Throws SqlError for semantic problems (ambiguity, arity mismatches,
/// non-converging recursion), UnknownTableError/UnknownColumnError for bad
/// names, and TypeError from expression evaluation.
ResultTable run_sql(const SqlQuery& query, const Database& db);

/// Convenience: parse + run.
ResultTable run_sql_text(const std::string& text, const Database& db);

} // namespace pgqlite

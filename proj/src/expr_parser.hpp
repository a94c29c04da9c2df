#pragma once

// Internal: recursive-descent expression grammar shared by the MATCH WHERE
// clause and the SQL interpreter (OR < AND < NOT < comparison < primary).

#include "pgqlite/expr.hpp"
#include "token_stream.hpp"

namespace pgqlite {

/// `allow_unqualified`: accept a bare identifier as a column reference with an
/// empty qualifier (SQL mode). Pattern queries require `variable.key`.
ExprRef parse_expr(TokenStream& ts, bool allow_unqualified);

} // namespace pgqlite

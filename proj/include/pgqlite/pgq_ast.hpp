#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgqlite/expr.hpp"

namespace pgqlite {

struct NodePattern {
    std::optional<std::string> variable;
    std::optional<std::string> label;
    bool label_quoted = false;
};

enum class EdgeDirection { Forward, Backward, Undirected };
enum class EdgeQuantifier { ExactlyOne, KleeneStar };

struct EdgePattern {
    std::optional<std::string> variable;
    std::optional<std::string> label;
    bool label_quoted = false;
    EdgeDirection direction = EdgeDirection::Forward;
    EdgeQuantifier quantifier = EdgeQuantifier::ExactlyOne;
};

enum class PathMode { WalkAll, AnyShortest };

/// One comma-separated MATCH element: nodes.size() == edges.size() + 1, the
/// i-th edge connecting nodes i and i+1.
struct PathPattern {
    std::optional<std::string> path_variable; // MATCH p = ...
    PathMode mode = PathMode::WalkAll;
    std::vector<NodePattern> nodes;
    std::vector<EdgePattern> edges;
};

/// RETURN entry: `x.key` or a bare variable (resolved to the node's primary
/// key properties at lowering).
struct ReturnItem {
    std::string variable;
    std::optional<std::string> key;
};

struct QueryAst {
    std::string graph_name;
    std::vector<PathPattern> patterns;
    ExprRef where;                        // null when absent
    bool return_all = false;              // bare RETURN;
    bool distinct = false;                // RETURN DISTINCT (...)
    std::vector<ReturnItem> return_items; // empty iff return_all
};

enum class Boundedness { Bounded, Unbounded };

/// Parses `SELECT * FROM GRAPH_TABLE(graph MATCH ... [WHERE ...] RETURN ...)`.
/// Rejects references to variables no pattern binds (UnboundVariable) and
/// property references through Kleene-star edge variables (UnsupportedPattern:
/// starred segments have no per-step bindings).
QueryAst parse_query(const std::string& text);

/// Unbounded iff any edge pattern carries a Kleene star.
Boundedness classify(const QueryAst& ast);

/// Canonical rendering; parse_query(print_query(q)) is structurally identical
/// (round-trip up to whitespace).
std::string print_query(const QueryAst& ast);

} // namespace pgqlite

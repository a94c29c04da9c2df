#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "pgqlite/ddl.hpp"
#include "pgqlite/graph.hpp"
#include "pgqlite/pgq_ast.hpp"
#include "pgqlite/plan.hpp"

namespace pgqlite {

/// Lowers a validated query to a backend-neutral plan. Bounded patterns
/// become ScanEdges + hash joins (left-deep, declaration order); each
/// Kleene-star edge becomes exactly one TraverseClosure with min_hops=1;
/// WHERE conjuncts are placed at the earliest point where their variables
/// are bound (before closures when possible). Throws UnknownLabelError for
/// labels absent from the graph definition and UnsupportedPatternError for
/// constructs outside the subset (unlabeled edges, star over an undirected
/// edge, ...).
LogicalPlan lower(const QueryAst& ast, const PropertyGraphDef& def);

struct GraphStats {
    std::size_t node_count = 0;
    std::map<std::string, std::size_t> edges_per_label;
};

GraphStats collect_stats(const MaterializedGraph& g);

/// Deterministic rule: any closure operator -> graph traversal backend,
/// pure join plans -> relational backend; `forced` overrides either way.
BackendChoice choose_backend(const LogicalPlan& plan, const GraphStats& stats,
                             std::optional<Backend> forced = std::nullopt);

struct TranspileOptions {
    std::size_t depth_limit = 2000; // recursion guard in emitted CTEs
};

/// Source-to-source translation to SQL over the underlying tables. Bounded
/// queries become join SQL (undirected edges via a <label>_pairs CTE);
/// every starred edge adds a WITH RECURSIVE paths CTE carrying a depth
/// column guarded by the depth limit. The emitted text stays inside the
/// subset the bundled SQL interpreter executes.
std::string transpile_to_sql(const QueryAst& ast, const PropertyGraphDef& def,
                             const TranspileOptions& opts = {});

} // namespace pgqlite

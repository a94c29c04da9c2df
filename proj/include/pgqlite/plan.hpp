#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pgqlite/expr.hpp"
#include "pgqlite/pgq_ast.hpp"

namespace pgqlite {

struct PlanOp;
using PlanRef = std::shared_ptr<const PlanOp>;

enum class ClosureMode { AnyShortest, Reach };

/// Emits one row (src, edge, tgt) per edge with the given label. Backward
/// swaps the roles of src_col/tgt_col; undirected emits both orientations
/// (self-loops once). src_col == tgt_col restricts to self-loops and emits
/// the column once.
struct ScanEdgesOp {
    std::string label;
    EdgeDirection direction = EdgeDirection::Forward;
    std::string src_col;
    std::string edge_col;
    std::string tgt_col;
};

/// Emits one row per node carrying the given label; empty label = all nodes.
struct ScanNodesOp {
    std::string label;
    std::string col;
};

struct FilterOp {
    PlanRef input;
    ExprRef predicate;
};

/// Filter specialization for label membership of a node-id column (labels
/// are not part of the expression language).
struct LabelFilterOp {
    PlanRef input;
    std::string col;
    std::string label;
};

/// Inner equi-join; key pairs name (left column, right column). Right key
/// columns spelled identically to their left partner are dropped from the
/// output (natural-join convention); empty keys = cross product.
struct HashJoinOp {
    PlanRef left;
    PlanRef right;
    std::vector<std::pair<std::string, std::string>> keys;
};

/// Output column selection. Lowering expands key-less items to the node's
/// key property columns, so every executed item carries a key; the output
/// column is named "var.key".
struct ProjectOp {
    struct Item {
        std::string variable;
        std::optional<std::string> key;
    };
    PlanRef input;
    std::vector<Item> items;
};

struct DistinctOp {
    PlanRef input;
};

/// One-or-more-hop traversal over the edges of one label. If target_col is
/// already bound in the input, keeps rows whose target is reachable from the
/// source in >= min_hops hops (closing a cycle when both name the same
/// binding); otherwise extends each row with every reachable target.
struct TraverseClosureOp {
    PlanRef input;
    std::string source_col;
    std::string edge_label;
    std::string target_col;
    ClosureMode mode = ClosureMode::Reach;
    std::size_t min_hops = 1;
};

/// Depth-limited transitive closure in relational form: the distinct
/// (start_col, current_col) pairs of the base (seed walks of depth 1) are
/// stepped through the label's edge relation up to depth_limit. With
/// cycle_only the output is the deduplicated start column of walks that
/// close back to their start via one more edge with total length
/// >= cycle_min_depth; otherwise the accumulated (start, current) pairs.
struct RecursiveFixpointOp {
    PlanRef base;
    std::string start_col;
    std::string current_col;
    std::string edge_label;
    std::size_t depth_limit = 2000;
    bool cycle_only = false;
    std::size_t cycle_min_depth = 2;
};

struct PlanOp {
    std::variant<ScanEdgesOp, ScanNodesOp, FilterOp, LabelFilterOp, HashJoinOp, ProjectOp,
                 DistinctOp, TraverseClosureOp, RecursiveFixpointOp>
        node;
};

template <typename Op>
PlanRef make_plan(Op op) {
    return std::make_shared<PlanOp>(PlanOp{std::move(op)});
}

enum class VarKind { Node, Edge };

struct LogicalPlan {
    PlanRef root;
    std::map<std::string, VarKind> vars; // binding column -> element kind
};

enum class Backend { Relational, Graph };

struct BackendChoice {
    Backend backend = Backend::Relational;
    std::string reason;
};

/// True iff the tree contains a TraverseClosure or RecursiveFixpoint.
bool plan_has_closure(const PlanRef& plan);

/// Stable indented rendering used by --explain and golden tests.
std::string print_plan(const LogicalPlan& plan);

} // namespace pgqlite

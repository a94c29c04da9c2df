#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pgqlite/graph.hpp"
#include "pgqlite/plan.hpp"
#include "pgqlite/value.hpp"

namespace pgqlite {

/// Row-major query result.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    std::optional<std::size_t> column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        return std::nullopt;
    }
};

struct ExecOptions {
    Backend backend = Backend::Relational;
    /// Depth cap for the relational closure operators (TraverseClosure on the
    /// relational backend, RecursiveFixpoint on both). The graph backend's BFS
    /// is exact and ignores it.
    std::size_t depth_limit = 2000;
};

/// Runs a lowered plan against a materialized graph. Binding columns hold
/// node/edge ids; Project turns them into property values.
ResultTable execute(const LogicalPlan& plan, const MaterializedGraph& g,
                    const ExecOptions& opts = {});

/// Inner equi-join kernel shared by both backends. `keys` pairs (left column,
/// right column); right key columns spelled identically to their left partner
/// are dropped from the output (natural-join convention), and empty keys give
/// the cross product. Null keys never match; Int and Float keys join when
/// numerically equal; keys of differing non-numeric kinds never match. The
/// hash table is built on the smaller input.
ResultTable hash_join(const ResultTable& left, const ResultTable& right,
                      const std::vector<std::pair<std::string, std::string>>& keys);

/// One node reached by bfs_reach: the node and its BFS distance from the
/// source set.
struct ReachHit {
    NodeId node;
    std::size_t dist;
};

/// Multi-source BFS over one CSR slice. Sources start at distance 0 and are
/// reported only when re-reached through an edge (dist >= 1); hits closer
/// than min_hops are dropped. Throws NodeOutOfRange for a source beyond the
/// CSR. Hits come in BFS discovery order (distance-monotone).
std::vector<ReachHit> bfs_reach(const Csr& csr, std::span<const NodeId> sources,
                                std::size_t min_hops = 1);

/// A concrete path witness; nodes.size() == edges.size() + 1.
struct PathBinding {
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;
    std::size_t hops = 0;
};

/// Shortest source -> target walk of length >= 1 (source == target asks for
/// the shortest cycle through it). `forward` and `backward` are the two
/// directions of the same label's CSR. Deterministic: among equally short
/// walks returns the lexicographically least (node, edge) step sequence.
/// nullopt when no such walk exists.
std::optional<PathBinding> any_shortest(const Csr& forward, const Csr& backward, NodeId source,
                                        NodeId target);

} // namespace pgqlite

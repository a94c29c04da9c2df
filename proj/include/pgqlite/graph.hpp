#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pgqlite/ddl.hpp"
#include "pgqlite/relstore.hpp"
#include "pgqlite/value.hpp"

namespace pgqlite {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class Direction { Forward, Backward };

/// Adjacency of one (edge label, direction) in compressed sparse row form.
/// The edges of node v live in edge_targets[vertex_offsets[v] ..
/// vertex_offsets[v + 1]), sorted by (target node-id, edge-id).
struct Csr {
    std::vector<std::uint32_t> vertex_offsets; // length |N| + 1
    std::vector<std::pair<NodeId, EdgeId>> edge_targets;

    std::span<const std::pair<NodeId, EdgeId>> neighbors(NodeId v) const {
        return {edge_targets.data() + vertex_offsets[v],
                edge_targets.data() + vertex_offsets[v + 1]};
    }
};

struct NodeRecord {
    std::uint32_t label_idx;
    std::uint32_t table_idx; // into vertex-table catalog
    std::uint32_t row;
};

struct EdgeRecord {
    std::uint32_t label_idx;
    std::uint32_t table_idx; // into edge-table catalog
    NodeId src;
    NodeId tgt;
    std::uint32_t row;
};

/// Contiguous id range [first, first + count) of one label.
struct LabelRange {
    std::size_t first = 0;
    std::size_t count = 0;
};

/// The property graph realized as dense node/edge id arrays. Property values
/// stay in the owning Database (the graph stores (table, row) indirections),
/// so the Database must outlive the graph. Immutable once built; the CSR
/// cache is internally synchronized, everything else is safe to read
/// concurrently.
class MaterializedGraph {
public:
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<NodeRecord>& nodes() const { return nodes_; }
    const std::vector<EdgeRecord>& edges() const { return edges_; }

    NodeId edge_src(EdgeId e) const { return edges_[e].src; }
    NodeId edge_tgt(EdgeId e) const { return edges_[e].tgt; }

    const std::string& node_label(NodeId v) const;
    const std::string& edge_label(EdgeId e) const;

    /// Label lookup is case-insensitive (labels are declared unique that way).
    bool has_node_label(const std::string& label) const;
    bool has_edge_label(const std::string& label) const;
    LabelRange node_range(const std::string& label) const; // UnknownLabel
    LabelRange edge_range(const std::string& label) const; // UnknownLabel

    /// True when `key` is a declared property of the node's / edge's label.
    bool node_has_prop(NodeId v, const std::string& key) const;
    bool edge_has_prop(EdgeId e, const std::string& key) const;

    /// Property access; UnknownColumnError for undeclared keys.
    Value node_prop(NodeId v, const std::string& key) const;
    Value edge_prop(EdgeId e, const std::string& key) const;

    /// Lazily built, cached CSR slice. Concurrent callers get one canonical
    /// slice per (label, direction).
    const Csr& csr(const std::string& edge_label, Direction direction) const;

    const std::string& name() const { return name_; }
    const std::vector<std::string>& labels() const { return labels_; }

    // Indirection from a node/edge to its defining table; built by materialize.
    struct PropSlot {
        std::string key; // lowercased
        std::size_t column;
    };
    struct TableBinding {
        const Table* table = nullptr;
        std::vector<PropSlot> props;
    };

private:
    friend MaterializedGraph materialize(const Database& db, const PropertyGraphDef& def);

    const PropSlot* find_prop(const TableBinding& binding, const std::string& key) const;
    std::size_t label_index(const std::string& label, bool want_node) const;

    std::string name_;
    std::vector<NodeRecord> nodes_;
    std::vector<EdgeRecord> edges_;
    std::vector<std::string> labels_;            // declaration order, vertices first
    std::vector<LabelRange> label_ranges_;       // node- or edge-id range per label
    std::vector<bool> label_is_node_;
    std::map<std::string, std::size_t> label_by_name_; // keyed by lowercase
    std::vector<TableBinding> vertex_tables_;
    std::vector<TableBinding> edge_tables_;

    // Heap-allocated so the graph stays movable despite the mutex.
    struct CsrCache {
        std::mutex mutex;
        std::map<std::pair<std::string, Direction>, std::unique_ptr<Csr>> slices;
    };
    std::unique_ptr<CsrCache> csr_cache_ = std::make_unique<CsrCache>();
};

/// Realizes def against db. Node-ids are assigned densely in vertex-table
/// declaration order then row order; edge-ids likewise. Throws UnknownTable/
/// UnknownColumn/InvalidSchema on catalog mismatches and DanglingEdgeKey when
/// an endpoint row is absent.
MaterializedGraph materialize(const Database& db, const PropertyGraphDef& def);

/// Builds one CSR slice from scratch (pure; bit-identical across calls).
/// Prefer MaterializedGraph::csr() which caches.
Csr build_csr(const MaterializedGraph& g, const std::string& label, Direction direction);

} // namespace pgqlite

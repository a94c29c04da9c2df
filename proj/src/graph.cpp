#include "pgqlite/graph.hpp"

#include <algorithm>
#include <unordered_map>

#include "pgqlite/error.hpp"

namespace pgqlite {

namespace {

std::vector<std::size_t> resolve_columns(const Table& table,
                                         const std::vector<std::string>& names) {
    std::vector<std::size_t> out;
    out.reserve(names.size());
    for (const auto& name : names) {
        auto idx = table.schema().column_index(name);
        if (!idx) throw UnknownColumnError(table.schema().name + "." + name);
        out.push_back(*idx);
    }
    return out;
}

std::vector<MaterializedGraph::PropSlot> prop_slots(const Table& table,
                                                    const std::vector<std::string>& listed,
                                                    bool properties_listed) {
    std::vector<MaterializedGraph::PropSlot> slots;
    if (properties_listed) {
        for (const auto& name : listed) {
            auto idx = table.schema().column_index(name);
            if (!idx) throw UnknownColumnError(table.schema().name + "." + name);
            slots.push_back({to_lower(name), *idx});
        }
    } else {
        for (std::size_t i = 0; i < table.schema().columns.size(); ++i)
            slots.push_back({to_lower(table.schema().columns[i].name), i});
    }
    return slots;
}

// Lazily built lookup from a column tuple of a vertex table to its row.
class EndpointIndex {
public:
    explicit EndpointIndex(const Database& db) : db_(db) {}

    std::optional<std::size_t> find(const std::string& table_name,
                                    const std::vector<std::size_t>& cols, const KeyTuple& key) {
        std::string cache_key = to_lower(table_name);
        for (std::size_t c : cols) cache_key += ":" + std::to_string(c);
        auto [it, inserted] = maps_.try_emplace(std::move(cache_key));
        if (inserted) {
            const Table& table = db_.table(table_name);
            for (std::size_t row = 0; row < table.row_count(); ++row)
                it->second.emplace(table.key_for_row(row, cols), row); // first row wins
        }
        auto hit = it->second.find(key);
        if (hit == it->second.end()) return std::nullopt;
        return hit->second;
    }

private:
    const Database& db_;
    std::unordered_map<std::string, std::unordered_map<KeyTuple, std::size_t, KeyTupleHash>>
        maps_;
};

} // namespace

const MaterializedGraph::PropSlot* MaterializedGraph::find_prop(const TableBinding& binding,
                                                                const std::string& key) const {
    const std::string needle = to_lower(key);
    for (const auto& slot : binding.props)
        if (slot.key == needle) return &slot;
    return nullptr;
}

std::size_t MaterializedGraph::label_index(const std::string& label, bool want_node) const {
    auto it = label_by_name_.find(to_lower(label));
    if (it == label_by_name_.end() || label_is_node_[it->second] != want_node)
        throw UnknownLabelError(label);
    return it->second;
}

const std::string& MaterializedGraph::node_label(NodeId v) const {
    return labels_[nodes_[v].label_idx];
}

const std::string& MaterializedGraph::edge_label(EdgeId e) const {
    return labels_[edges_[e].label_idx];
}

bool MaterializedGraph::has_node_label(const std::string& label) const {
    auto it = label_by_name_.find(to_lower(label));
    return it != label_by_name_.end() && label_is_node_[it->second];
}

bool MaterializedGraph::has_edge_label(const std::string& label) const {
    auto it = label_by_name_.find(to_lower(label));
    return it != label_by_name_.end() && !label_is_node_[it->second];
}

LabelRange MaterializedGraph::node_range(const std::string& label) const {
    return label_ranges_[label_index(label, true)];
}

LabelRange MaterializedGraph::edge_range(const std::string& label) const {
    return label_ranges_[label_index(label, false)];
}

bool MaterializedGraph::node_has_prop(NodeId v, const std::string& key) const {
    return find_prop(vertex_tables_[nodes_[v].table_idx], key) != nullptr;
}

bool MaterializedGraph::edge_has_prop(EdgeId e, const std::string& key) const {
    return find_prop(edge_tables_[edges_[e].table_idx], key) != nullptr;
}

Value MaterializedGraph::node_prop(NodeId v, const std::string& key) const {
    const NodeRecord& rec = nodes_[v];
    const TableBinding& binding = vertex_tables_[rec.table_idx];
    const PropSlot* slot = find_prop(binding, key);
    if (!slot) throw UnknownColumnError(node_label(v) + "." + key);
    return binding.table->at(rec.row, slot->column);
}

Value MaterializedGraph::edge_prop(EdgeId e, const std::string& key) const {
    const EdgeRecord& rec = edges_[e];
    const TableBinding& binding = edge_tables_[rec.table_idx];
    const PropSlot* slot = find_prop(binding, key);
    if (!slot) throw UnknownColumnError(edge_label(e) + "." + key);
    return binding.table->at(rec.row, slot->column);
}

const Csr& MaterializedGraph::csr(const std::string& edge_label, Direction direction) const {
    const std::size_t idx = label_index(edge_label, false);
    const std::string canonical = to_lower(labels_[idx]);
    std::lock_guard<std::mutex> lock(csr_cache_->mutex);
    auto key = std::make_pair(canonical, direction);
    auto it = csr_cache_->slices.find(key);
    if (it == csr_cache_->slices.end()) {
        auto slice = std::make_unique<Csr>(build_csr(*this, edge_label, direction));
        it = csr_cache_->slices.emplace(std::move(key), std::move(slice)).first;
    }
    return *it->second;
}

MaterializedGraph materialize(const Database& db, const PropertyGraphDef& def) {
    MaterializedGraph g;
    g.name_ = def.name;

    auto declare_label = [&](const std::string& label, bool is_node) {
        const std::string key = to_lower(label);
        if (g.label_by_name_.count(key))
            throw InvalidSchemaError("duplicate label in graph definition: " + label);
        g.label_by_name_.emplace(key, g.labels_.size());
        g.labels_.push_back(label);
        g.label_ranges_.push_back({});
        g.label_is_node_.push_back(is_node);
    };

    // Vertex tables: validate, then hand out dense node ids table by table.
    std::unordered_map<std::string, std::uint32_t> vertex_table_idx; // lowercase name
    std::vector<std::size_t> vertex_base;
    for (const auto& v : def.vertex_tables) {
        if (!db.has_table(v.table)) throw UnknownTableError(v.table);
        const Table& table = db.table(v.table);
        if (!v.key_columns.empty()) resolve_columns(table, v.key_columns);

        declare_label(v.label, true);
        MaterializedGraph::TableBinding binding;
        binding.table = &table;
        binding.props = prop_slots(table, v.properties, v.properties_listed);

        const auto table_idx = static_cast<std::uint32_t>(g.vertex_tables_.size());
        vertex_table_idx.emplace(to_lower(v.table), table_idx);
        g.vertex_tables_.push_back(std::move(binding));

        LabelRange& range = g.label_ranges_.back();
        range.first = g.nodes_.size();
        range.count = table.row_count();
        vertex_base.push_back(g.nodes_.size());
        const auto label_idx = static_cast<std::uint32_t>(g.labels_.size() - 1);
        for (std::size_t row = 0; row < table.row_count(); ++row)
            g.nodes_.push_back({label_idx, table_idx, static_cast<std::uint32_t>(row)});
    }

    // Edge tables: resolve both endpoints of every row to node ids.
    EndpointIndex endpoints(db);
    for (const auto& e : def.edge_tables) {
        if (!db.has_table(e.table)) throw UnknownTableError(e.table);
        const Table& table = db.table(e.table);

        auto endpoint_of = [&](const EdgeEndpoint& ep, const char* side)
            -> std::tuple<std::uint32_t, std::vector<std::size_t>, std::vector<std::size_t>> {
            auto it = vertex_table_idx.find(to_lower(ep.ref_table));
            if (it == vertex_table_idx.end())
                throw InvalidSchemaError("edge table " + e.table + " " + side +
                                         " references undeclared vertex table " + ep.ref_table);
            const Table& ref = *g.vertex_tables_[it->second].table;
            return {it->second, resolve_columns(table, ep.key_columns),
                    resolve_columns(ref, ep.ref_columns)};
        };
        auto [src_table, src_cols, src_ref_cols] = endpoint_of(e.source, "source");
        auto [tgt_table, tgt_cols, tgt_ref_cols] = endpoint_of(e.destination, "destination");

        declare_label(e.label, false);
        MaterializedGraph::TableBinding binding;
        binding.table = &table;
        binding.props = prop_slots(table, e.properties, e.properties_listed);
        const auto table_idx = static_cast<std::uint32_t>(g.edge_tables_.size());
        g.edge_tables_.push_back(std::move(binding));

        LabelRange& range = g.label_ranges_.back();
        range.first = g.edges_.size();
        range.count = table.row_count();
        const auto label_idx = static_cast<std::uint32_t>(g.labels_.size() - 1);

        for (std::size_t row = 0; row < table.row_count(); ++row) {
            auto lookup = [&](std::uint32_t ref_table_idx, const std::vector<std::size_t>& cols,
                              const std::vector<std::size_t>& ref_cols) -> NodeId {
                const KeyTuple key = table.key_for_row(row, cols);
                for (const auto& part : key.parts)
                    if (part.is_null())
                        throw DanglingEdgeKeyError(e.table, row + 1, key.to_string());
                const std::string& ref_name =
                    g.vertex_tables_[ref_table_idx].table->schema().name;
                auto hit = endpoints.find(ref_name, ref_cols, key);
                if (!hit) throw DanglingEdgeKeyError(e.table, row + 1, key.to_string());
                return static_cast<NodeId>(vertex_base[ref_table_idx] + *hit);
            };
            const NodeId src = lookup(src_table, src_cols, src_ref_cols);
            const NodeId tgt = lookup(tgt_table, tgt_cols, tgt_ref_cols);
            g.edges_.push_back(
                {label_idx, table_idx, src, tgt, static_cast<std::uint32_t>(row)});
        }
    }

    return g;
}

Csr build_csr(const MaterializedGraph& g, const std::string& label, Direction direction) {
    const LabelRange range = g.edge_range(label); // throws UnknownLabel
    const std::size_t n = g.node_count();

    Csr csr;
    csr.vertex_offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < range.count; ++i) {
        const EdgeRecord& e = g.edges()[range.first + i];
        const NodeId from = direction == Direction::Forward ? e.src : e.tgt;
        ++csr.vertex_offsets[from + 1];
    }
    for (std::size_t v = 0; v < n; ++v) csr.vertex_offsets[v + 1] += csr.vertex_offsets[v];

    csr.edge_targets.resize(range.count);
    std::vector<std::uint32_t> cursor(csr.vertex_offsets.begin(), csr.vertex_offsets.end() - 1);
    for (std::size_t i = 0; i < range.count; ++i) {
        const auto edge_id = static_cast<EdgeId>(range.first + i);
        const EdgeRecord& e = g.edges()[edge_id];
        const NodeId from = direction == Direction::Forward ? e.src : e.tgt;
        const NodeId to = direction == Direction::Forward ? e.tgt : e.src;
        csr.edge_targets[cursor[from]++] = {to, edge_id};
    }
    for (std::size_t v = 0; v < n; ++v)
        std::sort(csr.edge_targets.begin() + csr.vertex_offsets[v],
                  csr.edge_targets.begin() + csr.vertex_offsets[v + 1]);
    return csr;
}

} // namespace pgqlite

#pragma once

#include <string>
#include <vector>

#include "pgqlite/ddl.hpp"
#include "pgqlite/error.hpp"
#include "pgqlite/relstore.hpp"

namespace pgqlite {

/// Case-insensitive lookups over a PropertyGraphDef, shared by lowering and
/// transpilation.
class DefCatalog {
public:
    explicit DefCatalog(const PropertyGraphDef& def) : def_(def) {}

    const VertexTableDef* vertex_by_label(const std::string& label) const {
        for (const auto& v : def_.vertex_tables)
            if (to_lower(v.label) == to_lower(label)) return &v;
        return nullptr;
    }

    const EdgeTableDef* edge_by_label(const std::string& label) const {
        for (const auto& e : def_.edge_tables)
            if (to_lower(e.label) == to_lower(label)) return &e;
        return nullptr;
    }

    const VertexTableDef* vertex_by_table(const std::string& table) const {
        for (const auto& v : def_.vertex_tables)
            if (to_lower(v.table) == to_lower(table)) return &v;
        return nullptr;
    }

    /// Label of the vertex table an edge endpoint references ("" when the
    /// referenced table is not declared as a vertex table).
    std::string endpoint_label(const EdgeEndpoint& ep) const {
        const VertexTableDef* v = vertex_by_table(ep.ref_table);
        return v ? v->label : std::string();
    }

    /// Key property names for a vertex table: the declared KEY columns, or
    /// the referenced columns of the first edge endpoint pointing at it.
    std::vector<std::string> vertex_key_columns(const VertexTableDef& v) const {
        if (!v.key_columns.empty()) return v.key_columns;
        for (const auto& e : def_.edge_tables) {
            if (to_lower(e.source.ref_table) == to_lower(v.table)) return e.source.ref_columns;
            if (to_lower(e.destination.ref_table) == to_lower(v.table))
                return e.destination.ref_columns;
        }
        throw UnsupportedPatternError("no key columns known for vertex table " + v.table +
                                      " (declare KEY or reference it from an edge)");
    }

    const PropertyGraphDef& def() const { return def_; }

private:
    const PropertyGraphDef& def_;
};

} // namespace pgqlite

#pragma once

#include <string>
#include <vector>

namespace pgqlite {

/// One entry of a VERTEX TABLES clause.
struct VertexTableDef {
    std::string table;
    std::vector<std::string> key_columns;  // empty: fall back to the table's primary key
    std::vector<std::string> properties;   // meaningful only when properties_listed
    bool properties_listed = false;        // false: every column is a property
    std::string label;                     // defaults to the table name
    bool label_quoted = false;

    bool operator==(const VertexTableDef&) const = default;
};

/// One endpoint of an edge table (SOURCE or DESTINATION).
struct EdgeEndpoint {
    std::vector<std::string> key_columns;  // columns of the edge table
    std::string ref_table;                 // vertex table being referenced
    std::vector<std::string> ref_columns;  // columns of the vertex table

    bool operator==(const EdgeEndpoint&) const = default;
};

/// One entry of an EDGE TABLES clause.
struct EdgeTableDef {
    std::string table;
    EdgeEndpoint source;
    EdgeEndpoint destination;
    std::vector<std::string> properties;
    bool properties_listed = false;
    std::string label;
    bool label_quoted = false;

    bool operator==(const EdgeTableDef&) const = default;
};

/// Parsed CREATE PROPERTY GRAPH statement.
struct PropertyGraphDef {
    std::string name;
    std::vector<VertexTableDef> vertex_tables;
    std::vector<EdgeTableDef> edge_tables;

    bool operator==(const PropertyGraphDef&) const = default;
};

/// Parses a single CREATE PROPERTY GRAPH statement (trailing semicolon
/// optional). Throws SyntaxError on malformed input.
PropertyGraphDef parse_ddl(const std::string& text);

/// Renders a definition back to DDL text. parse_ddl(print_ddl(d)) == d.
std::string print_ddl(const PropertyGraphDef& def);

} // namespace pgqlite

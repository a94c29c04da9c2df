#include "pgqlite/ddl.hpp"

#include <sstream>

#include "pgqlite/error.hpp"
#include "pgqlite/lexer.hpp"
#include "token_stream.hpp"

namespace pgqlite {

namespace {

std::vector<std::string> parse_column_list(TokenStream& ts) {
    ts.expect(TokenKind::LParen, "'('");
    std::vector<std::string> columns;
    do {
        columns.push_back(ts.expect(TokenKind::Ident, "column name").text);
    } while (ts.accept(TokenKind::Comma));
    ts.expect(TokenKind::RParen, "')'");
    return columns;
}

// LABEL accepts a bare or a double-quoted identifier; the flag is kept so
// print_ddl reproduces the original spelling.
void parse_label(TokenStream& ts, std::string& label, bool& quoted) {
    Token tok;
    if (ts.accept(TokenKind::QuotedIdent, &tok)) {
        label = tok.text;
        quoted = true;
    } else if (ts.accept(TokenKind::Ident, &tok)) {
        label = tok.text;
        quoted = false;
    } else {
        ts.fail("label name");
    }
}

VertexTableDef parse_vertex_table(TokenStream& ts) {
    VertexTableDef def;
    def.table = ts.expect(TokenKind::Ident, "vertex table name").text;
    def.label = def.table;
    for (;;) {
        if (ts.accept_keyword("KEY")) {
            def.key_columns = parse_column_list(ts);
        } else if (ts.accept_keyword("PROPERTIES")) {
            def.properties = parse_column_list(ts);
            def.properties_listed = true;
        } else if (ts.accept_keyword("LABEL")) {
            parse_label(ts, def.label, def.label_quoted);
        } else {
            break;
        }
    }
    return def;
}

EdgeEndpoint parse_endpoint(TokenStream& ts) {
    EdgeEndpoint ep;
    ts.expect_keyword("KEY");
    ep.key_columns = parse_column_list(ts);
    ts.expect_keyword("REFERENCES");
    ep.ref_table = ts.expect(TokenKind::Ident, "vertex table name").text;
    ep.ref_columns = parse_column_list(ts);
    return ep;
}

EdgeTableDef parse_edge_table(TokenStream& ts) {
    EdgeTableDef def;
    def.table = ts.expect(TokenKind::Ident, "edge table name").text;
    def.label = def.table;
    ts.expect_keyword("SOURCE");
    def.source = parse_endpoint(ts);
    ts.expect_keyword("DESTINATION");
    def.destination = parse_endpoint(ts);
    for (;;) {
        if (ts.accept_keyword("PROPERTIES")) {
            def.properties = parse_column_list(ts);
            def.properties_listed = true;
        } else if (ts.accept_keyword("LABEL")) {
            parse_label(ts, def.label, def.label_quoted);
        } else {
            break;
        }
    }
    return def;
}

std::string quote_label(const std::string& label, bool quoted) {
    return quoted ? "\"" + label + "\"" : label;
}

std::string join_columns(const std::vector<std::string>& columns) {
    std::string out = "(";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ", ";
        out += columns[i];
    }
    out += ")";
    return out;
}

} // namespace

PropertyGraphDef parse_ddl(const std::string& text) {
    TokenStream ts(tokenize(text));
    PropertyGraphDef def;

    ts.expect_keyword("CREATE");
    ts.expect_keyword("PROPERTY");
    ts.expect_keyword("GRAPH");
    def.name = ts.expect(TokenKind::Ident, "graph name").text;

    ts.expect_keyword("VERTEX");
    ts.expect_keyword("TABLES");
    ts.expect(TokenKind::LParen, "'('");
    do {
        def.vertex_tables.push_back(parse_vertex_table(ts));
    } while (ts.accept(TokenKind::Comma));
    ts.expect(TokenKind::RParen, "')'");

    if (ts.peek().is_keyword("EDGE")) {
        ts.next();
        ts.expect_keyword("TABLES");
        ts.expect(TokenKind::LParen, "'('");
        do {
            def.edge_tables.push_back(parse_edge_table(ts));
        } while (ts.accept(TokenKind::Comma));
        ts.expect(TokenKind::RParen, "')'");
    }

    ts.accept(TokenKind::Semicolon);
    if (!ts.at_end()) ts.fail("end of statement");
    return def;
}

std::string print_ddl(const PropertyGraphDef& def) {
    std::ostringstream out;
    out << "CREATE PROPERTY GRAPH " << def.name << "\n";
    out << "    VERTEX TABLES (\n";
    for (std::size_t i = 0; i < def.vertex_tables.size(); ++i) {
        const VertexTableDef& v = def.vertex_tables[i];
        out << "        " << v.table;
        if (!v.key_columns.empty()) out << "\n          KEY " << join_columns(v.key_columns);
        if (v.properties_listed) out << "\n          PROPERTIES " << join_columns(v.properties);
        out << "\n          LABEL " << quote_label(v.label, v.label_quoted);
        out << (i + 1 < def.vertex_tables.size() ? ",\n" : "\n");
    }
    out << "    )";
    if (!def.edge_tables.empty()) {
        out << "\n    EDGE TABLES (\n";
        for (std::size_t i = 0; i < def.edge_tables.size(); ++i) {
            const EdgeTableDef& e = def.edge_tables[i];
            out << "        " << e.table;
            out << "\n          SOURCE KEY " << join_columns(e.source.key_columns)
                << " REFERENCES " << e.source.ref_table << " "
                << join_columns(e.source.ref_columns);
            out << "\n          DESTINATION KEY " << join_columns(e.destination.key_columns)
                << " REFERENCES " << e.destination.ref_table << " "
                << join_columns(e.destination.ref_columns);
            if (e.properties_listed)
                out << "\n          PROPERTIES " << join_columns(e.properties);
            out << "\n          LABEL " << quote_label(e.label, e.label_quoted);
            out << (i + 1 < def.edge_tables.size() ? ",\n" : "\n");
        }
        out << "    )";
    }
    out << ";\n";
    return out.str();
}

} // namespace pgqlite

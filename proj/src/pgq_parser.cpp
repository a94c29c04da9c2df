#include <algorithm>
#include <functional>
#include <sstream>

#include "expr_parser.hpp"
#include "pgqlite/error.hpp"
#include "pgqlite/lexer.hpp"
#include "pgqlite/pgq_ast.hpp"
#include "token_stream.hpp"

namespace pgqlite {

namespace {

void parse_label_spec(TokenStream& ts, std::optional<std::string>& label, bool& quoted) {
    if (!ts.accept(TokenKind::Colon)) return;
    Token tok;
    if (ts.accept(TokenKind::QuotedIdent, &tok)) {
        label = tok.text;
        quoted = true;
    } else if (ts.accept(TokenKind::Ident, &tok)) {
        label = tok.text;
        quoted = false;
    } else {
        ts.fail("label after ':'");
    }
}

NodePattern parse_node_pattern(TokenStream& ts) {
    NodePattern node;
    ts.expect(TokenKind::LParen, "'(' starting a node pattern");
    Token var;
    if (ts.accept(TokenKind::Ident, &var)) node.variable = var.text;
    parse_label_spec(ts, node.label, node.label_quoted);
    ts.expect(TokenKind::RParen, "')' closing a node pattern");
    return node;
}

EdgePattern parse_edge_pattern(TokenStream& ts) {
    EdgePattern edge;
    const bool backward = ts.peek().kind == TokenKind::EdgeOpenBack;
    ts.next(); // EdgeOpen or EdgeOpenBack
    Token var;
    if (ts.accept(TokenKind::Ident, &var)) edge.variable = var.text;
    parse_label_spec(ts, edge.label, edge.label_quoted);

    if (backward) {
        edge.direction = EdgeDirection::Backward;
        ts.expect(TokenKind::EdgeClosePlain, "']-' closing a backward edge");
    } else if (ts.accept(TokenKind::EdgeCloseFwd)) {
        edge.direction = EdgeDirection::Forward;
    } else if (ts.accept(TokenKind::EdgeClosePlain)) {
        edge.direction = EdgeDirection::Undirected;
    } else {
        ts.fail("']->' or ']-' closing an edge pattern");
    }
    if (ts.accept(TokenKind::Star)) edge.quantifier = EdgeQuantifier::KleeneStar;
    return edge;
}

PathPattern parse_path_pattern(TokenStream& ts) {
    PathPattern path;
    if (ts.peek().kind == TokenKind::Ident && !ts.peek().is_keyword("ANY") &&
        ts.peek(1).kind == TokenKind::Equal) {
        path.path_variable = ts.next().text;
        ts.next(); // '='
    }
    if (ts.peek().is_keyword("ANY")) {
        ts.next();
        ts.expect_keyword("SHORTEST");
        path.mode = PathMode::AnyShortest;
    }
    path.nodes.push_back(parse_node_pattern(ts));
    while (ts.peek().kind == TokenKind::EdgeOpen || ts.peek().kind == TokenKind::EdgeOpenBack) {
        path.edges.push_back(parse_edge_pattern(ts));
        path.nodes.push_back(parse_node_pattern(ts));
    }
    return path;
}

// Scope check: every WHERE/RETURN reference must resolve to a pattern
// variable, and star-edge variables expose no per-step bindings.
class Scope {
public:
    explicit Scope(const QueryAst& ast) {
        for (const auto& path : ast.patterns) {
            if (path.path_variable) path_vars_.push_back(*path.path_variable);
            for (const auto& node : path.nodes)
                if (node.variable) add(*node.variable, Kind::Node);
            for (const auto& edge : path.edges)
                if (edge.variable)
                    add(*edge.variable, edge.quantifier == EdgeQuantifier::KleeneStar
                                            ? Kind::StarEdge
                                            : Kind::Edge);
        }
        for (const auto& name : path_vars_)
            if (find(name))
                throw UnsupportedPatternError("variable " + name +
                                              " bound as both path and element");
    }

    void check_prop_ref(const std::string& variable) const {
        if (std::find(path_vars_.begin(), path_vars_.end(), variable) != path_vars_.end())
            throw UnsupportedPatternError("path variable reference: " + variable);
        const Binding* b = find(variable);
        if (!b) throw UnboundVariableError(variable);
        if (b->kind == Kind::StarEdge)
            throw UnsupportedPatternError(
                "property reference to Kleene-star edge variable " + variable +
                " (starred segments have no per-step bindings)");
    }

    void check_bare_return(const std::string& variable) const {
        const Binding* b = find(variable);
        if (!b) throw UnboundVariableError(variable);
        if (b->kind != Kind::Node)
            throw UnsupportedPatternError("bare edge variable in RETURN: " + variable);
    }

private:
    enum class Kind { Node, Edge, StarEdge };
    struct Binding {
        std::string name;
        Kind kind;
    };

    void add(const std::string& name, Kind kind) {
        if (Binding* existing = find(name)) {
            const bool was_node = existing->kind == Kind::Node;
            const bool is_node = kind == Kind::Node;
            if (was_node != is_node)
                throw UnsupportedPatternError("variable " + name +
                                              " bound as both node and edge");
            // a star anywhere poisons per-step access
            if (kind == Kind::StarEdge) existing->kind = Kind::StarEdge;
            return;
        }
        bindings_.push_back({name, kind});
    }

    Binding* find(const std::string& name) {
        for (auto& b : bindings_)
            if (b.name == name) return &b;
        return nullptr;
    }
    const Binding* find(const std::string& name) const {
        return const_cast<Scope*>(this)->find(name);
    }

    std::vector<Binding> bindings_;
    std::vector<std::string> path_vars_;
};

void walk_prop_refs(const ExprRef& expr, const std::function<void(const Expr::PropRef&)>& fn) {
    if (!expr) return;
    if (const auto* ref = std::get_if<Expr::PropRef>(&expr->node)) {
        fn(*ref);
    } else if (const auto* bin = std::get_if<Expr::Binary>(&expr->node)) {
        walk_prop_refs(bin->lhs, fn);
        walk_prop_refs(bin->rhs, fn);
    } else if (const auto* un = std::get_if<Expr::Unary>(&expr->node)) {
        walk_prop_refs(un->operand, fn);
    }
}

std::string print_label(const std::optional<std::string>& label, bool quoted) {
    if (!label) return "";
    return quoted ? ":\"" + *label + "\"" : ":" + *label;
}

std::string print_node(const NodePattern& node) {
    return "(" + (node.variable ? *node.variable : "") +
           print_label(node.label, node.label_quoted) + ")";
}

std::string print_edge(const EdgePattern& edge) {
    std::string body = (edge.variable ? *edge.variable : "") +
                       print_label(edge.label, edge.label_quoted);
    std::string out;
    switch (edge.direction) {
        case EdgeDirection::Forward: out = "-[" + body + "]->"; break;
        case EdgeDirection::Backward: out = "<-[" + body + "]-"; break;
        case EdgeDirection::Undirected: out = "-[" + body + "]-"; break;
    }
    if (edge.quantifier == EdgeQuantifier::KleeneStar) out += " *";
    return out;
}

} // namespace

QueryAst parse_query(const std::string& text) {
    TokenStream ts(tokenize(text));
    QueryAst ast;

    ts.expect_keyword("SELECT");
    ts.expect(TokenKind::Star, "'*'");
    ts.expect_keyword("FROM");
    ts.expect_keyword("GRAPH_TABLE");
    ts.expect(TokenKind::LParen, "'('");
    ast.graph_name = ts.expect(TokenKind::Ident, "graph name").text;
    ts.expect_keyword("MATCH");

    do {
        ast.patterns.push_back(parse_path_pattern(ts));
    } while (ts.accept(TokenKind::Comma));

    if (ts.accept_keyword("WHERE")) ast.where = parse_expr(ts, /*allow_unqualified=*/false);

    ts.expect_keyword("RETURN");
    if (ts.accept_keyword("DISTINCT")) ast.distinct = true;
    if (ts.peek().kind == TokenKind::Semicolon || ts.peek().kind == TokenKind::RParen) {
        ast.return_all = true;
    } else {
        const bool parenthesized = ts.accept(TokenKind::LParen);
        do {
            ReturnItem item;
            item.variable = ts.expect(TokenKind::Ident, "return item").text;
            if (ts.accept(TokenKind::Dot))
                item.key = ts.expect(TokenKind::Ident, "property name").text;
            ast.return_items.push_back(std::move(item));
        } while (ts.accept(TokenKind::Comma));
        if (parenthesized) ts.expect(TokenKind::RParen, "')' closing the RETURN list");
    }
    ts.accept(TokenKind::Semicolon);
    ts.expect(TokenKind::RParen, "')' closing GRAPH_TABLE");
    ts.accept(TokenKind::Semicolon);
    if (!ts.at_end()) ts.fail("end of query");

    // scope checks
    Scope scope(ast);
    walk_prop_refs(ast.where,
                   [&](const Expr::PropRef& ref) { scope.check_prop_ref(ref.variable); });
    for (const auto& item : ast.return_items) {
        if (item.key)
            scope.check_prop_ref(item.variable);
        else
            scope.check_bare_return(item.variable);
    }
    return ast;
}

Boundedness classify(const QueryAst& ast) {
    for (const auto& path : ast.patterns)
        for (const auto& edge : path.edges)
            if (edge.quantifier == EdgeQuantifier::KleeneStar) return Boundedness::Unbounded;
    return Boundedness::Bounded;
}

std::string print_query(const QueryAst& ast) {
    std::ostringstream out;
    out << "SELECT *\nFROM GRAPH_TABLE (\n  " << ast.graph_name << "\n  MATCH\n";
    for (std::size_t i = 0; i < ast.patterns.size(); ++i) {
        const PathPattern& path = ast.patterns[i];
        out << "    ";
        if (path.path_variable) out << *path.path_variable << " = ";
        if (path.mode == PathMode::AnyShortest) out << "ANY SHORTEST ";
        out << print_node(path.nodes[0]);
        for (std::size_t e = 0; e < path.edges.size(); ++e) {
            const std::string edge = print_edge(path.edges[e]);
            out << " " << edge << (edge.back() == '*' ? "" : " ")
                << print_node(path.nodes[e + 1]);
        }
        out << (i + 1 < ast.patterns.size() ? ",\n" : "\n");
    }
    if (ast.where) out << "  WHERE " << print_expr(*ast.where) << "\n";
    out << "  RETURN";
    if (ast.distinct) out << " DISTINCT";
    if (!ast.return_all) {
        out << " (";
        for (std::size_t i = 0; i < ast.return_items.size(); ++i) {
            if (i) out << ", ";
            out << ast.return_items[i].variable;
            if (ast.return_items[i].key) out << "." << *ast.return_items[i].key;
        }
        out << ")";
    }
    out << ";\n);\n";
    return out.str();
}

} // namespace pgqlite

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "def_catalog.hpp"
#include "pgqlite/error.hpp"
#include "pgqlite/planner.hpp"

namespace pgqlite {

namespace {

bool ci_equal(const std::string& a, const std::string& b) { return to_lower(a) == to_lower(b); }

bool ci_contains(const std::vector<std::string>& cols, const std::string& name) {
    return std::any_of(cols.begin(), cols.end(),
                       [&](const std::string& c) { return ci_equal(c, name); });
}

ExprRef rewrite_refs(const ExprRef& e,
                     const std::function<ExprRef(const Expr::PropRef&)>& fn) {
    if (const auto* ref = std::get_if<Expr::PropRef>(&e->node)) return fn(*ref);
    if (const auto* bin = std::get_if<Expr::Binary>(&e->node))
        return make_binary(bin->op, rewrite_refs(bin->lhs, fn), rewrite_refs(bin->rhs, fn),
                           bin->ne_spelling);
    if (const auto* un = std::get_if<Expr::Unary>(&e->node))
        return make_not(rewrite_refs(un->operand, fn));
    return e;
}

class Transpiler {
public:
    Transpiler(const QueryAst& ast, const PropertyGraphDef& def, const TranspileOptions& opts)
        : ast_(ast), cat_(def), opts_(opts) {}

    std::string run() {
        collect_claims();
        process_edges();
        process_isolated();
        process_stars();
        rewrite_where();
        return render();
    }

private:
    struct NodeBinding {
        std::string alias;   // FROM item whose columns carry the binding
        std::vector<std::pair<std::string, std::string>> key_map; // vertex col -> alias col
        std::string vertex_table;
        std::string vertex_alias; // direct vertex-table alias, made on demand
    };
    struct EdgeBinding {
        std::string alias;
        const EdgeTableDef* def = nullptr;
        bool undirected = false;
        std::vector<std::string> cte_cols; // columns the pairs CTE exposes
    };
    struct FromItem {
        std::string text;             // "Table AS alias"
        std::vector<std::string> on;  // join conditions; empty for the first item
    };
    struct Cte {
        std::string header; // name (col, ...)
        std::string body;
        bool recursive = false;
    };
    struct StarSeg {
        std::string src_var;
        std::string tgt_var;
        const EdgeTableDef* def;
    };

    // ---- setup -----------------------------------------------------------------

    void collect_claims() {
        std::size_t anon = 0;
        for (const PathPattern& path : ast_.patterns) {
            auto& nodes = node_vars_.emplace_back();
            auto& edges = edge_vars_.emplace_back();
            for (const NodePattern& n : path.nodes) {
                std::string var = n.variable ? *n.variable : "$n" + std::to_string(anon++);
                if (n.label) {
                    const VertexTableDef* vt = cat_.vertex_by_label(*n.label);
                    if (!vt) throw UnknownLabelError(*n.label);
                    claims_[var].insert(to_lower(vt->label));
                }
                if (n.variable &&
                    std::find(node_order_.begin(), node_order_.end(), var) == node_order_.end())
                    node_order_.push_back(var);
                if (std::find(all_vars_.begin(), all_vars_.end(), var) == all_vars_.end())
                    all_vars_.push_back(var);
                nodes.push_back(std::move(var));
            }
            for (const EdgePattern& e : path.edges)
                edges.push_back(e.variable ? *e.variable : "$e" + std::to_string(anon++));
        }
    }

    // ---- aliases ----------------------------------------------------------------

    std::string fresh_alias(const std::string& base) {
        std::string name = base;
        for (int n = 2; used_aliases_.count(to_lower(name)); ++n)
            name = base + "_" + std::to_string(n);
        used_aliases_.insert(to_lower(name));
        return name;
    }

    // ---- pattern walk ------------------------------------------------------------

    void process_edges() {
        for (std::size_t p = 0; p < ast_.patterns.size(); ++p) {
            const PathPattern& path = ast_.patterns[p];
            for (std::size_t i = 0; i < path.edges.size(); ++i) process_edge(path, p, i);
        }
    }

    void process_edge(const PathPattern& path, std::size_t p, std::size_t i) {
        const EdgePattern& e = path.edges[i];
        if (!e.label) throw UnsupportedPatternError("edge pattern without a label");
        const EdgeTableDef* et = cat_.edge_by_label(*e.label);
        if (!et) throw UnknownLabelError(*e.label);

        const std::string& edge_var = edge_vars_[p][i];
        const bool undirected = e.direction == EdgeDirection::Undirected;
        const bool backward = e.direction == EdgeDirection::Backward;

        if (e.quantifier == EdgeQuantifier::KleeneStar) {
            if (undirected)
                throw UnsupportedPatternError("Kleene star over an undirected edge");
            std::string left = node_vars_[p][i], right = node_vars_[p][i + 1];
            stars_.push_back({backward ? right : left, backward ? left : right, et});
            star_targets_.insert(stars_.back().tgt_var);
            return;
        }

        auto found = edge_bind_.find(edge_var);
        if (found != edge_bind_.end()) {
            // repeated edge variable: reuse the alias, equalities via endpoints
            if (found->second.def != et || found->second.undirected != undirected) {
                force_false_ = true;
                return;
            }
            bind_endpoints(path, p, i, found->second, nullptr);
            return;
        }

        EdgeBinding binding;
        binding.def = et;
        binding.undirected = undirected;
        binding.alias = fresh_alias(e.variable ? *e.variable : "e" + std::to_string(anon_seq_++));
        std::string table = et->table;
        if (undirected) {
            table = ensure_pairs_cte(*et, binding.cte_cols);
        }
        FromItem item{table + " AS " + binding.alias, {}};
        from_.push_back(std::move(item));
        bind_endpoints(path, p, i, binding, &from_.back());
        edge_bind_.emplace(edge_var, std::move(binding));
    }

    /// Ties both endpoint variables of edge (p, i) to `binding`. New
    /// variables get bound; already-bound ones contribute equality
    /// conditions placed on `item` (or the global WHERE when null).
    void bind_endpoints(const PathPattern& path, std::size_t p, std::size_t i,
                        const EdgeBinding& binding, FromItem* item) {
        const bool backward = path.edges[i].direction == EdgeDirection::Backward;
        std::string left = node_vars_[p][i], right = node_vars_[p][i + 1];
        const std::string src_var = backward ? right : left;
        const std::string tgt_var = backward ? left : right;
        tie_endpoint(src_var, binding.alias, binding.def->source, item);
        tie_endpoint(tgt_var, binding.alias, binding.def->destination, item);
    }

    void tie_endpoint(const std::string& var, const std::string& alias,
                      const EdgeEndpoint& ep, FromItem* item) {
        auto found = node_bind_.find(var);
        if (found == node_bind_.end()) {
            NodeBinding b;
            b.alias = alias;
            for (std::size_t k = 0; k < ep.key_columns.size(); ++k)
                b.key_map.emplace_back(ep.ref_columns[k], ep.key_columns[k]);
            b.vertex_table = ep.ref_table;
            check_claims(var, ep.ref_table);
            node_bind_.emplace(var, std::move(b));
            return;
        }
        if (!ci_equal(found->second.vertex_table, ep.ref_table)) {
            force_false_ = true; // same variable bound to two different vertex tables
            return;
        }
        for (std::size_t k = 0; k < ep.key_columns.size(); ++k) {
            std::string cond = alias + "." + ep.key_columns[k] + " = " +
                               binding_sql(var, ep.ref_columns[k], /*enforce_props=*/false);
            if (item)
                item->on.push_back(std::move(cond));
            else
                where_conds_.push_back(std::move(cond));
        }
    }

    void check_claims(const std::string& var, const std::string& vertex_table) {
        auto it = claims_.find(var);
        if (it == claims_.end()) return;
        const VertexTableDef* vt = cat_.vertex_by_table(vertex_table);
        const std::string label = vt ? to_lower(vt->label) : std::string();
        for (const std::string& claim : it->second)
            if (claim != label) force_false_ = true;
    }

    void process_isolated() {
        for (const std::string& var : all_vars_) {
            if (node_bind_.count(var) || star_targets_.count(var)) continue;
            bool is_star_source = std::any_of(stars_.begin(), stars_.end(),
                                              [&](const StarSeg& s) { return s.src_var == var; });
            if (is_star_source) continue; // bound through the paths CTE
            auto it = claims_.find(var);
            if (it == claims_.end())
                throw UnsupportedPatternError("unlabeled isolated node variable " + var +
                                              " cannot be transpiled");
            const VertexTableDef* vt = cat_.vertex_by_label(*it->second.begin());
            NodeBinding b;
            b.alias = fresh_alias(var);
            b.vertex_table = vt->table;
            b.vertex_alias = b.alias; // direct table alias: every column resolves
            if (it->second.size() > 1) force_false_ = true;
            from_.push_back({vt->table + " AS " + b.alias, {}});
            node_bind_.emplace(var, std::move(b));
        }
    }

    // ---- star segments -----------------------------------------------------------

    void process_stars() {
        for (std::size_t k = 0; k < stars_.size(); ++k) {
            const StarSeg& seg = stars_[k];
            const EdgeTableDef* et = seg.def;
            if (et->source.key_columns.size() != 1 || et->destination.key_columns.size() != 1)
                throw UnsupportedPatternError("composite endpoint key in a starred segment");
            const std::string src_key = et->source.key_columns[0];
            const std::string dst_key = et->destination.key_columns[0];

            const std::string cte = k == 0 ? "paths" : "paths" + std::to_string(k + 1);
            std::ostringstream body;
            body << "SELECT " << src_key << ", " << dst_key << ", 1 FROM " << et->table
                 << "\n  UNION\n  "
                 << "SELECT p.a_start, t." << dst_key << ", p.depth + 1\n"
                 << "  FROM " << cte << " p JOIN " << et->table << " t ON p.a_current = t."
                 << src_key << "\n  -- Limit recursion depth\n  WHERE p.depth < "
                 << opts_.depth_limit;
            ctes_.push_back({cte + " (a_start, a_current, depth)", body.str(), true});

            const std::string alias = fresh_alias(k == 0 ? "p" : "p" + std::to_string(k + 1));
            FromItem item{cte + " AS " + alias, {}};

            auto tie = [&](const std::string& var, const std::string& ref_col,
                           const std::string& ref_table, const std::string& cte_col) {
                auto found = node_bind_.find(var);
                if (found == node_bind_.end()) {
                    NodeBinding b;
                    b.alias = alias;
                    b.key_map.emplace_back(ref_col, cte_col);
                    b.vertex_table = ref_table;
                    check_claims(var, ref_table);
                    node_bind_.emplace(var, std::move(b));
                } else if (!ci_equal(found->second.vertex_table, ref_table)) {
                    force_false_ = true;
                } else {
                    item.on.push_back(alias + "." + cte_col + " = " +
                                      binding_sql(var, ref_col, /*enforce_props=*/false));
                }
            };
            tie(seg.src_var, et->source.ref_columns[0], et->source.ref_table, "a_start");
            tie(seg.tgt_var, et->destination.ref_columns[0], et->destination.ref_table,
                "a_current");
            from_.push_back(std::move(item));
        }
    }

    std::string ensure_pairs_cte(const EdgeTableDef& et, std::vector<std::string>& cols_out) {
        const auto& src = et.source.key_columns;
        const auto& dst = et.destination.key_columns;
        if (src.size() != dst.size() || !ci_equal(et.source.ref_table, et.destination.ref_table))
            throw UnsupportedPatternError(
                "undirected edge over an asymmetric edge table (" + et.table + ")");
        std::vector<std::string> props;
        if (et.properties_listed)
            for (const std::string& prop : et.properties)
                if (!ci_contains(src, prop) && !ci_contains(dst, prop)) props.push_back(prop);

        cols_out = src;
        cols_out.insert(cols_out.end(), dst.begin(), dst.end());
        cols_out.insert(cols_out.end(), props.begin(), props.end());

        const std::string name = et.label + "_pairs";
        if (pairs_emitted_.insert(to_lower(name)).second) {
            std::ostringstream body;
            auto list = [&](bool swapped) {
                std::ostringstream s;
                for (std::size_t i = 0; i < src.size(); ++i)
                    s << (i ? ", " : "")
                      << (swapped ? dst[i] + " AS " + src[i] : src[i]);
                for (std::size_t i = 0; i < dst.size(); ++i)
                    s << ", " << (swapped ? src[i] + " AS " + dst[i] : dst[i]);
                for (const std::string& prop : props) s << ", " << prop;
                return s.str();
            };
            std::ostringstream guard; // skip self-loops in the swapped branch
            for (std::size_t i = 0; i < src.size(); ++i)
                guard << (i ? " AND " : "") << src[i] << " <> " << dst[i];
            body << "SELECT " << list(false) << " FROM " << et.table << "\n  UNION ALL\n  "
                 << "SELECT " << list(true) << " FROM " << et.table << " WHERE "
                 << guard.str();
            ctes_.push_back({name, body.str(), false});
        }
        return name;
    }

    // ---- reference rewriting -------------------------------------------------------

    /// SQL text for `var.col`, routing through the binding's key map or a
    /// dedicated vertex-table alias.
    std::string binding_sql(const std::string& var, const std::string& col, bool enforce_props) {
        auto found = node_bind_.find(var);
        if (found == node_bind_.end()) throw UnboundVariableError(var);
        NodeBinding& b = found->second;

        const VertexTableDef* vt = cat_.vertex_by_table(b.vertex_table);
        if (enforce_props && vt && vt->properties_listed && !ci_contains(vt->properties, col))
            throw UnknownColumnError(col);

        for (const auto& [vertex_col, alias_col] : b.key_map)
            if (ci_equal(vertex_col, col)) return b.alias + "." + alias_col;

        if (b.vertex_alias.empty()) {
            b.vertex_alias = fresh_alias(var);
            FromItem item{b.vertex_table + " AS " + b.vertex_alias, {}};
            for (const auto& [vertex_col, alias_col] : b.key_map)
                item.on.push_back(b.vertex_alias + "." + vertex_col + " = " + b.alias + "." +
                                  alias_col);
            from_.push_back(std::move(item));
        }
        return b.vertex_alias + "." + col;
    }

    std::string edge_prop_sql(const std::string& var, const std::string& key) {
        const EdgeBinding& b = edge_bind_.at(var);
        if (b.undirected && !ci_contains(b.cte_cols, key))
            throw UnsupportedPatternError(
                "property " + key + " of an undirected edge is not exposed (list it in "
                "PROPERTIES)");
        if (!b.undirected && b.def->properties_listed && !ci_contains(b.def->properties, key))
            throw UnknownColumnError(b.def->label + "." + key);
        return b.alias + "." + key;
    }

    std::string ref_sql(const Expr::PropRef& ref) {
        if (edge_bind_.count(ref.variable)) return edge_prop_sql(ref.variable, ref.key);
        return binding_sql(ref.variable, ref.key, /*enforce_props=*/true);
    }

    void rewrite_where() {
        if (!ast_.where) return;
        ExprRef rewritten = rewrite_refs(ast_.where, [&](const Expr::PropRef& ref) {
            const std::string sql = ref_sql(ref);
            const auto dot = sql.find('.');
            return make_prop_ref(sql.substr(0, dot), sql.substr(dot + 1));
        });
        std::string text = print_expr(*rewritten);
        if (const auto* bin = std::get_if<Expr::Binary>(&rewritten->node);
            bin && bin->op == BinOp::Or)
            text = "(" + text + ")";
        where_conds_.push_back(std::move(text));
    }

    // ---- output ----------------------------------------------------------------------

    std::vector<std::string> select_items() {
        std::vector<std::string> items;
        auto add_bare = [&](const std::string& var) {
            auto found = node_bind_.find(var);
            if (found == node_bind_.end()) throw UnboundVariableError(var);
            const VertexTableDef* vt = cat_.vertex_by_table(found->second.vertex_table);
            if (!vt)
                throw UnsupportedPatternError("no vertex table for variable " + var);
            for (const std::string& key : cat_.vertex_key_columns(*vt))
                items.push_back(binding_sql(var, key, /*enforce_props=*/false) + " AS \"" +
                                var + "." + key + "\"");
        };
        if (ast_.return_all) {
            for (const std::string& var : node_order_) add_bare(var);
            if (items.empty())
                throw UnsupportedPatternError("bare RETURN with no named node variables");
        } else {
            for (const ReturnItem& item : ast_.return_items) {
                if (item.key)
                    items.push_back(ref_sql({item.variable, *item.key}) + " AS \"" +
                                    item.variable + "." + *item.key + "\"");
                else
                    add_bare(item.variable);
            }
        }
        return items;
    }

    std::string render() {
        const std::vector<std::string> items = select_items(); // may add vertex joins
        if (force_false_) where_conds_.push_back("1 = 0");

        std::ostringstream out;
        if (!ctes_.empty()) {
            const bool recursive =
                std::any_of(ctes_.begin(), ctes_.end(), [](const Cte& c) { return c.recursive; });
            out << "WITH " << (recursive ? "RECURSIVE " : "");
            for (std::size_t i = 0; i < ctes_.size(); ++i)
                out << (i ? ",\n" : "") << ctes_[i].header << " AS (\n  " << ctes_[i].body
                    << " )";
            out << "\n";
        }
        out << "SELECT " << (ast_.distinct ? "DISTINCT " : "");
        for (std::size_t i = 0; i < items.size(); ++i) out << (i ? ", " : "") << items[i];
        out << "\nFROM " << from_[0].text;
        for (const std::string& cond : from_[0].on) where_conds_.push_back(cond);
        for (std::size_t i = 1; i < from_.size(); ++i) {
            out << "\nJOIN " << from_[i].text;
            if (!from_[i].on.empty()) {
                out << " ON ";
                for (std::size_t c = 0; c < from_[i].on.size(); ++c)
                    out << (c ? " AND " : "") << from_[i].on[c];
            } else {
                out << " ON 1 = 1"; // cross join spelled as a degenerate inner join
            }
        }
        if (!where_conds_.empty()) {
            out << "\nWHERE ";
            for (std::size_t c = 0; c < where_conds_.size(); ++c)
                out << (c ? " AND " : "") << where_conds_[c];
        }
        out << ";\n";
        return out.str();
    }

    const QueryAst& ast_;
    DefCatalog cat_;
    TranspileOptions opts_;

    std::vector<std::vector<std::string>> node_vars_;
    std::vector<std::vector<std::string>> edge_vars_;
    std::vector<std::string> node_order_; // named variables, first-appearance order
    std::vector<std::string> all_vars_;   // every variable, synthesized names included
    std::map<std::string, std::set<std::string>> claims_; // var -> lowercased labels

    std::map<std::string, NodeBinding> node_bind_;
    std::map<std::string, EdgeBinding> edge_bind_;
    std::set<std::string> used_aliases_;
    std::size_t anon_seq_ = 0;

    std::vector<FromItem> from_;
    std::vector<Cte> ctes_;
    std::set<std::string> pairs_emitted_;
    std::vector<StarSeg> stars_;
    std::set<std::string> star_targets_;
    std::vector<std::string> where_conds_;
    bool force_false_ = false;
};

} // namespace

std::string transpile_to_sql(const QueryAst& ast, const PropertyGraphDef& def,
                             const TranspileOptions& opts) {
    return Transpiler(ast, def, opts).run();
}

} // namespace pgqlite

#include "pgqlite/planner.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "def_catalog.hpp"
#include "pgqlite/error.hpp"

namespace pgqlite {

namespace {

void flatten_conjuncts(const ExprRef& e, std::vector<ExprRef>& out) {
    if (!e) return;
    if (const auto* bin = std::get_if<Expr::Binary>(&e->node); bin && bin->op == BinOp::And) {
        flatten_conjuncts(bin->lhs, out);
        flatten_conjuncts(bin->rhs, out);
        return;
    }
    out.push_back(e);
}

void collect_vars(const ExprRef& e, std::set<std::string>& out) {
    if (!e) return;
    if (const auto* ref = std::get_if<Expr::PropRef>(&e->node)) {
        out.insert(ref->variable);
    } else if (const auto* bin = std::get_if<Expr::Binary>(&e->node)) {
        collect_vars(bin->lhs, out);
        collect_vars(bin->rhs, out);
    } else if (const auto* un = std::get_if<Expr::Unary>(&e->node)) {
        collect_vars(un->operand, out);
    }
}

class Lowerer {
public:
    Lowerer(const QueryAst& ast, const PropertyGraphDef& def) : ast_(ast), cat_(def) {}

    LogicalPlan run() {
        assign_names();
        collect_claims();
        flatten_conjuncts(ast_.where, conjuncts_);
        attached_.assign(conjuncts_.size(), false);

        scan_bounded_edges();
        scan_isolated_nodes();
        attach_label_filters();
        attach_ready_conjuncts();
        run_closures();
        attach_remaining_conjuncts();
        project();
        if (ast_.distinct) plan_ = make_plan(DistinctOp{plan_});
        return LogicalPlan{plan_, var_kind_};
    }

private:
    struct StarTask {
        std::string src_var;
        std::string tgt_var;
        std::string label;            // catalog spelling
        ClosureMode mode;
        std::string tgt_static_label; // vertex label closure targets carry
    };

    // ---- naming & validation -------------------------------------------------

    void assign_names() {
        std::size_t anon = 0;
        for (const PathPattern& path : ast_.patterns) {
            auto& nodes = node_vars_.emplace_back();
            auto& edges = edge_vars_.emplace_back();
            for (const NodePattern& n : path.nodes) {
                std::string var = n.variable ? *n.variable : "$n" + std::to_string(anon++);
                declare(var, VarKind::Node);
                nodes.push_back(std::move(var));
            }
            for (const EdgePattern& e : path.edges) {
                std::string var = e.variable ? *e.variable : "$e" + std::to_string(anon++);
                declare(var, VarKind::Edge);
                edges.push_back(std::move(var));
            }
            if (path.mode == PathMode::AnyShortest) {
                const auto stars = std::count_if(
                    path.edges.begin(), path.edges.end(), [](const EdgePattern& e) {
                        return e.quantifier == EdgeQuantifier::KleeneStar;
                    });
                if (stars > 1)
                    throw UnsupportedPatternError(
                        "ANY SHORTEST over more than one starred segment");
            }
        }
    }

    void declare(const std::string& var, VarKind kind) {
        var_kind_.emplace(var, kind); // parser already rejected kind conflicts
        if (kind == VarKind::Node &&
            std::find(node_order_.begin(), node_order_.end(), var) == node_order_.end())
            node_order_.push_back(var);
    }

    void collect_claims() {
        for (const PathPattern& path : ast_.patterns) {
            for (const NodePattern& n : path.nodes) {
                if (!n.variable || !n.label) continue;
                if (!cat_.vertex_by_label(*n.label)) throw UnknownLabelError(*n.label);
                add_claim(*n.variable, cat_.vertex_by_label(*n.label)->label);
            }
            // anonymous labeled nodes still constrain the binding
            for (std::size_t i = 0; i < path.nodes.size(); ++i)
                if (!path.nodes[i].variable && path.nodes[i].label) {
                    if (!cat_.vertex_by_label(*path.nodes[i].label))
                        throw UnknownLabelError(*path.nodes[i].label);
                }
        }
        // re-walk with synthesized names so anonymous labeled nodes get claims
        for (std::size_t p = 0; p < ast_.patterns.size(); ++p)
            for (std::size_t i = 0; i < ast_.patterns[p].nodes.size(); ++i) {
                const NodePattern& n = ast_.patterns[p].nodes[i];
                if (!n.variable && n.label)
                    add_claim(node_vars_[p][i], cat_.vertex_by_label(*n.label)->label);
            }
    }

    void add_claim(const std::string& var, const std::string& label) {
        for (const auto& [v, l] : claims_)
            if (v == var && to_lower(l) == to_lower(label)) return;
        claims_.emplace_back(var, label);
        claim_done_.push_back(false);
    }

    // ---- joins ----------------------------------------------------------------

    void join_with(PlanRef operand, const std::vector<std::string>& cols) {
        if (!plan_) {
            plan_ = std::move(operand);
        } else {
            std::vector<std::pair<std::string, std::string>> keys;
            for (const std::string& c : cols)
                if (bound_.count(c)) keys.emplace_back(c, c);
            plan_ = make_plan(HashJoinOp{plan_, std::move(operand), std::move(keys)});
        }
        bound_.insert(cols.begin(), cols.end());
    }

    void scan_bounded_edges() {
        for (std::size_t p = 0; p < ast_.patterns.size(); ++p) {
            const PathPattern& path = ast_.patterns[p];
            for (std::size_t i = 0; i < path.edges.size(); ++i) {
                const EdgePattern& e = path.edges[i];
                if (!e.label)
                    throw UnsupportedPatternError("edge pattern without a label");
                const EdgeTableDef* et = cat_.edge_by_label(*e.label);
                if (!et) throw UnknownLabelError(*e.label);

                std::string left = node_vars_[p][i];
                std::string right = node_vars_[p][i + 1];
                const std::string& edge_var = edge_vars_[p][i];

                if (e.quantifier == EdgeQuantifier::KleeneStar) {
                    if (e.direction == EdgeDirection::Undirected)
                        throw UnsupportedPatternError("Kleene star over an undirected edge");
                    std::string src = e.direction == EdgeDirection::Backward ? right : left;
                    std::string tgt = e.direction == EdgeDirection::Backward ? left : right;
                    stars_.push_back({src, tgt, et->label,
                                      path.mode == PathMode::AnyShortest
                                          ? ClosureMode::AnyShortest
                                          : ClosureMode::Reach,
                                      cat_.endpoint_label(et->destination)});
                    star_targets_.insert(stars_.back().tgt_var);
                    continue;
                }

                ScanEdgesOp scan;
                scan.label = et->label;
                if (e.direction == EdgeDirection::Undirected) {
                    scan.direction = EdgeDirection::Undirected;
                    scan.src_col = left;
                    scan.tgt_col = right;
                    add_static(left, cat_.endpoint_label(et->source));
                    add_static(left, cat_.endpoint_label(et->destination));
                    add_static(right, cat_.endpoint_label(et->source));
                    add_static(right, cat_.endpoint_label(et->destination));
                } else {
                    scan.direction = EdgeDirection::Forward; // normalized
                    const bool back = e.direction == EdgeDirection::Backward;
                    scan.src_col = back ? right : left;
                    scan.tgt_col = back ? left : right;
                    add_static(scan.src_col, cat_.endpoint_label(et->source));
                    add_static(scan.tgt_col, cat_.endpoint_label(et->destination));
                }
                scan.edge_col = edge_var;

                std::vector<std::string> cols{scan.src_col, scan.edge_col};
                if (scan.tgt_col != scan.src_col) cols.push_back(scan.tgt_col);
                join_with(make_plan(std::move(scan)), cols);
            }
        }
    }

    void add_static(const std::string& var, const std::string& label) {
        if (!label.empty()) static_labels_[var].insert(to_lower(label));
    }

    void scan_isolated_nodes() {
        for (const std::string& var : node_order_) {
            if (bound_.count(var) || star_targets_.count(var)) continue;
            scan_nodes_for(var);
        }
    }

    void scan_nodes_for(const std::string& var) {
        std::string label;
        for (const auto& [v, l] : claims_)
            if (v == var) {
                label = l;
                break;
            }
        if (!label.empty()) static_labels_[var].insert(to_lower(label));
        join_with(make_plan(ScanNodesOp{label, var}), {var});
    }

    // ---- filters ----------------------------------------------------------------

    bool statically_satisfied(const std::string& var, const std::string& label) const {
        auto it = static_labels_.find(var);
        return it != static_labels_.end() && it->second.size() == 1 &&
               *it->second.begin() == to_lower(label);
    }

    void attach_label_filters() {
        for (std::size_t i = 0; i < claims_.size(); ++i) {
            const auto& [var, label] = claims_[i];
            if (claim_done_[i] || !bound_.count(var)) continue;
            claim_done_[i] = true;
            if (statically_satisfied(var, label)) continue;
            plan_ = make_plan(LabelFilterOp{plan_, var, label});
        }
    }

    void attach_ready_conjuncts() {
        ExprRef batch;
        for (std::size_t i = 0; i < conjuncts_.size(); ++i) {
            if (attached_[i]) continue;
            std::set<std::string> vars;
            collect_vars(conjuncts_[i], vars);
            const bool ready = std::all_of(vars.begin(), vars.end(), [&](const std::string& v) {
                return bound_.count(v) > 0;
            });
            if (!ready) continue;
            attached_[i] = true;
            batch = conjoin(batch, conjuncts_[i]);
        }
        if (batch) plan_ = make_plan(FilterOp{plan_, batch});
    }

    void attach_remaining_conjuncts() {
        ExprRef batch;
        for (std::size_t i = 0; i < conjuncts_.size(); ++i)
            if (!attached_[i]) batch = conjoin(batch, conjuncts_[i]);
        if (batch) plan_ = make_plan(FilterOp{plan_, batch});
    }

    // ---- closures -----------------------------------------------------------------

    void run_closures() {
        for (const StarTask& task : stars_) {
            if (!bound_.count(task.src_var)) {
                scan_nodes_for(task.src_var);
                attach_label_filters();
            }
            const bool extends = !bound_.count(task.tgt_var);
            plan_ = make_plan(TraverseClosureOp{plan_, task.src_var, task.label, task.tgt_var,
                                                task.mode, /*min_hops=*/1});
            if (extends) {
                bound_.insert(task.tgt_var);
                add_static(task.tgt_var, task.tgt_static_label);
                attach_label_filters();
            }
            attach_ready_conjuncts();
        }
    }

    // ---- projection -----------------------------------------------------------------

    std::vector<std::string> key_columns_for(const std::string& var) const {
        // prefer the variable's single static label, fall back to its claim
        std::string label;
        auto it = static_labels_.find(var);
        if (it != static_labels_.end() && it->second.size() == 1) label = *it->second.begin();
        if (label.empty())
            for (const auto& [v, l] : claims_)
                if (v == var) {
                    label = l;
                    break;
                }
        const VertexTableDef* vt = label.empty() ? nullptr : cat_.vertex_by_label(label);
        if (!vt)
            throw UnsupportedPatternError("cannot resolve key columns for variable " + var);
        return cat_.vertex_key_columns(*vt);
    }

    void project() {
        std::vector<ProjectOp::Item> items;
        auto add_bare = [&](const std::string& var) {
            for (const std::string& key : key_columns_for(var)) items.push_back({var, key});
        };
        if (ast_.return_all) {
            for (const std::string& var : node_order_)
                if (var[0] != '$') add_bare(var);
            if (items.empty())
                throw UnsupportedPatternError("bare RETURN with no named node variables");
        } else {
            for (const ReturnItem& item : ast_.return_items) {
                if (item.key)
                    items.push_back({item.variable, item.key});
                else
                    add_bare(item.variable);
            }
        }
        plan_ = make_plan(ProjectOp{plan_, std::move(items)});
    }

    const QueryAst& ast_;
    DefCatalog cat_;

    std::vector<std::vector<std::string>> node_vars_; // per pattern, per node
    std::vector<std::vector<std::string>> edge_vars_;
    std::map<std::string, VarKind> var_kind_;
    std::vector<std::string> node_order_; // first-occurrence order

    std::vector<std::pair<std::string, std::string>> claims_; // (var, label)
    std::vector<bool> claim_done_;
    std::map<std::string, std::set<std::string>> static_labels_; // lowercased

    std::vector<ExprRef> conjuncts_;
    std::vector<bool> attached_;

    std::vector<StarTask> stars_;
    std::set<std::string> star_targets_;

    std::set<std::string> bound_;
    PlanRef plan_;
};

// ---- plan rendering -------------------------------------------------------------

void print_op(const PlanRef& op, int depth, std::ostringstream& out) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (const auto* scan = std::get_if<ScanEdgesOp>(&op->node)) {
        const char* arrow = scan->direction == EdgeDirection::Undirected ? "]-" : "]->";
        out << pad << "ScanEdges " << scan->label << " (" << scan->src_col << ")-["
            << scan->edge_col << arrow << "(" << scan->tgt_col << ")\n";
    } else if (const auto* nodes = std::get_if<ScanNodesOp>(&op->node)) {
        out << pad << "ScanNodes " << (nodes->label.empty() ? "*" : nodes->label) << " ("
            << nodes->col << ")\n";
    } else if (const auto* filter = std::get_if<FilterOp>(&op->node)) {
        out << pad << "Filter " << print_expr(*filter->predicate) << "\n";
        print_op(filter->input, depth + 1, out);
    } else if (const auto* lf = std::get_if<LabelFilterOp>(&op->node)) {
        out << pad << "LabelFilter " << lf->col << ":" << lf->label << "\n";
        print_op(lf->input, depth + 1, out);
    } else if (const auto* join = std::get_if<HashJoinOp>(&op->node)) {
        out << pad << "HashJoin";
        if (join->keys.empty()) out << " cross";
        for (std::size_t i = 0; i < join->keys.size(); ++i)
            out << (i ? ", " : " ") << join->keys[i].first << "=" << join->keys[i].second;
        out << "\n";
        print_op(join->left, depth + 1, out);
        print_op(join->right, depth + 1, out);
    } else if (const auto* proj = std::get_if<ProjectOp>(&op->node)) {
        out << pad << "Project";
        for (std::size_t i = 0; i < proj->items.size(); ++i) {
            out << (i ? ", " : " ") << proj->items[i].variable;
            if (proj->items[i].key) out << "." << *proj->items[i].key;
        }
        out << "\n";
        print_op(proj->input, depth + 1, out);
    } else if (const auto* dist = std::get_if<DistinctOp>(&op->node)) {
        out << pad << "Distinct\n";
        print_op(dist->input, depth + 1, out);
    } else if (const auto* clo = std::get_if<TraverseClosureOp>(&op->node)) {
        out << pad << "TraverseClosure " << clo->edge_label << " " << clo->source_col
            << " ~>* " << clo->target_col << " ("
            << (clo->mode == ClosureMode::AnyShortest ? "any_shortest" : "reach")
            << ", min_hops=" << clo->min_hops << ")\n";
        print_op(clo->input, depth + 1, out);
    } else if (const auto* fix = std::get_if<RecursiveFixpointOp>(&op->node)) {
        out << pad << "RecursiveFixpoint " << fix->edge_label << " " << fix->start_col << " ~> "
            << fix->current_col << " depth<=" << fix->depth_limit;
        if (fix->cycle_only) out << " cycle(min_depth=" << fix->cycle_min_depth << ")";
        out << "\n";
        print_op(fix->base, depth + 1, out);
    }
}

} // namespace

LogicalPlan lower(const QueryAst& ast, const PropertyGraphDef& def) {
    return Lowerer(ast, def).run();
}

bool plan_has_closure(const PlanRef& plan) {
    if (!plan) return false;
    if (std::holds_alternative<TraverseClosureOp>(plan->node) ||
        std::holds_alternative<RecursiveFixpointOp>(plan->node))
        return true;
    bool found = false;
    std::visit(
        [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, FilterOp> || std::is_same_v<T, LabelFilterOp> ||
                          std::is_same_v<T, ProjectOp> || std::is_same_v<T, DistinctOp>)
                found = plan_has_closure(op.input);
            else if constexpr (std::is_same_v<T, HashJoinOp>)
                found = plan_has_closure(op.left) || plan_has_closure(op.right);
            else if constexpr (std::is_same_v<T, TraverseClosureOp>)
                found = true;
            else if constexpr (std::is_same_v<T, RecursiveFixpointOp>)
                found = true;
        },
        plan->node);
    return found;
}

std::string print_plan(const LogicalPlan& plan) {
    std::ostringstream out;
    print_op(plan.root, 0, out);
    return out.str();
}

GraphStats collect_stats(const MaterializedGraph& g) {
    GraphStats stats;
    stats.node_count = g.node_count();
    for (const std::string& label : g.labels())
        if (g.has_edge_label(label)) stats.edges_per_label[label] = g.edge_range(label).count;
    return stats;
}

BackendChoice choose_backend(const LogicalPlan& plan, const GraphStats& stats,
                             std::optional<Backend> forced) {
    if (forced) return {*forced, "user override"};
    std::size_t edge_total = 0;
    for (const auto& [label, count] : stats.edges_per_label) edge_total += count;
    std::ostringstream size_note;
    size_note << " (|N|=" << stats.node_count << ", |E|=" << edge_total << ")";
    if (plan_has_closure(plan.root))
        return {Backend::Graph, "closure operator present: graph traversal backend" +
                                    size_note.str()};
    return {Backend::Relational, "pure join plan: relational backend" + size_note.str()};
}

} // namespace pgqlite

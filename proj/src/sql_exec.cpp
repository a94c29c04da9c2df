#include "pgqlite/sql.hpp"

#include <map>
#include <set>
#include <utility>

#include "pgqlite/error.hpp"

namespace pgqlite {

namespace {

constexpr std::size_t kMaxRecursionRounds = 100000;
constexpr std::size_t kMaxRecursionRows = 1000000;

using RowList = std::vector<std::vector<Value>>;

bool ci_eq(const std::string& a, const std::string& b) { return to_lower(a) == to_lower(b); }

struct RowLess {
    bool operator()(const std::vector<Value>& a, const std::vector<Value>& b) const {
        for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
            if (a[i].identical(b[i])) continue;
            return a[i].ordered_before(b[i]);
        }
        return a.size() < b.size();
    }
};

using RowSet = std::set<std::vector<Value>, RowLess>;

// first-occurrence-preserving dedup
void dedup_rows(RowList& rows) {
    RowSet seen;
    RowList unique;
    for (auto& row : rows)
        if (seen.insert(row).second) unique.push_back(std::move(row));
    rows = std::move(unique);
}

std::string item_name(const SqlSelectItem& item) {
    if (item.alias) return *item.alias;
    if (const auto* ref = std::get_if<Expr::PropRef>(&item.expr->node)) return ref->key;
    return print_expr(*item.expr);
}

class SqlRunner {
public:
    SqlRunner(const Database& db) : db_(db) {}

    ResultTable run(const SqlQuery& query) {
        for (const SqlCte& cte : query.ctes) {
            ResultTable t = eval_cte(cte);
            ctes_[to_lower(cte.name)] = std::move(t);
        }
        return eval_compound(query.body);
    }

private:
    struct Block {
        std::string alias;
        std::vector<std::string> cols;
        std::size_t start = 0;
    };

    ResultTable scan(const std::string& name) const {
        const auto it = ctes_.find(to_lower(name));
        if (it != ctes_.end()) return it->second;
        const Table& tbl = db_.table(name);
        ResultTable out;
        for (const ColumnSchema& col : tbl.schema().columns) out.columns.push_back(col.name);
        out.rows.reserve(tbl.row_count());
        for (std::size_t r = 0; r < tbl.row_count(); ++r) {
            std::vector<Value> row;
            row.reserve(out.columns.size());
            for (std::size_t c = 0; c < out.columns.size(); ++c) row.push_back(tbl.at(r, c));
            out.rows.push_back(std::move(row));
        }
        return out;
    }

    Value resolve(const Expr::PropRef& ref, const std::vector<Block>& blocks,
                  const std::vector<Value>& row) const {
        if (!ref.variable.empty()) {
            for (const Block& b : blocks) {
                if (!ci_eq(b.alias, ref.variable)) continue;
                for (std::size_t c = 0; c < b.cols.size(); ++c)
                    if (ci_eq(b.cols[c], ref.key)) return row[b.start + c];
                throw UnknownColumnError(ref.variable + "." + ref.key);
            }
            throw UnboundVariableError(ref.variable);
        }
        const Value* found = nullptr;
        for (const Block& b : blocks)
            for (std::size_t c = 0; c < b.cols.size(); ++c)
                if (ci_eq(b.cols[c], ref.key)) {
                    if (found) throw SqlError("ambiguous column: " + ref.key);
                    found = &row[b.start + c];
                }
        if (!found) throw UnknownColumnError(ref.key);
        return *found;
    }

    ResultTable eval_select(const SqlSelect& sel) const {
        std::vector<Block> blocks;
        RowList rows{{}}; // one empty row to seed the nested-loop fold
        const std::vector<Value>* cur = nullptr;
        const auto resolver = [&](const Expr::PropRef& ref) { return resolve(ref, blocks, *cur); };

        for (const SqlTableRef& ref : sel.from) {
            for (const Block& b : blocks)
                if (ci_eq(b.alias, ref.alias)) throw SqlError("duplicate alias: " + ref.alias);
            const ResultTable t = scan(ref.table);
            const std::size_t start = blocks.empty() ? 0 : blocks.back().start +
                                                              blocks.back().cols.size();
            blocks.push_back({ref.alias, t.columns, start});
            RowList next;
            for (const auto& left : rows) {
                for (const auto& right : t.rows) {
                    std::vector<Value> combined = left;
                    combined.insert(combined.end(), right.begin(), right.end());
                    cur = &combined;
                    if (!ref.on || truthy(eval_expr(*ref.on, resolver)))
                        next.push_back(std::move(combined));
                }
            }
            rows = std::move(next);
        }

        if (sel.where) {
            RowList kept;
            for (auto& row : rows) {
                cur = &row;
                if (truthy(eval_expr(*sel.where, resolver))) kept.push_back(std::move(row));
            }
            rows = std::move(kept);
        }

        ResultTable out;
        for (const SqlSelectItem& item : sel.items) out.columns.push_back(item_name(item));
        out.rows.reserve(rows.size());
        for (const auto& row : rows) {
            cur = &row;
            std::vector<Value> projected;
            projected.reserve(sel.items.size());
            for (const SqlSelectItem& item : sel.items)
                projected.push_back(eval_expr(*item.expr, resolver));
            out.rows.push_back(std::move(projected));
        }
        if (sel.distinct) dedup_rows(out.rows);
        return out;
    }

    /// Left-associative UNION fold: each plain UNION deduplicates everything
    /// accumulated so far; UNION ALL just appends.
    ResultTable eval_compound(const SqlCompound& c) const {
        ResultTable out = eval_select(c.branches[0]);
        for (std::size_t i = 1; i < c.branches.size(); ++i) {
            ResultTable next = eval_select(c.branches[i]);
            if (next.columns.size() != out.columns.size())
                throw SqlError("UNION branches disagree on column count");
            for (auto& row : next.rows) out.rows.push_back(std::move(row));
            if (!c.union_all[i - 1]) dedup_rows(out.rows);
        }
        return out;
    }

    static bool references(const SqlSelect& sel, const std::string& name) {
        for (const SqlTableRef& ref : sel.from)
            if (ci_eq(ref.table, name)) return true;
        return false;
    }

    ResultTable eval_cte(const SqlCte& cte) {
        bool self_ref = false;
        for (const SqlSelect& branch : cte.body.branches)
            self_ref = self_ref || references(branch, cte.name);
        ResultTable out = self_ref ? eval_recursive(cte) : eval_compound(cte.body);
        if (!cte.columns.empty()) {
            if (cte.columns.size() != out.columns.size())
                throw SqlError("CTE " + cte.name + " declares " +
                               std::to_string(cte.columns.size()) + " columns but its body has " +
                               std::to_string(out.columns.size()));
            out.columns = cte.columns;
        }
        return out;
    }

    /// Semi-naive iteration: the self reference in a recursive branch sees
    /// only the rows discovered in the previous round.
    ResultTable eval_recursive(const SqlCte& cte) {
        SqlCompound base;
        std::vector<const SqlSelect*> recursive;
        bool dedup = false;
        for (std::size_t i = 0; i < cte.body.branches.size(); ++i) {
            const SqlSelect& branch = cte.body.branches[i];
            if (i > 0 && !cte.body.union_all[i - 1]) dedup = true;
            if (references(branch, cte.name)) {
                recursive.push_back(&branch);
            } else {
                if (!base.branches.empty()) base.union_all.push_back(true);
                base.branches.push_back(branch);
            }
        }
        if (base.branches.empty())
            throw SqlError("recursive CTE " + cte.name + " has no non-recursive branch");

        ResultTable acc = eval_compound(base);
        if (!cte.columns.empty()) {
            if (cte.columns.size() != acc.columns.size())
                throw SqlError("CTE " + cte.name + " declares " +
                               std::to_string(cte.columns.size()) + " columns but its body has " +
                               std::to_string(acc.columns.size()));
            acc.columns = cte.columns; // recursive branches see the declared names
        }
        if (dedup) dedup_rows(acc.rows);

        RowSet seen;
        if (dedup)
            for (const auto& row : acc.rows) seen.insert(row);

        const std::string key = to_lower(cte.name);
        RowList frontier = acc.rows;
        std::size_t rounds = 0;
        while (!frontier.empty()) {
            if (++rounds > kMaxRecursionRounds)
                throw SqlError("recursive CTE " + cte.name + " did not converge within " +
                               std::to_string(kMaxRecursionRounds) + " rounds");
            ctes_[key] = ResultTable{acc.columns, frontier};
            RowList fresh;
            for (const SqlSelect* branch : recursive) {
                ResultTable r = eval_select(*branch);
                if (r.columns.size() != acc.columns.size())
                    throw SqlError("UNION branches disagree on column count");
                for (auto& row : r.rows) fresh.push_back(std::move(row));
            }
            RowList added;
            for (auto& row : fresh) {
                if (dedup && !seen.insert(row).second) continue;
                added.push_back(row);
                acc.rows.push_back(std::move(row));
            }
            if (acc.rows.size() > kMaxRecursionRows)
                throw SqlError("recursive CTE " + cte.name + " exceeded " +
                               std::to_string(kMaxRecursionRows) +
                               " rows without converging");
            frontier = std::move(added);
        }
        ctes_.erase(key); // run() installs the final table under this name
        return acc;
    }

    const Database& db_;
    std::map<std::string, ResultTable> ctes_; // lower-cased name -> materialized rows
};

} // namespace

ResultTable run_sql(const SqlQuery& query, const Database& db) {
    return SqlRunner(db).run(query);
}

ResultTable run_sql_text(const std::string& text, const Database& db) {
    return run_sql(parse_sql(text), db);
}

} // namespace pgqlite

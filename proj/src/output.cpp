#include "negkb/output.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>

#include "negkb/util.hpp"

namespace negkb {

std::string format_real(double value) {
    if (value == 0.0) value = 0.0;  // no "-0.000000"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

Format parse_format(std::string_view text) {
    if (text == "tsv") return Format::tsv;
    if (text == "json") return Format::json;
    throw InputError("format must be 'tsv' or 'json'");
}

namespace {

std::string tsv_safe(std::string s) {
    for (auto& ch : s) {
        if (ch == '\t' || ch == '\n' || ch == '\r') ch = ' ';
    }
    return s;
}

std::vector<std::string> base_columns() {
    return {"subject", "kind",  "property", "object", "condition_property", "condition_value",
            "score",   "frq",   "vol",      "group",  "verbalization"};
}

std::vector<Cell> base_cells(const KnowledgeBase& kb, const NegativeStatement& st, double score,
                             int frq, int vol, const std::string& group,
                             const std::string& verbalization) {
    std::vector<Cell> row;
    row.emplace_back(kb.name(st.subject));
    row.emplace_back(std::string(to_string(st.kind)));
    row.emplace_back(kb.name(st.property));
    if (st.kind == StatementKind::grounded)
        row.emplace_back(kb.name(st.object));
    else
        row.emplace_back(std::monostate{});
    if (st.kind == StatementKind::conditional) {
        row.emplace_back(kb.name(st.aspect));
        row.emplace_back(kb.name(st.value));
    } else {
        row.emplace_back(std::monostate{});
        row.emplace_back(std::monostate{});
    }
    row.emplace_back(score);
    row.emplace_back(static_cast<std::int64_t>(frq));
    row.emplace_back(static_cast<std::int64_t>(vol));
    row.emplace_back(group);
    row.emplace_back(verbalization);
    return row;
}

}  // namespace

void write_table(std::ostream& out, const Table& table, Format format) {
    if (format == Format::tsv) {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            out << (c ? "\t" : "") << table.columns[c];
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << '\t';
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, std::string>) out << tsv_safe(v);
                        else if constexpr (std::is_same_v<T, double>) out << format_real(v);
                        else if constexpr (std::is_same_v<T, std::int64_t>) out << v;
                    },
                    row[c]);
            }
            out << '\n';
        }
        return;
    }

    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) obj[table.columns[c]] = nullptr;
                    else obj[table.columns[c]] = v;
                },
                row[c]);
        }
        arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
}

Table negation_table(const KnowledgeBase& kb, std::span<const ScoredNegation> rows) {
    Table t{base_columns(), {}};
    for (const auto& n : rows)
        t.rows.push_back(base_cells(kb, n.stmt, n.score, n.frq, n.vol, n.group, n.verbalization));
    return t;
}

Table ordered_negation_table(const KnowledgeBase& kb, std::span<const ScoredNegation> rows,
                             double alpha) {
    Table t{base_columns(), {}};
    t.columns.emplace_back("prefix_len");
    t.columns.emplace_back("alpha");
    for (const auto& n : rows) {
        auto cells = base_cells(kb, n.stmt, n.score, n.frq, n.vol, n.group, n.verbalization);
        cells.emplace_back(static_cast<std::int64_t>(n.prefix_len.value_or(0)));
        cells.emplace_back(alpha);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

std::string verbalize_conditional(const KnowledgeBase& kb, const ConditionalNegation& c) {
    return "no " + kb.name(c.property) + " value with " + kb.name(c.aspect) + " " +
           kb.name(c.value);
}

Table conditional_table(const KnowledgeBase& kb, std::span<const ConditionalNegation> rows) {
    Table t{base_columns(), {}};
    t.columns.emplace_back("support");
    for (const auto& c : rows) {
        auto cells = base_cells(kb, c.statement(), static_cast<double>(c.support), c.support,
                                c.negated, "lifted " + kb.name(c.property),
                                verbalize_conditional(kb, c));
        cells.emplace_back(static_cast<std::int64_t>(c.support));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

}  // namespace negkb

#include "negkb/statement.hpp"

#include <algorithm>
#include <tuple>

namespace negkb {

const char* to_string(StatementKind kind) {
    switch (kind) {
    case StatementKind::grounded: return "grounded";
    case StatementKind::universal: return "universal";
    case StatementKind::conditional: return "conditional";
    }
    return "?";
}

StatementKind parse_statement_kind(std::string_view text) {
    if (text == "grounded") return StatementKind::grounded;
    if (text == "universal") return StatementKind::universal;
    if (text == "conditional") return StatementKind::conditional;
    throw InputError("unknown statement kind '" + std::string(text) + "'");
}

std::string statement_id(const KnowledgeBase& kb, const NegativeStatement& st) {
    std::string id = kb.name(st.subject) + "|" + kb.name(st.property);
    switch (st.kind) {
    case StatementKind::grounded: id += "|" + kb.name(st.object); break;
    case StatementKind::universal: break;
    case StatementKind::conditional:
        id += "|" + kb.name(st.aspect) + "|" + kb.name(st.value);
        break;
    }
    return id;
}

ParsedStatementId parse_statement_id(std::string_view id) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto bar = id.find('|', start);
        parts.emplace_back(id.substr(start, bar == std::string_view::npos ? bar : bar - start));
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }
    for (const auto& p : parts) {
        if (p.empty()) throw InputError("malformed statement id '" + std::string(id) + "'");
    }
    ParsedStatementId out;
    switch (parts.size()) {
    case 2: out.kind = StatementKind::universal; break;
    case 3: out.kind = StatementKind::grounded; out.object = parts[2]; break;
    case 4:
        out.kind = StatementKind::conditional;
        out.aspect = parts[2];
        out.value = parts[3];
        break;
    default: throw InputError("malformed statement id '" + std::string(id) + "'");
    }
    out.subject = parts[0];
    out.property = parts[1];
    return out;
}

bool rank_before(const ScoredNegation& a, const ScoredNegation& b) {
    if (a.score != b.score) return a.score > b.score;
    const auto& x = a.stmt;
    const auto& y = b.stmt;
    return std::tie(x.kind, x.subject, x.property, x.object, x.aspect, x.value) <
           std::tie(y.kind, y.subject, y.property, y.object, y.aspect, y.value);
}

void sort_and_truncate(std::vector<ScoredNegation>& rows, std::size_t k) {
    std::sort(rows.begin(), rows.end(), rank_before);
    if (rows.size() > k) rows.resize(k);
}

}  // namespace negkb

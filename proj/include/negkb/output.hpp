#pragma once
// Tabular output shared by all commands: TSV with a header line, or a JSON
// array of row objects (missing cells become null).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "negkb/lifting.hpp"
#include "negkb/statement.hpp"

namespace negkb {

enum class Format { tsv, json };
Format parse_format(std::string_view text);

using Cell = std::variant<std::monostate, std::string, std::int64_t, double>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

void write_table(std::ostream& out, const Table& table, Format format);

// subject, kind, property, object, condition_property, condition_value,
// score, frq, vol, group, verbalization; ordered output adds prefix_len and
// alpha.
Table negation_table(const KnowledgeBase& kb, std::span<const ScoredNegation> rows);
Table ordered_negation_table(const KnowledgeBase& kb, std::span<const ScoredNegation> rows,
                             double alpha);
// Same columns as negation_table plus support.
Table conditional_table(const KnowledgeBase& kb, std::span<const ConditionalNegation> rows);

std::string verbalize_conditional(const KnowledgeBase& kb, const ConditionalNegation& c);

}  // namespace negkb

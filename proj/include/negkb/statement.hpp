#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "negkb/kb.hpp"

namespace negkb {

enum class StatementKind { grounded, universal, conditional };

const char* to_string(StatementKind kind);
StatementKind parse_statement_kind(std::string_view text);

// A peer-side statement before it is attached to a subject: either a
// property (P) or a property-object pair (PO).
struct Candidate {
    PropertyId property;
    std::optional<EntityId> object;

    bool is_universal() const { return !object.has_value(); }
    friend auto operator<=>(const Candidate&, const Candidate&) = default;
};

// ¬(s,p,o), ¬∃x(s,p,x) or ¬∃o:(s,p,o),(o,aspect,value).
struct NegativeStatement {
    StatementKind kind = StatementKind::grounded;
    EntityId subject;
    PropertyId property;
    EntityId object;    // grounded only
    PropertyId aspect;  // conditional only
    EntityId value;     // conditional only

    static NegativeStatement grounded(EntityId s, PropertyId p, EntityId o) {
        return {StatementKind::grounded, s, p, o, {}, {}};
    }
    static NegativeStatement universal(EntityId s, PropertyId p) {
        return {StatementKind::universal, s, p, {}, {}, {}};
    }
    static NegativeStatement conditional(EntityId s, PropertyId p, PropertyId a, EntityId v) {
        return {StatementKind::conditional, s, p, {}, a, v};
    }
    static NegativeStatement from_candidate(EntityId s, const Candidate& c) {
        return c.object ? grounded(s, c.property, *c.object) : universal(s, c.property);
    }

    Candidate candidate() const {
        return kind == StatementKind::grounded ? Candidate{property, object}
                                               : Candidate{property, std::nullopt};
    }

    friend bool operator==(const NegativeStatement&, const NegativeStatement&) = default;
};

// Canonical textual id: "s|p|o" (grounded), "s|p" (universal),
// "s|p|aspect|value" (conditional).
std::string statement_id(const KnowledgeBase& kb, const NegativeStatement& st);

struct ParsedStatementId {
    StatementKind kind;
    std::string subject, property, object, aspect, value;
};
ParsedStatementId parse_statement_id(std::string_view id);

struct ScoredNegation {
    NegativeStatement stmt;
    double score = 0.0;
    int frq = 0;
    int vol = 0;
    std::string group;
    std::string verbalization;
    std::optional<int> prefix_len;  // ordered inference only
};

// Final ranking order: score descending, grounded before universal, then
// property and object ids ascending (ids are lexicographic).
bool rank_before(const ScoredNegation& a, const ScoredNegation& b);

// Sorts by rank_before and keeps the first k.
void sort_and_truncate(std::vector<ScoredNegation>& rows, std::size_t k);

}  // namespace negkb

#pragma once
// In-memory knowledge base.
//
// Names are interned into two dictionaries (terms and properties). Ids are
// assigned after loading in lexicographic order of the names, so comparing
// ids compares names and every sorted output is independent of input row
// order.
//
// Triples are kept in two sorted arrays:
//   spo_  (s, p, o)  -> by-S and by-SP lookups
//   pos_  (p, o, s)  -> by-P and by-PO lookups
// Objects are terms; a term whose name starts with '"' is a literal.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "negkb/date.hpp"

namespace negkb {

template <class Tag>
struct Id {
    std::uint32_t value = 0;
    friend auto operator<=>(Id, Id) = default;
};

using EntityId = Id<struct EntityTag>;
using PropertyId = Id<struct PropertyTag>;

struct Triple {
    EntityId s;
    PropertyId p;
    EntityId o;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class QualifierKind { start, end, point };

struct Qualifier {
    Triple triple;
    std::optional<Date> start;
    std::optional<Date> end;
    std::optional<Date> point;
};

enum class HierarchyRelation { subclass, subproperty, instance_of };

// Bad user input: malformed files, unknown entities, invalid parameters.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class KnowledgeBase {
public:
    KnowledgeBase() = default;

    const std::string& name(EntityId id) const { return terms_[id.value]; }
    const std::string& name(PropertyId id) const { return props_[id.value]; }
    std::optional<EntityId> find_entity(std::string_view name) const;
    std::optional<PropertyId> find_property(std::string_view name) const;
    bool is_literal(EntityId id) const;

    std::size_t term_count() const { return terms_.size(); }
    std::size_t property_count() const { return props_.size(); }
    std::size_t size() const { return spo_.size(); }

    // All triples sorted by (s, p, o).
    std::span<const Triple> triples() const { return spo_; }
    std::span<const Triple> by_subject(EntityId s) const;
    std::span<const Triple> by_subject_property(EntityId s, PropertyId p) const;
    // Sorted by (p, o, s).
    std::span<const Triple> by_property(PropertyId p) const;
    std::span<const Triple> by_property_object(PropertyId p, EntityId o) const;

    bool contains(const Triple& t) const;
    bool has_property(EntityId s, PropertyId p) const {
        return !by_subject_property(s, p).empty();
    }

    std::vector<std::pair<PropertyId, EntityId>> po_pairs(EntityId e) const;
    std::vector<PropertyId> properties(EntityId e) const;
    std::vector<EntityId> objects(EntityId s, PropertyId p) const;
    std::vector<EntityId> subjects(PropertyId p, EntityId o) const;
    // Distinct subjects of the whole KB, ascending.
    std::vector<EntityId> subjects() const;

    // Number of triples with property p.
    std::size_t property_frequency(PropertyId p) const { return by_property(p).size(); }
    // Page-view count; 0 when unknown.
    std::uint64_t popularity(EntityId e) const;
    bool has_popularity_data() const { return !popularity_.empty(); }

    const Qualifier* qualifier(const Triple& t) const;
    std::span<const Qualifier> qualifiers() const { return qualifiers_; }

    // Nodes reachable in 1..hops edges; excludes the start node.
    std::vector<EntityId> class_ancestors(EntityId node, int hops) const;
    std::vector<PropertyId> property_ancestors(PropertyId node, int hops) const;
    std::vector<EntityId> types(EntityId e) const;

private:
    friend class KbBuilder;

    std::vector<std::string> terms_;
    std::vector<std::string> props_;
    std::unordered_map<std::string, std::uint32_t> term_index_;
    std::unordered_map<std::string, std::uint32_t> prop_index_;

    std::vector<Triple> spo_;
    std::vector<Triple> pos_;
    std::vector<std::uint32_t> subject_offsets_;  // CSR over spo_, size terms+1
    std::vector<std::uint32_t> property_offsets_; // CSR over pos_, size props+1
    std::vector<Qualifier> qualifiers_;           // sorted by triple
    std::vector<std::uint64_t> popularity_;       // indexed by term id, empty if no data

    std::map<std::uint32_t, std::vector<std::uint32_t>> subclass_;
    std::map<std::uint32_t, std::vector<std::uint32_t>> subproperty_;
    std::map<std::uint32_t, std::vector<std::uint32_t>> instance_of_;
};

// Collects string rows and produces an immutable KnowledgeBase.
class KbBuilder {
public:
    void add_triple(std::string s, std::string p, std::string o);
    // Returns false when the same (triple, kind) was already set; the new
    // value wins. Throws InputError when a point date is mixed with
    // start/end on one triple, or start is after end.
    bool add_qualifier(const std::string& s, const std::string& p, const std::string& o,
                       QualifierKind kind, Date date);
    void set_popularity(std::string entity, std::uint64_t views);
    void add_hierarchy(std::string child, HierarchyRelation rel, std::string parent);

    // Qualifiers on triples absent from the KB are dropped and reported
    // through `warnings` when given.
    KnowledgeBase build(std::vector<std::string>* warnings = nullptr) const;

private:
    struct RawQualifier {
        std::optional<Date> start, end, point;
    };
    using RawTriple = std::tuple<std::string, std::string, std::string>;

    std::vector<RawTriple> triples_;
    std::map<RawTriple, RawQualifier> qualifiers_;
    std::map<std::string, std::uint64_t> popularity_;
    std::vector<std::tuple<std::string, HierarchyRelation, std::string>> hierarchy_;
};

struct KbPaths {
    std::filesystem::path triples;
    std::optional<std::filesystem::path> qualifiers;
    std::optional<std::filesystem::path> popularity;
    std::optional<std::filesystem::path> hierarchy;
};

struct LoadedKb {
    KnowledgeBase kb;
    std::vector<std::string> warnings;
};

LoadedKb load_kb(const KbPaths& paths);

// Serializes the triple set in the triples.tsv format, sorted.
void write_triples(const KnowledgeBase& kb, std::ostream& out);

// Splits one TSV line. Strips a trailing '\r'.
std::vector<std::string_view> split_tabs(std::string_view line);

// Iterates non-comment, non-blank lines of a TSV file. The callback gets
// the 1-based line number and the fields. Throws InputError if the file
// cannot be opened.
void for_each_tsv_row(
    const std::filesystem::path& path,
    const std::function<void(std::size_t, const std::vector<std::string_view>&)>& fn);

}  // namespace negkb

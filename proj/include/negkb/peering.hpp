#pragma once
// Peer selection: unordered groups (shared facet value, embedding
// neighbours) and ordered lists (temporal qualifiers, follows-chains).

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "negkb/kb.hpp"

namespace negkb {

struct PeerGroup {
    std::string label;              // e.g. "occupation=actor"
    std::vector<EntityId> members;  // never contains the subject
};

// Slots run oldest to newest. Peers of a subject are the slots strictly
// before the subject's own slot.
struct OrderedPeerList {
    std::string label;  // e.g. "position held=President of the U.S."
    std::string noun;   // used in verbalizations: "unlike 3 of the previous 4 <noun>"
    std::vector<std::vector<EntityId>> slots;
    // The (p, o) the members share, for qualifier-based lists.
    std::optional<std::pair<PropertyId, EntityId>> key;
};

// Index of the newest slot strictly older than the subject, or nullopt when
// the subject has no predecessors in the list. A subject that is not a
// member but holds the list's (p, o) key is anchored after the newest slot.
std::optional<std::size_t> anchor_slot(const KnowledgeBase& kb, const OrderedPeerList& list,
                                       EntityId e);

class EmbeddingTable {
public:
    EmbeddingTable() = default;

    // Throws InputError on dimension mismatch, NaN/Inf, or a repeated entity.
    void add(EntityId e, std::vector<double> vec);

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return ids_.size(); }
    bool contains(EntityId e) const { return find(e) != nullptr; }
    // nullptr when absent.
    const double* find(EntityId e) const;
    std::span<const double> vector(EntityId e) const;
    const std::vector<EntityId>& entities() const { return ids_; }

    // 0 when either vector has zero norm.
    double cosine(EntityId a, EntityId b) const;

    // Rows naming entities unknown to kb are skipped and counted in `skipped`.
    static EmbeddingTable load(const std::filesystem::path& path, const KnowledgeBase& kb,
                               std::size_t* skipped = nullptr);

private:
    std::size_t index_of(EntityId e) const;

    std::size_t dim_ = 0;
    std::vector<EntityId> ids_;  // sorted
    std::vector<double> data_;   // row-major, aligned with ids_
    std::vector<double> norms_;
};

std::vector<PeerGroup> facet_peer_groups(const KnowledgeBase& kb, EntityId e,
                                         PropertyId facet, std::size_t s, double min_pop_ratio);

// The k nearest entities by cosine, ties by id. Throws InputError("no
// embedding ...") when e is not in the table.
PeerGroup embedding_peers(const KnowledgeBase& kb, const EmbeddingTable& emb, EntityId e,
                          std::size_t k);

// One list per (p, o) shared by at least min_size subjects where at least
// one member carries a date qualifier. Key: point date, else end date;
// undated members share the newest slot; equal dates share a slot.
std::vector<OrderedPeerList> tq_groups(const KnowledgeBase& kb, std::size_t min_size);

struct ChainProperties {
    std::optional<PropertyId> follows;      // (b, follows, a): a precedes b
    std::optional<PropertyId> followed_by;  // (a, followed by, b): a precedes b
};

ChainProperties chain_properties(const KnowledgeBase& kb, std::string_view follows = "follows",
                                 std::string_view followed_by = "followed by");

// Longest simple follows-chains, one singleton slot per entity.
std::vector<OrderedPeerList> tp_chains(const KnowledgeBase& kb, const ChainProperties& props,
                                       std::size_t min_size, std::size_t max_size);

}  // namespace negkb

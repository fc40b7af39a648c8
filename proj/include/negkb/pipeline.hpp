#pragma once
// End-to-end pipelines behind the command-line tool.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "negkb/config.hpp"
#include "negkb/lifting.hpp"
#include "negkb/ordered_inference.hpp"
#include "negkb/peer_inference.hpp"
#include "negkb/ranking.hpp"

namespace negkb {

struct Session {
    RunConfig config;
    KnowledgeBase kb;
    std::optional<EmbeddingTable> embeddings;
    std::vector<std::string> warnings;

    // Loads the KB and, when configured, the embeddings.
    static Session open(const RunConfig& config);

    // InputError("unknown entity ...") when absent.
    EntityId entity(std::string_view name) const;
};

struct EntityResult {
    std::vector<ScoredNegation> rows;
    std::vector<FeatureVector> features;  // aligned with rows when ranked
    std::vector<std::string> notices;
};

std::vector<PeerGroup> peer_groups_for(const Session& session, EntityId e);

// Peer-based inference for one entity: candidates, configured filters; no
// truncation.
EntityResult infer_entity(const Session& session, EntityId e);

// infer_entity for every entity, then (when a model is given) features,
// normalization across the configured scope and ensemble re-ranking, then
// top-k per entity. Parallel over entities; result order follows input.
std::vector<EntityResult> infer_batch(const Session& session, const std::vector<EntityId>& entities,
                                      const std::optional<EnsembleModel>& model, std::size_t jobs);

// Candidates with normalized features (no truncation), for ranking output.
std::vector<EntityResult> feature_batch(const Session& session,
                                        const std::vector<EntityId>& entities, std::size_t jobs);

class OrderedIndex {
public:
    explicit OrderedIndex(const Session& session);
    const std::vector<OrderedPeerList>& lists() const { return lists_; }
    // Lists where e is a member.
    std::vector<OrderedPeerList> lists_for(EntityId e) const;

private:
    std::vector<OrderedPeerList> lists_;
    std::map<EntityId, std::vector<std::size_t>> membership_;
};

EntityResult ordered_entity(const Session& session, const OrderedIndex& index, EntityId e);

// Grounded negations to lift: from a negations TSV when given, otherwise
// the grounded part of peer-based inference.
std::vector<NegativeStatement> grounded_for_lifting(const Session& session, EntityId e);

// Reads rows written by `infer` (TSV with header). Unknown names are errors.
std::vector<NegativeStatement> read_negations(const std::filesystem::path& path,
                                              const KnowledgeBase& kb);

struct CoverageResult {
    std::size_t sampled = 0;
    std::size_t covered = 0;
    double coverage() const {
        return sampled == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(sampled);
    }
};

enum class CoverageMode { peer, ordered };

// Samples up to n subjects with the configured seed and counts those with
// at least one inferable negation.
CoverageResult measure_coverage(const Session& session, std::size_t n, CoverageMode mode,
                                std::size_t jobs);

}  // namespace negkb

#pragma once
// Peer-based candidate retrieval: count P and PO statements over peer
// groups, keep one score per candidate across groups, subtract what the
// subject already has, return the top k.

#include <limits>
#include <string>
#include <vector>

#include "negkb/peering.hpp"
#include "negkb/statement.hpp"

namespace negkb {

enum class CombineMode { max, average };
enum class Normalization { by_s, by_group_size };

struct InferOptions {
    std::size_t s = 30;
    std::size_t k = std::numeric_limits<std::size_t>::max();
    CombineMode combine = CombineMode::max;
    Normalization normalize = Normalization::by_s;
    std::string noun = "people";  // verbalization: "unlike 2 of 3 similar <noun>"
};

// P candidates for every property of each peer; PO candidates for every
// (p, o) with an entity object. Literal objects only yield P candidates.
std::vector<Candidate> peer_statements(const KnowledgeBase& kb, EntityId peer);

// Whether the subject already holds a candidate: PO if (e,p,o) is in the
// KB, P if e has any value for p.
bool holds(const KnowledgeBase& kb, EntityId e, const Candidate& c);

// score = frq / vol, where vol is s (or the group size) of the group that
// produced the kept score. With CombineMode::average the score is the mean
// over the groups in which the candidate occurs; frq/vol still describe the
// best group.
std::vector<ScoredNegation> infer_candidates(const KnowledgeBase& kb, EntityId e,
                                             const std::vector<PeerGroup>& groups,
                                             const InferOptions& options);

// Keeps grounded ¬(e,p,o) only if e has some other object for p; drops all
// universal statements.
std::vector<ScoredNegation> pca_filter(const KnowledgeBase& kb,
                                       const std::vector<ScoredNegation>& candidates);

struct Rejection {
    ScoredNegation negation;
    std::string reason;
};

struct SubsumptionResult {
    std::vector<ScoredNegation> kept;
    std::vector<Rejection> rejected;
};

// Drops negations contradicted within `hops` steps of the class or
// property hierarchy:
//   ¬(e,p,o) when (e,p,o') holds and o is a superclass of o';
//   ¬(e,p,o) when (e,p',o) holds and p is a superproperty of p';
//   ¬∃x(e,p,x) when (e,p',x) holds for a subproperty p' of p.
SubsumptionResult subsumption_filter(const KnowledgeBase& kb,
                                     const std::vector<ScoredNegation>& candidates, int hops);

std::string verbalize_peer(int frq, int vol, std::string_view noun);

}  // namespace negkb

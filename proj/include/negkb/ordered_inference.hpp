#pragma once
// Order-oriented candidate retrieval. A statement's score over an ordered
// peer list is the best prefix score
//
//     alpha * FRQ/VOL + (1 - alpha) * log10(FRQ)
//
// where the prefix grows backwards from the subject's anchor slot, VOL is
// the number of peers in the prefix and FRQ the number holding the
// statement. Prefixes with FRQ = 0 are skipped.

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "negkb/peering.hpp"
#include "negkb/statement.hpp"

namespace negkb {

struct PrefixScore {
    double score = 0.0;
    int frq = 0;
    int vol = 0;
    int prefix_len = 0;  // slots consumed
};

double prefix_formula(int frq, int vol, double alpha);

// Single backward pass from slot `pos` to slot 0. Returns the maximal score
// (the shortest prefix on ties), or nullopt when no peer in slots [0, pos]
// holds the statement.
std::optional<PrefixScore> prefix_scoring(const OrderedPeerList& list, std::size_t pos,
                                          double alpha,
                                          const std::function<bool(EntityId)>& has);

struct OrderedOptions {
    std::size_t k = std::numeric_limits<std::size_t>::max();
    double alpha = 0.5;
};

std::vector<ScoredNegation> infer_ordered(const KnowledgeBase& kb, EntityId e,
                                          const std::vector<OrderedPeerList>& lists,
                                          const OrderedOptions& options);

std::string verbalize_ordered(int frq, int vol, std::string_view noun);

}  // namespace negkb

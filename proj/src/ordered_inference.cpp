#include "negkb/ordered_inference.hpp"

#include <cmath>
#include <map>

#include "negkb/peer_inference.hpp"

namespace negkb {

double prefix_formula(int frq, int vol, double alpha) {
    return alpha * (static_cast<double>(frq) / vol) + (1.0 - alpha) * std::log10(frq);
}

std::string verbalize_ordered(int frq, int vol, std::string_view noun) {
    return "unlike " + std::to_string(frq) + " of the previous " + std::to_string(vol) + " " +
           std::string(noun);
}

std::optional<PrefixScore> prefix_scoring(const OrderedPeerList& list, std::size_t pos,
                                          double alpha,
                                          const std::function<bool(EntityId)>& has) {
    if (alpha < 0.0 || alpha > 1.0) throw InputError("alpha must be in [0,1]");
    if (pos >= list.slots.size()) throw InputError("prefix position outside the list");

    std::optional<PrefixScore> best;
    int frq = 0;
    int vol = 0;
    for (std::size_t j = pos + 1; j-- > 0;) {
        for (EntityId peer : list.slots[j]) {
            ++vol;
            if (has(peer)) ++frq;
        }
        if (frq == 0) continue;
        const double sc = prefix_formula(frq, vol, alpha);
        if (!best || sc > best->score)
            best = PrefixScore{sc, frq, vol, static_cast<int>(pos - j + 1)};
    }
    return best;
}

std::vector<ScoredNegation> infer_ordered(const KnowledgeBase& kb, EntityId e,
                                          const std::vector<OrderedPeerList>& lists,
                                          const OrderedOptions& options) {
    if (options.k < 1) throw InputError("k must be >= 1");
    if (options.alpha < 0.0 || options.alpha > 1.0) throw InputError("alpha must be in [0,1]");

    struct Best {
        PrefixScore prefix;
        std::size_t list = 0;
    };
    std::map<Candidate, Best> best;

    for (std::size_t li = 0; li < lists.size(); ++li) {
        const auto& list = lists[li];
        const auto anchor = anchor_slot(kb, list, e);
        if (!anchor) continue;
        const std::size_t pos = *anchor;

        // Per candidate: (slot, holders) for slots where it occurs, newest first.
        std::map<Candidate, std::vector<std::pair<std::size_t, int>>> occurrences;
        // vol_from[j] = peers in slots j..pos
        std::vector<int> vol_from(pos + 2, 0);
        for (std::size_t j = pos + 1; j-- > 0;) {
            std::map<Candidate, int> slot_counts;
            int peers = 0;
            for (EntityId peer : list.slots[j]) {
                if (peer == e) continue;
                ++peers;
                for (const auto& c : peer_statements(kb, peer)) ++slot_counts[c];
            }
            vol_from[j] = vol_from[j + 1] + peers;
            for (const auto& [c, n] : slot_counts) occurrences[c].emplace_back(j, n);
        }

        // Extending a prefix without new holders only lowers the score, so
        // it is enough to evaluate the slots where a holder occurs.
        for (const auto& [c, occ] : occurrences) {
            std::optional<PrefixScore> top;
            int frq = 0;
            for (const auto& [j, n] : occ) {
                frq += n;
                const int vol = vol_from[j];
                const double sc = prefix_formula(frq, vol, options.alpha);
                if (!top || sc > top->score)
                    top = PrefixScore{sc, frq, vol, static_cast<int>(pos - j + 1)};
            }
            auto it = best.find(c);
            if (it == best.end())
                best.emplace(c, Best{*top, li});
            else if (it->second.prefix.score < top->score)
                it->second = Best{*top, li};
        }
    }

    std::vector<ScoredNegation> out;
    for (const auto& [c, b] : best) {
        if (holds(kb, e, c)) continue;
        ScoredNegation n;
        n.stmt = NegativeStatement::from_candidate(e, c);
        n.score = b.prefix.score;
        n.frq = b.prefix.frq;
        n.vol = b.prefix.vol;
        n.prefix_len = b.prefix.prefix_len;
        n.group = lists[b.list].label;
        n.verbalization = verbalize_ordered(n.frq, n.vol, lists[b.list].noun);
        out.push_back(std::move(n));
    }
    sort_and_truncate(out, options.k);
    return out;
}

}  // namespace negkb

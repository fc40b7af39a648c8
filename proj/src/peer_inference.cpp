#include "negkb/peer_inference.hpp"

#include <algorithm>
#include <map>

namespace negkb {

std::vector<Candidate> peer_statements(const KnowledgeBase& kb, EntityId peer) {
    std::vector<Candidate> out;
    for (PropertyId p : kb.properties(peer)) out.push_back(Candidate{p, std::nullopt});
    for (const auto& [p, o] : kb.po_pairs(peer)) {
        if (!kb.is_literal(o)) out.push_back(Candidate{p, o});
    }
    return out;
}

bool holds(const KnowledgeBase& kb, EntityId e, const Candidate& c) {
    return c.object ? kb.contains(Triple{e, c.property, *c.object}) : kb.has_property(e, c.property);
}

std::string verbalize_peer(int frq, int vol, std::string_view noun) {
    return "unlike " + std::to_string(frq) + " of " + std::to_string(vol) + " similar " +
           std::string(noun);
}

std::vector<ScoredNegation> infer_candidates(const KnowledgeBase& kb, EntityId e,
                                             const std::vector<PeerGroup>& groups,
                                             const InferOptions& options) {
    if (options.k < 1) throw InputError("k must be >= 1");
    if (options.s < 1) throw InputError("s must be >= 1");

    struct Best {
        double score = -1.0;
        int frq = 0;
        int vol = 0;
        std::size_t group = 0;
        double sum = 0.0;
        int groups_seen = 0;
    };
    std::map<Candidate, Best> best;

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& group = groups[gi];
        if (group.members.empty()) continue;
        std::map<Candidate, int> counts;
        for (EntityId peer : group.members) {
            if (peer == e) continue;
            for (const auto& c : peer_statements(kb, peer)) ++counts[c];
        }
        const int vol = options.normalize == Normalization::by_s
                            ? static_cast<int>(options.s)
                            : static_cast<int>(group.members.size());
        for (const auto& [c, count] : counts) {
            const double sc = static_cast<double>(count) / vol;
            auto& b = best[c];
            b.sum += sc;
            ++b.groups_seen;
            if (b.score < sc) {
                b.score = sc;
                b.frq = count;
                b.vol = vol;
                b.group = gi;
            }
        }
    }

    std::vector<ScoredNegation> out;
    for (const auto& [c, b] : best) {
        if (holds(kb, e, c)) continue;
        ScoredNegation n;
        n.stmt = NegativeStatement::from_candidate(e, c);
        n.score = options.combine == CombineMode::max ? b.score : b.sum / b.groups_seen;
        n.frq = b.frq;
        n.vol = b.vol;
        n.group = groups[b.group].label;
        n.verbalization = verbalize_peer(b.frq, b.vol, options.noun);
        out.push_back(std::move(n));
    }
    sort_and_truncate(out, options.k);
    return out;
}

std::vector<ScoredNegation> pca_filter(const KnowledgeBase& kb,
                                       const std::vector<ScoredNegation>& candidates) {
    std::vector<ScoredNegation> out;
    for (const auto& n : candidates) {
        if (n.stmt.kind != StatementKind::grounded) continue;
        if (!kb.has_property(n.stmt.subject, n.stmt.property)) continue;
        out.push_back(n);
    }
    return out;
}

SubsumptionResult subsumption_filter(const KnowledgeBase& kb,
                                     const std::vector<ScoredNegation>& candidates, int hops) {
    if (hops < 1 || hops > 2) throw InputError("subsumption hops must be 1 or 2");
    SubsumptionResult result;
    for (const auto& n : candidates) {
        const auto& st = n.stmt;
        std::string reason;

        if (st.kind == StatementKind::grounded) {
            for (EntityId other : kb.objects(st.subject, st.property)) {
                auto up = kb.class_ancestors(other, hops);
                if (std::binary_search(up.begin(), up.end(), st.object)) {
                    reason = "(" + kb.name(st.property) + ", " + kb.name(other) + ") holds and " +
                             kb.name(other) + " is a subclass of " + kb.name(st.object);
                    break;
                }
            }
        }
        if (reason.empty() && st.kind != StatementKind::conditional) {
            for (PropertyId sub : kb.properties(st.subject)) {
                if (sub == st.property) continue;
                auto up = kb.property_ancestors(sub, hops);
                if (!std::binary_search(up.begin(), up.end(), st.property)) continue;
                if (st.kind == StatementKind::universal ||
                    kb.contains(Triple{st.subject, sub, st.object})) {
                    reason = kb.name(sub) + " holds and is a subproperty of " +
                             kb.name(st.property);
                    break;
                }
            }
        }

        if (reason.empty())
            result.kept.push_back(n);
        else
            result.rejected.push_back(Rejection{n, std::move(reason)});
    }
    return result;
}

}  // namespace negkb

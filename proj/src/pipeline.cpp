#include "negkb/pipeline.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "negkb/util.hpp"

namespace negkb {

Session Session::open(const RunConfig& config) {
    if (!config.triples) throw InputError("no triples file configured");
    check_paths_exist(config);
    auto loaded = load_kb(KbPaths{*config.triples, config.qualifiers, config.popularity,
                                  config.hierarchy});
    Session session{config, std::move(loaded.kb), std::nullopt, std::move(loaded.warnings)};
    if (config.embeddings) {
        std::size_t skipped = 0;
        session.embeddings = EmbeddingTable::load(*config.embeddings, session.kb, &skipped);
        if (skipped)
            session.warnings.push_back(std::to_string(skipped) +
                                       " embedding rows name unknown entities");
    }
    if (config.peering == PeeringMode::embedding && !session.embeddings)
        throw InputError("embedding peering needs an embeddings file");
    return session;
}

EntityId Session::entity(std::string_view name) const {
    auto id = kb.find_entity(name);
    if (!id) throw InputError("unknown entity '" + std::string(name) + "'");
    return *id;
}

std::vector<PeerGroup> peer_groups_for(const Session& session, EntityId e) {
    const auto& cfg = session.config;
    if (cfg.peering == PeeringMode::embedding) {
        if (!session.embeddings->contains(e)) return {};
        return {embedding_peers(session.kb, *session.embeddings, e, cfg.embedding_k)};
    }
    auto facet = session.kb.find_property(cfg.facet_property);
    if (!facet) return {};
    return facet_peer_groups(session.kb, e, *facet, cfg.s, cfg.min_pop_ratio);
}

EntityResult infer_entity(const Session& session, EntityId e) {
    const auto& cfg = session.config;
    EntityResult result;
    const auto& name = session.kb.name(e);
    auto groups = peer_groups_for(session, e);
    const bool any_peer = std::any_of(groups.begin(), groups.end(),
                                      [](const PeerGroup& g) { return !g.members.empty(); });
    if (!any_peer) {
        result.notices.push_back(name + ": no peers");
        return result;
    }
    auto options = cfg.infer_options();
    options.k = std::numeric_limits<std::size_t>::max();
    result.rows = infer_candidates(session.kb, e, groups, options);
    if (cfg.pca) result.rows = pca_filter(session.kb, result.rows);
    if (cfg.subsumption) {
        auto filtered = subsumption_filter(session.kb, result.rows, cfg.subsumption_hops);
        for (const auto& r : filtered.rejected)
            result.notices.push_back(name + ": dropped " +
                                     statement_id(session.kb, r.negation.stmt) + " (" + r.reason +
                                     ")");
        result.rows = std::move(filtered.kept);
    }
    return result;
}

namespace {

void attach_features(const Session& session, std::vector<EntityResult>& results,
                     NormScope scope) {
    const auto& cfg = session.config;
    std::optional<PivotRegistry> pivots;
    if (session.embeddings) {
        std::vector<ScoredNegation> all;
        for (const auto& r : results) all.insert(all.end(), r.rows.begin(), r.rows.end());
        PivotTrainingConfig pc{cfg.pivot_epochs, cfg.pivot_learning_rate, cfg.seed};
        pivots = train_pivots_for(session.kb, *session.embeddings, all, cfg.pivot_per_class, pc);
    }
    const EmbeddingTable* emb = session.embeddings ? &*session.embeddings : nullptr;
    const PivotRegistry* reg = pivots ? &*pivots : nullptr;
    for (auto& r : results) {
        r.features.clear();
        for (const auto& n : r.rows) r.features.push_back(raw_features(session.kb, emb, reg, n));
    }
    if (scope == NormScope::entity) {
        for (auto& r : results) normalize_features(r.features);
        return;
    }
    std::vector<FeatureVector> all;
    for (const auto& r : results) all.insert(all.end(), r.features.begin(), r.features.end());
    normalize_features(all);
    std::size_t at = 0;
    for (auto& r : results) {
        for (auto& fv : r.features) fv = all[at++];
    }
}

}  // namespace

std::vector<EntityResult> infer_batch(const Session& session, const std::vector<EntityId>& entities,
                                      const std::optional<EnsembleModel>& model, std::size_t jobs) {
    auto results = parallel_map<EntityResult>(
        entities.size(), jobs, [&](std::size_t i) { return infer_entity(session, entities[i]); });
    if (model) {
        attach_features(session, results, model->norm_scope);
        for (auto& r : results) {
            for (std::size_t i = 0; i < r.rows.size(); ++i)
                r.rows[i].score = ensemble_score(*model, r.features[i], r.rows[i].stmt.kind);
            // keep features aligned with rows through the sort
            std::vector<std::pair<ScoredNegation, FeatureVector>> paired;
            for (std::size_t i = 0; i < r.rows.size(); ++i)
                paired.emplace_back(r.rows[i], r.features[i]);
            std::stable_sort(paired.begin(), paired.end(), [](const auto& a, const auto& b) {
                return rank_before(a.first, b.first);
            });
            if (paired.size() > session.config.k) paired.resize(session.config.k);
            r.rows.clear();
            r.features.clear();
            for (auto& [n, fv] : paired) {
                r.rows.push_back(std::move(n));
                r.features.push_back(fv);
            }
        }
    } else {
        for (auto& r : results) sort_and_truncate(r.rows, session.config.k);
    }
    return results;
}

std::vector<EntityResult> feature_batch(const Session& session,
                                        const std::vector<EntityId>& entities, std::size_t jobs) {
    auto results = parallel_map<EntityResult>(entities.size(), jobs, [&](std::size_t i) {
        auto r = infer_entity(session, entities[i]);
        sort_and_truncate(r.rows, std::numeric_limits<std::size_t>::max());
        return r;
    });
    attach_features(session, results, session.config.norm_scope);
    return results;
}

OrderedIndex::OrderedIndex(const Session& session) {
    const auto& cfg = session.config;
    lists_ = tq_groups(session.kb, cfg.tq_min_size);
    auto chains = tp_chains(session.kb,
                            chain_properties(session.kb, cfg.follows_property,
                                             cfg.followed_by_property),
                            cfg.tp_min_size, cfg.tp_max_size);
    lists_.insert(lists_.end(), std::make_move_iterator(chains.begin()),
                  std::make_move_iterator(chains.end()));
    for (std::size_t i = 0; i < lists_.size(); ++i) {
        for (const auto& slot : lists_[i].slots) {
            for (EntityId m : slot) {
                auto& v = membership_[m];
                if (v.empty() || v.back() != i) v.push_back(i);
            }
        }
    }
}

std::vector<OrderedPeerList> OrderedIndex::lists_for(EntityId e) const {
    std::vector<OrderedPeerList> out;
    auto it = membership_.find(e);
    if (it == membership_.end()) return out;
    for (std::size_t i : it->second) out.push_back(lists_[i]);
    return out;
}

EntityResult ordered_entity(const Session& session, const OrderedIndex& index, EntityId e) {
    EntityResult result;
    auto lists = index.lists_for(e);
    if (lists.empty()) {
        result.notices.push_back(session.kb.name(e) + ": no ordered peers");
        return result;
    }
    result.rows = infer_ordered(session.kb, e, lists,
                                OrderedOptions{session.config.k, session.config.alpha});
    return result;
}

std::vector<NegativeStatement> read_negations(const std::filesystem::path& path,
                                              const KnowledgeBase& kb) {
    std::vector<NegativeStatement> out;
    std::optional<std::size_t> c_subject, c_kind, c_property, c_object;
    bool header = true;
    for_each_tsv_row(path, [&](std::size_t line, const std::vector<std::string_view>& f) {
        auto where = path.string() + ":" + std::to_string(line) + ": ";
        if (header) {
            header = false;
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (f[i] == "subject") c_subject = i;
                else if (f[i] == "kind") c_kind = i;
                else if (f[i] == "property") c_property = i;
                else if (f[i] == "object") c_object = i;
            }
            if (!c_subject || !c_kind || !c_property || !c_object)
                throw InputError(where + "expected columns subject, kind, property, object");
            return;
        }
        const std::size_t need = std::max({*c_subject, *c_kind, *c_property, *c_object}) + 1;
        if (f.size() < need) throw InputError(where + "too few columns");
        StatementKind kind;
        try {
            kind = parse_statement_kind(f[*c_kind]);
        } catch (const InputError& e) {
            throw InputError(where + e.what());
        }
        if (kind == StatementKind::conditional) return;
        auto s = kb.find_entity(f[*c_subject]);
        auto p = kb.find_property(f[*c_property]);
        if (!s) throw InputError(where + "unknown entity '" + std::string(f[*c_subject]) + "'");
        if (!p) throw InputError(where + "unknown property '" + std::string(f[*c_property]) + "'");
        if (kind == StatementKind::universal) {
            out.push_back(NegativeStatement::universal(*s, *p));
            return;
        }
        auto o = kb.find_entity(f[*c_object]);
        if (!o) throw InputError(where + "unknown entity '" + std::string(f[*c_object]) + "'");
        out.push_back(NegativeStatement::grounded(*s, *p, *o));
    });
    return out;
}

std::vector<NegativeStatement> grounded_for_lifting(const Session& session, EntityId e) {
    std::vector<NegativeStatement> out;
    for (const auto& n : infer_entity(session, e).rows) {
        if (n.stmt.kind == StatementKind::grounded) out.push_back(n.stmt);
    }
    return out;
}

CoverageResult measure_coverage(const Session& session, std::size_t n, CoverageMode mode,
                                std::size_t jobs) {
    auto pool = session.kb.subjects();
    std::mt19937_64 rng(derive_seed(session.config.seed, "coverage"));
    std::shuffle(pool.begin(), pool.end(), rng);
    if (pool.size() > n) pool.resize(n);
    std::sort(pool.begin(), pool.end());

    std::optional<OrderedIndex> index;
    if (mode == CoverageMode::ordered) index.emplace(session);
    auto hits = parallel_map<int>(pool.size(), jobs, [&](std::size_t i) {
        if (mode == CoverageMode::ordered)
            return ordered_entity(session, *index, pool[i]).rows.empty() ? 0 : 1;
        return infer_entity(session, pool[i]).rows.empty() ? 0 : 1;
    });
    CoverageResult result;
    result.sampled = pool.size();
    for (int h : hits) result.covered += static_cast<std::size_t>(h);
    return result;
}

}  // namespace negkb

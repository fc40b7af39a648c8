#include "negkb/peering.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <map>
#include <set>

namespace negkb {

std::optional<std::size_t> anchor_slot(const KnowledgeBase& kb, const OrderedPeerList& list,
                                       EntityId e) {
    for (std::size_t j = 0; j < list.slots.size(); ++j) {
        const auto& slot = list.slots[j];
        if (std::find(slot.begin(), slot.end(), e) != slot.end()) {
            if (j == 0) return std::nullopt;
            return j - 1;
        }
    }
    if (list.key && !list.slots.empty() &&
        kb.contains(Triple{e, list.key->first, list.key->second}))
        return list.slots.size() - 1;
    return std::nullopt;
}

// --- embeddings --------------------------------------------------------------

std::size_t EmbeddingTable::index_of(EntityId e) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), e);
    if (it == ids_.end() || *it != e) return ids_.size();
    return static_cast<std::size_t>(it - ids_.begin());
}

void EmbeddingTable::add(EntityId e, std::vector<double> vec) {
    if (vec.empty()) throw InputError("empty embedding vector");
    if (ids_.empty())
        dim_ = vec.size();
    else if (vec.size() != dim_)
        throw InputError("embedding dimension " + std::to_string(vec.size()) + " != " +
                         std::to_string(dim_));
    double sq = 0.0;
    for (double x : vec) {
        if (!std::isfinite(x)) throw InputError("non-finite embedding value");
        sq += x * x;
    }
    auto it = std::lower_bound(ids_.begin(), ids_.end(), e);
    if (it != ids_.end() && *it == e) throw InputError("duplicate embedding");
    const auto row = static_cast<std::size_t>(it - ids_.begin());
    ids_.insert(it, e);
    data_.insert(data_.begin() + static_cast<std::ptrdiff_t>(row * dim_), vec.begin(), vec.end());
    norms_.insert(norms_.begin() + static_cast<std::ptrdiff_t>(row), std::sqrt(sq));
}

const double* EmbeddingTable::find(EntityId e) const {
    auto i = index_of(e);
    return i == ids_.size() ? nullptr : data_.data() + i * dim_;
}

std::span<const double> EmbeddingTable::vector(EntityId e) const {
    auto i = index_of(e);
    if (i == ids_.size()) return {};
    return {data_.data() + i * dim_, dim_};
}

double EmbeddingTable::cosine(EntityId a, EntityId b) const {
    auto i = index_of(a);
    auto j = index_of(b);
    if (i == ids_.size() || j == ids_.size()) return 0.0;
    if (norms_[i] == 0.0 || norms_[j] == 0.0) return 0.0;
    const double* x = data_.data() + i * dim_;
    const double* y = data_.data() + j * dim_;
    double dot = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) dot += x[d] * y[d];
    return dot / (norms_[i] * norms_[j]);
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path, const KnowledgeBase& kb,
                                    std::size_t* skipped) {
    EmbeddingTable table;
    std::size_t unknown = 0;
    for_each_tsv_row(path, [&](std::size_t, const auto& f) {
        if (f.size() != 2 || f[0].empty())
            throw InputError("expected 'entity<TAB>v1 v2 ...'");
        std::vector<double> vec;
        std::string_view rest = f[1];
        while (!rest.empty()) {
            auto sp = rest.find(' ');
            auto tok = rest.substr(0, sp);
            if (!tok.empty()) {
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
                if (ec != std::errc{} || ptr != tok.data() + tok.size())
                    throw InputError("bad embedding value '" + std::string(tok) + "'");
                vec.push_back(v);
            }
            if (sp == std::string_view::npos) break;
            rest.remove_prefix(sp + 1);
        }
        auto id = kb.find_entity(f[0]);
        if (!id) {
            ++unknown;
            return;
        }
        table.add(*id, std::move(vec));
    });
    if (skipped) *skipped = unknown;
    return table;
}

// --- unordered peers -----------------------------------------------------------

std::vector<PeerGroup> facet_peer_groups(const KnowledgeBase& kb, EntityId e, PropertyId facet,
                                         std::size_t s, double min_pop_ratio) {
    if (s < 1) throw InputError("peer group size s must be >= 1");
    if (min_pop_ratio < 0.0 || min_pop_ratio > 1.0)
        throw InputError("min_pop_ratio must be in [0,1]");

    const double threshold = min_pop_ratio * static_cast<double>(kb.popularity(e));
    std::vector<PeerGroup> groups;
    for (EntityId v : kb.objects(e, facet)) {
        if (kb.is_literal(v)) continue;
        std::vector<EntityId> members;
        for (EntityId c : kb.subjects(facet, v)) {
            if (c == e) continue;
            if (static_cast<double>(kb.popularity(c)) < threshold) continue;
            members.push_back(c);
        }
        std::stable_sort(members.begin(), members.end(), [&](EntityId a, EntityId b) {
            return kb.popularity(a) > kb.popularity(b);
        });
        if (members.size() > s) members.resize(s);
        std::sort(members.begin(), members.end());
        groups.push_back(PeerGroup{kb.name(facet) + "=" + kb.name(v), std::move(members)});
    }
    return groups;
}

PeerGroup embedding_peers(const KnowledgeBase& kb, const EmbeddingTable& emb, EntityId e,
                          std::size_t k) {
    if (!emb.contains(e)) throw InputError("no embedding for entity '" + kb.name(e) + "'");
    std::vector<std::pair<double, EntityId>> scored;
    for (EntityId c : emb.entities()) {
        if (c != e) scored.emplace_back(emb.cosine(e, c), c);
    }
    auto cmp = [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    };
    const auto take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                      scored.end(), cmp);
    PeerGroup group{"embedding neighbours of " + kb.name(e), {}};
    for (std::size_t i = 0; i < take; ++i) group.members.push_back(scored[i].second);
    return group;
}

// --- ordered peers -------------------------------------------------------------

std::vector<OrderedPeerList> tq_groups(const KnowledgeBase& kb, std::size_t min_size) {
    if (min_size < 1) throw InputError("tq min_size must be >= 1");
    std::vector<OrderedPeerList> lists;
    for (std::uint32_t pi = 0; pi < kb.property_count(); ++pi) {
        const PropertyId p{pi};
        auto rows = kb.by_property(p);
        for (std::size_t lo = 0; lo < rows.size();) {
            std::size_t hi = lo;
            while (hi < rows.size() && rows[hi].o == rows[lo].o) ++hi;
            const EntityId o = rows[lo].o;
            const auto members = rows.subspan(lo, hi - lo);
            lo = hi;
            if (kb.is_literal(o) || members.size() < min_size) continue;

            std::vector<std::pair<std::optional<Date>, EntityId>> keyed;
            bool any_dated = false;
            for (const auto& t : members) {
                std::optional<Date> key;
                if (const Qualifier* q = kb.qualifier(t)) key = q->point ? q->point : q->end;
                any_dated = any_dated || key.has_value();
                keyed.emplace_back(key, t.s);
            }
            if (!any_dated) continue;
            // Undated sorts last.
            std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
                if (a.first.has_value() != b.first.has_value()) return a.first.has_value();
                if (a.first && *a.first != *b.first) return *a.first < *b.first;
                return a.second < b.second;
            });

            OrderedPeerList list;
            list.label = kb.name(p) + "=" + kb.name(o);
            list.noun = "entities with " + kb.name(p) + " " + kb.name(o);
            list.key = std::make_pair(p, o);
            for (std::size_t i = 0; i < keyed.size(); ++i) {
                if (i == 0 || keyed[i].first != keyed[i - 1].first) list.slots.emplace_back();
                list.slots.back().push_back(keyed[i].second);
            }
            lists.push_back(std::move(list));
        }
    }
    return lists;
}

ChainProperties chain_properties(const KnowledgeBase& kb, std::string_view follows,
                                 std::string_view followed_by) {
    return ChainProperties{kb.find_property(follows), kb.find_property(followed_by)};
}

namespace {

using Adjacency = std::map<std::uint32_t, std::vector<std::uint32_t>>;

class LongestPathSearch {
public:
    LongestPathSearch(const Adjacency& adj, std::size_t cap) : adj_(adj), cap_(cap) {}

    // Longest simple path starting at `start`. Successors are tried in id
    // order and only a strictly longer path replaces the best, so among
    // equal lengths the lexicographically smallest successor sequence wins.
    std::vector<std::uint32_t> from(std::uint32_t start) {
        best_.clear();
        path_.assign(1, start);
        on_path_ = {start};
        dfs(start);
        return best_;
    }

private:
    void dfs(std::uint32_t node) {
        if (path_.size() > best_.size()) best_ = path_;
        if (path_.size() >= cap_) return;
        auto it = adj_.find(node);
        if (it == adj_.end()) return;
        for (auto next : it->second) {
            if (on_path_.count(next)) continue;
            path_.push_back(next);
            on_path_.insert(next);
            dfs(next);
            on_path_.erase(next);
            path_.pop_back();
        }
    }

    const Adjacency& adj_;
    std::size_t cap_;
    std::vector<std::uint32_t> best_;
    std::vector<std::uint32_t> path_;
    std::set<std::uint32_t> on_path_;
};

}  // namespace

std::vector<OrderedPeerList> tp_chains(const KnowledgeBase& kb, const ChainProperties& props,
                                       std::size_t min_size, std::size_t max_size) {
    if (min_size < 1 || min_size > max_size)
        throw InputError("tp chain sizes must satisfy 1 <= min_size <= max_size");

    Adjacency succ;
    Adjacency pred;
    auto add_edge = [&](EntityId older, EntityId newer) {
        if (older == newer || kb.is_literal(older) || kb.is_literal(newer)) return;
        succ[older.value].push_back(newer.value);
        pred[newer.value].push_back(older.value);
    };
    if (props.followed_by) {
        for (const auto& t : kb.by_property(*props.followed_by)) add_edge(t.s, t.o);
    }
    if (props.follows) {
        for (const auto& t : kb.by_property(*props.follows)) add_edge(t.o, t.s);
    }
    std::set<std::uint32_t> nodes;
    for (auto* adj : {&succ, &pred}) {
        for (auto& [node, next] : *adj) {
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            nodes.insert(node);
        }
    }

    // Chains longer than max_size are discarded, so the search never needs
    // to go past max_size + 1 nodes.
    LongestPathSearch forward(succ, max_size + 1);
    LongestPathSearch backward(pred, max_size + 1);
    std::set<std::vector<std::uint32_t>> chains;
    for (auto x : nodes) {
        auto f = forward.from(x);
        auto b = backward.from(x);
        std::vector<std::uint32_t> chain;
        std::set<std::uint32_t> tail(f.begin() + 1, f.end());
        const bool disjoint = std::none_of(b.begin() + 1, b.end(),
                                           [&](std::uint32_t n) { return tail.count(n) > 0; });
        if (disjoint) {
            chain.assign(b.rbegin(), b.rend());
            chain.insert(chain.end(), f.begin() + 1, f.end());
        } else if (b.size() > f.size()) {
            chain.assign(b.rbegin(), b.rend());
        } else {
            chain = f;
        }
        if (chain.size() >= min_size && chain.size() <= max_size) chains.insert(std::move(chain));
    }

    std::vector<OrderedPeerList> lists;
    for (const auto& chain : chains) {
        OrderedPeerList list;
        const auto& first = kb.name(EntityId{chain.front()});
        const auto& last = kb.name(EntityId{chain.back()});
        list.label = "chain " + first + " .. " + last;
        list.noun = "items in the series starting with " + first;
        for (auto n : chain) list.slots.push_back({EntityId{n}});
        lists.push_back(std::move(list));
    }
    return lists;
}

}  // namespace negkb

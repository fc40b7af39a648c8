#include "negkb/kb.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>

namespace negkb {

namespace {

bool pos_less(const Triple& a, const Triple& b) {
    return std::tie(a.p, a.o, a.s) < std::tie(b.p, b.o, b.s);
}

template <class Map, class NodeId>
std::vector<NodeId> bfs_ancestors(const Map& edges, NodeId start, int hops) {
    std::vector<NodeId> out;
    if (hops <= 0) return out;
    std::set<std::uint32_t> seen{start.value};
    std::vector<std::uint32_t> frontier{start.value};
    for (int h = 0; h < hops && !frontier.empty(); ++h) {
        std::vector<std::uint32_t> next;
        for (auto node : frontier) {
            auto it = edges.find(node);
            if (it == edges.end()) continue;
            for (auto parent : it->second) {
                if (seen.insert(parent).second) next.push_back(parent);
            }
        }
        frontier = std::move(next);
    }
    seen.erase(start.value);
    for (auto v : seen) out.push_back(NodeId{v});
    return out;
}

}  // namespace

std::optional<EntityId> KnowledgeBase::find_entity(std::string_view name) const {
    auto it = term_index_.find(std::string(name));
    if (it == term_index_.end()) return std::nullopt;
    return EntityId{it->second};
}

std::optional<PropertyId> KnowledgeBase::find_property(std::string_view name) const {
    auto it = prop_index_.find(std::string(name));
    if (it == prop_index_.end()) return std::nullopt;
    return PropertyId{it->second};
}

bool KnowledgeBase::is_literal(EntityId id) const {
    const auto& n = terms_[id.value];
    return !n.empty() && n.front() == '"';
}

std::span<const Triple> KnowledgeBase::by_subject(EntityId s) const {
    if (s.value + 1 >= subject_offsets_.size()) return {};
    return std::span<const Triple>(spo_).subspan(
        subject_offsets_[s.value], subject_offsets_[s.value + 1] - subject_offsets_[s.value]);
}

std::span<const Triple> KnowledgeBase::by_subject_property(EntityId s, PropertyId p) const {
    auto rows = by_subject(s);
    auto lo = std::lower_bound(rows.begin(), rows.end(), p,
                               [](const Triple& t, PropertyId key) { return t.p < key; });
    auto hi = std::upper_bound(lo, rows.end(), p,
                               [](PropertyId key, const Triple& t) { return key < t.p; });
    return {lo, hi};
}

std::span<const Triple> KnowledgeBase::by_property(PropertyId p) const {
    if (p.value + 1 >= property_offsets_.size()) return {};
    return std::span<const Triple>(pos_).subspan(
        property_offsets_[p.value], property_offsets_[p.value + 1] - property_offsets_[p.value]);
}

std::span<const Triple> KnowledgeBase::by_property_object(PropertyId p, EntityId o) const {
    auto rows = by_property(p);
    auto lo = std::lower_bound(rows.begin(), rows.end(), o,
                               [](const Triple& t, EntityId key) { return t.o < key; });
    auto hi = std::upper_bound(lo, rows.end(), o,
                               [](EntityId key, const Triple& t) { return key < t.o; });
    return {lo, hi};
}

bool KnowledgeBase::contains(const Triple& t) const {
    auto rows = by_subject(t.s);
    return std::binary_search(rows.begin(), rows.end(), t);
}

std::vector<std::pair<PropertyId, EntityId>> KnowledgeBase::po_pairs(EntityId e) const {
    std::vector<std::pair<PropertyId, EntityId>> out;
    for (const auto& t : by_subject(e)) out.emplace_back(t.p, t.o);
    return out;
}

std::vector<PropertyId> KnowledgeBase::properties(EntityId e) const {
    std::vector<PropertyId> out;
    for (const auto& t : by_subject(e)) {
        if (out.empty() || out.back() != t.p) out.push_back(t.p);
    }
    return out;
}

std::vector<EntityId> KnowledgeBase::objects(EntityId s, PropertyId p) const {
    std::vector<EntityId> out;
    for (const auto& t : by_subject_property(s, p)) out.push_back(t.o);
    return out;
}

std::vector<EntityId> KnowledgeBase::subjects(PropertyId p, EntityId o) const {
    std::vector<EntityId> out;
    for (const auto& t : by_property_object(p, o)) out.push_back(t.s);
    return out;
}

std::vector<EntityId> KnowledgeBase::subjects() const {
    std::vector<EntityId> out;
    for (std::uint32_t i = 0; i + 1 < subject_offsets_.size(); ++i) {
        if (subject_offsets_[i] != subject_offsets_[i + 1]) out.push_back(EntityId{i});
    }
    return out;
}

std::uint64_t KnowledgeBase::popularity(EntityId e) const {
    return e.value < popularity_.size() ? popularity_[e.value] : 0;
}

const Qualifier* KnowledgeBase::qualifier(const Triple& t) const {
    auto it = std::lower_bound(qualifiers_.begin(), qualifiers_.end(), t,
                               [](const Qualifier& q, const Triple& key) { return q.triple < key; });
    if (it == qualifiers_.end() || it->triple != t) return nullptr;
    return &*it;
}

std::vector<EntityId> KnowledgeBase::class_ancestors(EntityId node, int hops) const {
    return bfs_ancestors(subclass_, node, hops);
}

std::vector<PropertyId> KnowledgeBase::property_ancestors(PropertyId node, int hops) const {
    return bfs_ancestors(subproperty_, node, hops);
}

std::vector<EntityId> KnowledgeBase::types(EntityId e) const {
    std::vector<EntityId> out;
    if (auto it = instance_of_.find(e.value); it != instance_of_.end()) {
        for (auto c : it->second) out.push_back(EntityId{c});
    }
    return out;
}

// --- builder ---------------------------------------------------------------

void KbBuilder::add_triple(std::string s, std::string p, std::string o) {
    triples_.emplace_back(std::move(s), std::move(p), std::move(o));
}

bool KbBuilder::add_qualifier(const std::string& s, const std::string& p, const std::string& o,
                              QualifierKind kind, Date date) {
    auto& q = qualifiers_[RawTriple{s, p, o}];
    std::optional<Date>* slot = nullptr;
    switch (kind) {
    case QualifierKind::start: slot = &q.start; break;
    case QualifierKind::end: slot = &q.end; break;
    case QualifierKind::point: slot = &q.point; break;
    }
    const bool fresh = !slot->has_value();
    *slot = date;
    if (q.point && (q.start || q.end))
        throw InputError("point qualifier mixed with start/end on one statement");
    if (q.start && q.end && *q.end < *q.start) throw InputError("start date after end date");
    return fresh;
}

void KbBuilder::set_popularity(std::string entity, std::uint64_t views) {
    popularity_[std::move(entity)] = views;
}

void KbBuilder::add_hierarchy(std::string child, HierarchyRelation rel, std::string parent) {
    hierarchy_.emplace_back(std::move(child), rel, std::move(parent));
}

KnowledgeBase KbBuilder::build(std::vector<std::string>* warnings) const {
    KnowledgeBase kb;

    std::set<std::string> terms;
    std::set<std::string> props;
    for (const auto& [s, p, o] : triples_) {
        terms.insert(s);
        props.insert(p);
        terms.insert(o);
    }
    for (const auto& [e, views] : popularity_) terms.insert(e);
    for (const auto& [child, rel, parent] : hierarchy_) {
        if (rel == HierarchyRelation::subproperty) {
            props.insert(child);
            props.insert(parent);
        } else {
            terms.insert(child);
            terms.insert(parent);
        }
    }

    kb.terms_.assign(terms.begin(), terms.end());
    kb.props_.assign(props.begin(), props.end());
    for (std::uint32_t i = 0; i < kb.terms_.size(); ++i) kb.term_index_.emplace(kb.terms_[i], i);
    for (std::uint32_t i = 0; i < kb.props_.size(); ++i) kb.prop_index_.emplace(kb.props_[i], i);

    auto term = [&](const std::string& n) { return EntityId{kb.term_index_.at(n)}; };
    auto prop = [&](const std::string& n) { return PropertyId{kb.prop_index_.at(n)}; };

    kb.spo_.reserve(triples_.size());
    for (const auto& [s, p, o] : triples_) kb.spo_.push_back(Triple{term(s), prop(p), term(o)});
    std::sort(kb.spo_.begin(), kb.spo_.end());
    kb.spo_.erase(std::unique(kb.spo_.begin(), kb.spo_.end()), kb.spo_.end());

    kb.pos_ = kb.spo_;
    std::sort(kb.pos_.begin(), kb.pos_.end(), pos_less);

    kb.subject_offsets_.assign(kb.terms_.size() + 1, 0);
    for (const auto& t : kb.spo_) ++kb.subject_offsets_[t.s.value + 1];
    for (std::size_t i = 1; i < kb.subject_offsets_.size(); ++i)
        kb.subject_offsets_[i] += kb.subject_offsets_[i - 1];

    kb.property_offsets_.assign(kb.props_.size() + 1, 0);
    for (const auto& t : kb.pos_) ++kb.property_offsets_[t.p.value + 1];
    for (std::size_t i = 1; i < kb.property_offsets_.size(); ++i)
        kb.property_offsets_[i] += kb.property_offsets_[i - 1];

    for (const auto& [raw, q] : qualifiers_) {
        const auto& [s, p, o] = raw;
        auto s_it = kb.term_index_.find(s);
        auto p_it = kb.prop_index_.find(p);
        auto o_it = kb.term_index_.find(o);
        std::optional<Triple> t;
        if (s_it != kb.term_index_.end() && p_it != kb.prop_index_.end() &&
            o_it != kb.term_index_.end()) {
            t = Triple{EntityId{s_it->second}, PropertyId{p_it->second}, EntityId{o_it->second}};
        }
        if (!t || !kb.contains(*t)) {
            if (warnings)
                warnings->push_back("qualifier for unknown statement (" + s + ", " + p + ", " + o +
                                    ") ignored");
            continue;
        }
        kb.qualifiers_.push_back(Qualifier{*t, q.start, q.end, q.point});
    }
    std::sort(kb.qualifiers_.begin(), kb.qualifiers_.end(),
              [](const Qualifier& a, const Qualifier& b) { return a.triple < b.triple; });

    if (!popularity_.empty()) {
        kb.popularity_.assign(kb.terms_.size(), 0);
        for (const auto& [e, views] : popularity_) kb.popularity_[kb.term_index_.at(e)] = views;
    }

    for (const auto& [child, rel, parent] : hierarchy_) {
        switch (rel) {
        case HierarchyRelation::subclass:
            kb.subclass_[term(child).value].push_back(term(parent).value);
            break;
        case HierarchyRelation::subproperty:
            kb.subproperty_[prop(child).value].push_back(prop(parent).value);
            break;
        case HierarchyRelation::instance_of:
            kb.instance_of_[term(child).value].push_back(term(parent).value);
            break;
        }
    }
    for (auto* m : {&kb.subclass_, &kb.subproperty_, &kb.instance_of_}) {
        for (auto& [k, v] : *m) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    }
    return kb;
}

// --- file loading ----------------------------------------------------------

std::vector<std::string_view> split_tabs(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return out;
}

void for_each_tsv_row(
    const std::filesystem::path& path,
    const std::function<void(std::size_t, const std::vector<std::string_view>&)>& fn) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (view.empty() || view.front() == '#') continue;
        try {
            fn(lineno, split_tabs(view));
        } catch (const InputError& err) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + err.what());
        }
    }
}

namespace {

void expect_fields(const std::vector<std::string_view>& f, std::size_t n) {
    if (f.size() != n)
        throw InputError("expected " + std::to_string(n) + " tab-separated fields, got " +
                         std::to_string(f.size()));
    for (auto field : f) {
        if (field.empty()) throw InputError("empty field");
    }
}

}  // namespace

LoadedKb load_kb(const KbPaths& paths) {
    KbBuilder builder;
    LoadedKb result;

    for_each_tsv_row(paths.triples, [&](std::size_t, const auto& f) {
        expect_fields(f, 3);
        builder.add_triple(std::string(f[0]), std::string(f[1]), std::string(f[2]));
    });

    if (paths.qualifiers) {
        for_each_tsv_row(*paths.qualifiers, [&](std::size_t lineno, const auto& f) {
            expect_fields(f, 5);
            QualifierKind kind;
            if (f[3] == "start")
                kind = QualifierKind::start;
            else if (f[3] == "end")
                kind = QualifierKind::end;
            else if (f[3] == "point")
                kind = QualifierKind::point;
            else
                throw InputError("unknown qualifier kind '" + std::string(f[3]) + "'");
            Date date = parse_date(f[4]);
            if (!builder.add_qualifier(std::string(f[0]), std::string(f[1]), std::string(f[2]),
                                       kind, date)) {
                result.warnings.push_back(paths.qualifiers->string() + ":" +
                                          std::to_string(lineno) +
                                          ": duplicate qualifier, last value wins");
            }
        });
    }

    if (paths.popularity) {
        for_each_tsv_row(*paths.popularity, [&](std::size_t, const auto& f) {
            expect_fields(f, 2);
            std::uint64_t views = 0;
            auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), views);
            if (ec != std::errc{} || ptr != f[1].data() + f[1].size())
                throw InputError("popularity must be a nonnegative integer: '" +
                                 std::string(f[1]) + "'");
            builder.set_popularity(std::string(f[0]), views);
        });
    }

    if (paths.hierarchy) {
        for_each_tsv_row(*paths.hierarchy, [&](std::size_t, const auto& f) {
            expect_fields(f, 3);
            HierarchyRelation rel;
            if (f[1] == "subclass")
                rel = HierarchyRelation::subclass;
            else if (f[1] == "subproperty")
                rel = HierarchyRelation::subproperty;
            else if (f[1] == "instance_of")
                rel = HierarchyRelation::instance_of;
            else
                throw InputError("unknown hierarchy relation '" + std::string(f[1]) + "'");
            builder.add_hierarchy(std::string(f[0]), rel, std::string(f[2]));
        });
    }

    result.kb = builder.build(&result.warnings);
    return result;
}

void write_triples(const KnowledgeBase& kb, std::ostream& out) {
    for (const auto& t : kb.triples())
        out << kb.name(t.s) << '\t' << kb.name(t.p) << '\t' << kb.name(t.o) << '\n';
}

}  // namespace negkb

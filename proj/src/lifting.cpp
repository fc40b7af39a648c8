#include "negkb/lifting.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>

namespace negkb {

void AspectConfig::add(PropertyId property, PropertyId aspect) {
    auto& list = aspects_[property];
    if (std::find(list.begin(), list.end(), aspect) == list.end()) list.push_back(aspect);
}

const std::vector<PropertyId>* AspectConfig::aspects(PropertyId property) const {
    auto it = aspects_.find(property);
    return it == aspects_.end() ? nullptr : &it->second;
}

AspectConfig AspectConfig::load(const std::filesystem::path& path, const KnowledgeBase& kb,
                                std::vector<std::string>* warnings) {
    AspectConfig config;
    for_each_tsv_row(path, [&](std::size_t lineno, const auto& f) {
        if (f.size() != 2 || f[0].empty() || f[1].empty())
            throw InputError("expected 'property<TAB>aspect'");
        auto p = kb.find_property(f[0]);
        auto a = kb.find_property(f[1]);
        if (!p || !a) {
            if (warnings)
                warnings->push_back(path.string() + ":" + std::to_string(lineno) +
                                    ": property not in KB, aspect skipped");
            return;
        }
        config.add(*p, *a);
    });
    return config;
}

LiftResult lift(const KnowledgeBase& kb, EntityId e,
                const std::vector<NegativeStatement>& grounded, const AspectConfig& aspects,
                std::size_t k) {
    if (k < 1) throw InputError("k must be >= 1");

    std::map<PropertyId, std::set<EntityId>> negated;
    for (const auto& st : grounded) {
        if (st.kind != StatementKind::grounded)
            throw InputError("lifting takes grounded negative statements only");
        if (st.subject != e) throw InputError("negative statement about a different subject");
        negated[st.property].insert(st.object);
    }

    LiftResult result;
    for (const auto& [p, objects] : negated) {
        const auto* asp = aspects.aspects(p);
        if (!asp) {
            result.notices.push_back("no aspects configured for '" + kb.name(p) + "', skipped");
            continue;
        }
        for (std::size_t rank = 0; rank < asp->size(); ++rank) {
            const PropertyId a = (*asp)[rank];
            std::map<EntityId, int> support;
            for (EntityId o : objects) {
                for (EntityId v : kb.objects(o, a)) ++support[v];
            }
            std::set<EntityId> satisfied;
            for (EntityId o : kb.objects(e, p)) {
                for (EntityId v : kb.objects(o, a)) satisfied.insert(v);
            }
            for (const auto& [v, n] : support) {
                if (satisfied.count(v)) continue;
                result.conditionals.push_back(ConditionalNegation{
                    e, p, a, v, n, static_cast<int>(objects.size()), rank});
            }
        }
    }

    std::sort(result.conditionals.begin(), result.conditionals.end(),
              [](const ConditionalNegation& x, const ConditionalNegation& y) {
                  if (x.support != y.support) return x.support > y.support;
                  return std::tie(x.property, x.aspect_rank, x.value) <
                         std::tie(y.property, y.aspect_rank, y.value);
              });
    if (result.conditionals.size() > k) result.conditionals.resize(k);
    return result;
}

double compression_ratio(std::size_t before, std::size_t after) {
    if (after == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(before) / static_cast<double>(after);
}

std::vector<AspectSuggestion> suggest_aspects(const KnowledgeBase& kb, PropertyId property,
                                              std::size_t limit) {
    std::set<EntityId> objects;
    for (const auto& t : kb.by_property(property)) {
        if (!kb.is_literal(t.o)) objects.insert(t.o);
    }
    std::map<PropertyId, std::pair<std::set<EntityId>, std::size_t>> stats;
    for (EntityId o : objects) {
        for (PropertyId a : kb.properties(o)) {
            auto& [values, covered] = stats[a];
            ++covered;
            for (EntityId v : kb.objects(o, a)) values.insert(v);
        }
    }
    std::vector<AspectSuggestion> out;
    for (const auto& [a, st] : stats) {
        out.push_back(AspectSuggestion{property, a, st.first.size(),
                                       static_cast<double>(st.second) /
                                           static_cast<double>(objects.size())});
    }
    std::sort(out.begin(), out.end(), [](const AspectSuggestion& x, const AspectSuggestion& y) {
        if (x.distinct_values != y.distinct_values) return x.distinct_values < y.distinct_values;
        if (x.coverage != y.coverage) return x.coverage > y.coverage;
        return x.aspect < y.aspect;
    });
    if (out.size() > limit) out.resize(limit);
    return out;
}

}  // namespace negkb

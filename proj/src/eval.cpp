#include "negkb/eval.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "negkb/util.hpp"

namespace negkb {

double dcg(std::span<const double> relevances) {
    double total = 0.0;
    for (std::size_t i = 0; i < relevances.size(); ++i) {
        const double rank = static_cast<double>(i + 1);
        total += i == 0 ? relevances[i] : relevances[i] / std::log2(rank);
    }
    return total;
}

double ndcg(std::span<const double> ranked, std::size_t k) {
    if (k < 1) throw InputError("nDCG cutoff k must be >= 1");
    const auto n = std::min(k, ranked.size());
    std::vector<double> ideal(ranked.begin(), ranked.end());
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    const double best = dcg(std::span<const double>(ideal).first(n));
    if (best == 0.0) return 0.0;
    return dcg(ranked.first(n)) / best;
}

std::vector<Judgment> read_judgments(const std::filesystem::path& path) {
    std::vector<Judgment> out;
    for_each_tsv_row(path, [&](std::size_t, const auto& f) {
        if (f.size() != 3) throw InputError("expected 'entity<TAB>statement-id<TAB>relevance'");
        Judgment j{std::string(f[0]), std::string(f[1]), 0.0};
        try {
            std::size_t used = 0;
            j.relevance = std::stod(std::string(f[2]), &used);
            if (used != f[2].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw InputError("bad relevance '" + std::string(f[2]) + "'");
        }
        if (!(j.relevance >= 1.0 && j.relevance <= 3.0))
            throw InputError("relevance must be in [1,3]");
        out.push_back(std::move(j));
    });
    return out;
}

std::vector<EvalCandidate> candidates_from_rows(std::span<const LabeledRow> rows) {
    std::vector<EvalCandidate> out;
    for (const auto& r : rows)
        out.push_back(EvalCandidate{parse_statement_id(r.id).subject, r.id, r.kind, r.fv});
    return out;
}

std::vector<NamedScorer> standard_scorers(const std::optional<EnsembleModel>& model,
                                          std::uint64_t seed) {
    std::vector<NamedScorer> out;
    out.push_back({"random", [seed](const EvalCandidate& c) -> std::optional<double> {
                       return static_cast<double>(derive_seed(seed, c.statement_id) >> 11) *
                              0x1.0p-53;
                   }});
    out.push_back({"peer", [](const EvalCandidate& c) -> std::optional<double> { return c.fv.peer; }});
    out.push_back({"pop", [](const EvalCandidate& c) { return c.fv.pop_o; }});
    out.push_back({"frq", [](const EvalCandidate& c) { return c.fv.frq_p; }});
    out.push_back({"pivo", [](const EvalCandidate& c) -> std::optional<double> {
                       if (!c.fv.pivo_available) return std::nullopt;
                       return c.fv.pivo;
                   }});
    if (model) {
        out.push_back({"ensemble", [m = *model](const EvalCandidate& c) -> std::optional<double> {
                           return ensemble_score(m, c.fv, c.kind);
                       }});
    }
    return out;
}

RankingReport compare_models(std::span<const EvalCandidate> candidates,
                             std::span<const Judgment> judgments,
                             std::span<const NamedScorer> models,
                             std::span<const std::size_t> ks) {
    std::map<std::pair<std::string, std::string>, double> relevance;
    for (const auto& j : judgments) relevance[{j.entity, j.statement_id}] = j.relevance;

    std::map<std::string, std::vector<const EvalCandidate*>> by_entity;
    for (const auto& c : candidates) by_entity[c.entity].push_back(&c);

    RankingReport report;
    report.ks.assign(ks.begin(), ks.end());
    report.entities = by_entity.size();
    for (const auto& model : models) {
        ModelReport mr;
        mr.name = model.name;
        std::size_t scored_total = 0;
        for (auto k : ks) mr.ndcg[k] = 0.0;

        for (const auto& [entity, rows] : by_entity) {
            std::vector<std::pair<double, const EvalCandidate*>> scored;
            for (const auto* c : rows) {
                if (auto s = model.score(*c)) scored.emplace_back(*s, c);
            }
            scored_total += scored.size();
            std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second->statement_id < b.second->statement_id;
            });
            std::vector<double> rel;
            for (const auto& [s, c] : scored) {
                auto it = relevance.find({entity, c->statement_id});
                rel.push_back(it == relevance.end() ? 0.0 : it->second);
            }
            for (auto k : ks) mr.ndcg[k] += ndcg(rel, k);
        }
        if (!by_entity.empty()) {
            for (auto& [k, v] : mr.ndcg) v /= static_cast<double>(by_entity.size());
        }
        mr.coverage = candidates.empty()
                          ? 0.0
                          : static_cast<double>(scored_total) / static_cast<double>(candidates.size());
        report.models.push_back(std::move(mr));
    }
    return report;
}

std::string RankingReport::to_json() const {
    nlohmann::json j;
    j["entities"] = entities;
    j["k"] = ks;
    j["models"] = nlohmann::json::array();
    for (const auto& m : models) {
        nlohmann::json row = {{"model", m.name}, {"coverage", m.coverage}};
        for (const auto& [k, v] : m.ndcg) row["ndcg@" + std::to_string(k)] = v;
        j["models"].push_back(row);
    }
    return j.dump(2);
}

}  // namespace negkb

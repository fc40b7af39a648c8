#pragma once
// DCG/nDCG and a harness comparing ranking models per entity.
//
//   DCG(1) = G(1),  DCG(i) = DCG(i-1) + G(i) / log2(i)

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "negkb/ranking.hpp"

namespace negkb {

double dcg(std::span<const double> relevances);

// dcg of the first k over dcg of the first k of the descending sort. 0 when
// the ideal DCG is 0 (all-zero or empty).
double ndcg(std::span<const double> ranked, std::size_t k);

struct Judgment {
    std::string entity;
    std::string statement_id;
    double relevance = 1.0;  // in [1, 3]
};

// judgments.tsv: entity, statement-id, relevance.
std::vector<Judgment> read_judgments(const std::filesystem::path& path);

struct EvalCandidate {
    std::string entity;
    std::string statement_id;
    StatementKind kind = StatementKind::grounded;
    FeatureVector fv;
};

// Builds candidates from labels.tsv-style rows; the entity is the subject
// part of the statement id.
std::vector<EvalCandidate> candidates_from_rows(std::span<const LabeledRow> rows);

// nullopt: the model cannot score this statement.
using Scorer = std::function<std::optional<double>(const EvalCandidate&)>;

struct NamedScorer {
    std::string name;
    Scorer score;
};

// random (seeded, per statement id), peer, pop, frq, pivo, and ensemble
// when a model is given.
std::vector<NamedScorer> standard_scorers(const std::optional<EnsembleModel>& model,
                                          std::uint64_t seed);

struct ModelReport {
    std::string name;
    double coverage = 0.0;
    std::map<std::size_t, double> ndcg;  // k -> mean over entities
};

struct RankingReport {
    std::vector<std::size_t> ks;
    std::vector<ModelReport> models;
    std::size_t entities = 0;

    std::string to_json() const;
};

// Per model and entity: rank the statements the model can score (score
// descending, statement id ascending), look up relevances (unjudged = 0),
// compute nDCG@k; average over entities. Coverage is scored / total.
RankingReport compare_models(std::span<const EvalCandidate> candidates,
                             std::span<const Judgment> judgments,
                             std::span<const NamedScorer> models, std::span<const std::size_t> ks);

}  // namespace negkb

#pragma once
// Ranking features (PEER, POP, FRQ, PIVO), rank-transform normalization,
// pivot classifiers and the linear ensemble
//
//   grounded:  l1*PEER + l2*POP(o) + l3*PIVO + c
//   universal: l1*PEER + l4*FRQ(p) + l3*PIVO + c

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "negkb/peering.hpp"
#include "negkb/statement.hpp"

namespace negkb {

struct FeatureVector {
    double peer = 0.0;
    std::optional<double> pop_o;  // grounded only
    std::optional<double> frq_p;  // universal only
    double pivo = 0.5;
    bool pivo_available = false;
};

enum class NormScope { batch, entity };
const char* to_string(NormScope scope);
NormScope parse_norm_scope(std::string_view text);

struct EnsembleModel {
    double lambda1 = 0.0;  // PEER
    double lambda2 = 0.0;  // POP(o)
    double lambda3 = 0.0;  // PIVO
    double lambda4 = 0.0;  // FRQ(p)
    double constant = 0.0;
    NormScope norm_scope = NormScope::batch;

    std::string to_json() const;
    static EnsembleModel from_json(std::string_view text);
    static EnsembleModel load(const std::filesystem::path& path);
};

class PivotClassifier {
public:
    PivotClassifier() = default;
    PivotClassifier(std::vector<double> weights, double bias)
        : weights_(std::move(weights)), bias_(bias) {}

    // sigmoid(w.x + b)
    double score(std::span<const double> x) const;
    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
};

struct PivotTrainingConfig {
    int epochs = 300;
    double learning_rate = 0.5;
    std::uint64_t seed = 42;
};

struct PivotTraining {
    PivotClassifier classifier;
    std::vector<double> loss_history;  // mean log-loss after each epoch
    std::vector<std::string> warnings;
};

// Full-batch gradient descent on the mean logistic loss. A step that would
// increase the loss is retried with half the learning rate, so the loss
// history never increases. Entities without an embedding are skipped with a
// warning; InputError if a class ends up empty.
PivotTraining train_pivot(const EmbeddingTable& emb, std::span<const EntityId> positives,
                          std::span<const EntityId> negatives,
                          const PivotTrainingConfig& config = {});

// Classifiers keyed by statement (grounded) or by property (universal).
class PivotRegistry {
public:
    void set(const Candidate& key, PivotClassifier classifier);
    const PivotClassifier* find(const Candidate& key) const;
    std::size_t size() const { return classifiers_.size(); }

    static Candidate key_for(const NegativeStatement& st);

private:
    std::map<Candidate, PivotClassifier> classifiers_;
};

// Trains a classifier for each distinct key among `negations`: up to
// `per_class` embedded entities that hold the statement (or property) and as
// many that do not, sampled with a generator seeded from `seed` and the key
// names. The subject of each negation is never a training example.
PivotRegistry train_pivots_for(const KnowledgeBase& kb, const EmbeddingTable& emb,
                               const std::vector<ScoredNegation>& negations,
                               std::size_t per_class, const PivotTrainingConfig& config);

// Raw (unnormalized) features. PIVO is 0.5 and flagged unavailable when no
// classifier or subject embedding exists.
FeatureVector raw_features(const KnowledgeBase& kb, const EmbeddingTable* emb,
                           const PivotRegistry* pivots, const ScoredNegation& negation);

// Average-rank transform: value at (1-based, tie-averaged) ascending rank r
// maps to r / n.
std::vector<double> rank_transform(std::span<const double> values);

// Rank-transforms each feature over the rows that carry it.
void normalize_features(std::span<FeatureVector> rows);

// InputError when the optional features do not match the kind.
double ensemble_score(const EnsembleModel& model, const FeatureVector& fv, StatementKind kind);

struct LabeledRow {
    std::string id;
    StatementKind kind = StatementKind::grounded;
    FeatureVector fv;
    std::optional<double> label;
};

// labels.tsv: statement-id, peer, frq_p, pop_o, pivo, label. Empty or "-"
// marks a missing value. The kind comes from the statement id; the feature
// that does not belong to the kind is dropped. Extra columns are ignored.
std::vector<LabeledRow> read_labels(const std::filesystem::path& path);
void write_labels_header(std::ostream& out);

struct CvReport {
    std::vector<double> fold_precision;
    double mean_precision = 0.0;
    bool ridge_fallback = false;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

// Least squares per fold on [peer, pop_o, pivo, frq_p, 1] (absent features
// as 0); returns the average of the fold coefficients. Precision of a fold:
// share of held-out rows where (prediction >= 0.5) == (label >= 0.5).
std::pair<EnsembleModel, CvReport> train_ensemble(std::span<const LabeledRow> rows,
                                                  std::size_t folds, std::uint64_t seed = 42);

}  // namespace negkb

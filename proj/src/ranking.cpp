#include "negkb/ranking.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "negkb/peer_inference.hpp"
#include "negkb/util.hpp"

namespace negkb {

using json = nlohmann::json;

const char* to_string(NormScope scope) {
    return scope == NormScope::batch ? "batch" : "entity";
}

NormScope parse_norm_scope(std::string_view text) {
    if (text == "batch") return NormScope::batch;
    if (text == "entity") return NormScope::entity;
    throw InputError("norm scope must be 'batch' or 'entity', got '" + std::string(text) + "'");
}

// --- model ---------------------------------------------------------------------

std::string EnsembleModel::to_json() const {
    json j = {{"lambda1", lambda1}, {"lambda2", lambda2},   {"lambda3", lambda3},
              {"lambda4", lambda4}, {"constant", constant}, {"norm_scope", to_string(norm_scope)}};
    return j.dump(2);
}

EnsembleModel EnsembleModel::from_json(std::string_view text) {
    EnsembleModel m;
    try {
        auto j = json::parse(text);
        m.lambda1 = j.at("lambda1").get<double>();
        m.lambda2 = j.at("lambda2").get<double>();
        m.lambda3 = j.at("lambda3").get<double>();
        m.lambda4 = j.at("lambda4").get<double>();
        m.constant = j.at("constant").get<double>();
        if (j.contains("norm_scope")) m.norm_scope = parse_norm_scope(j["norm_scope"].get<std::string>());
    } catch (const json::exception& err) {
        throw InputError(std::string("bad model json: ") + err.what());
    }
    for (double v : {m.lambda1, m.lambda2, m.lambda3, m.lambda4, m.constant}) {
        if (!std::isfinite(v)) throw InputError("model coefficients must be finite");
    }
    return m;
}

EnsembleModel EnsembleModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

double ensemble_score(const EnsembleModel& model, const FeatureVector& fv, StatementKind kind) {
    switch (kind) {
    case StatementKind::grounded:
        if (!fv.pop_o || fv.frq_p)
            throw InputError("grounded statements need POP(o) and no FRQ(p)");
        return model.lambda1 * fv.peer + model.lambda2 * *fv.pop_o + model.lambda3 * fv.pivo +
               model.constant;
    case StatementKind::universal:
        if (!fv.frq_p || fv.pop_o)
            throw InputError("universal statements need FRQ(p) and no POP(o)");
        return model.lambda1 * fv.peer + model.lambda4 * *fv.frq_p + model.lambda3 * fv.pivo +
               model.constant;
    case StatementKind::conditional: break;
    }
    throw InputError("the ensemble does not score conditional statements");
}

// --- pivot classifiers ------------------------------------------------------------

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(-m)) without overflow.
double log_loss_margin(double m) {
    return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

struct LogisticProblem {
    std::vector<std::vector<double>> x;
    std::vector<double> y;  // 0 or 1

    double loss(const std::vector<double>& w, double b) const {
        double total = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double z = b;
            for (std::size_t d = 0; d < w.size(); ++d) z += w[d] * x[i][d];
            total += log_loss_margin(y[i] > 0.5 ? z : -z);
        }
        return total / static_cast<double>(x.size());
    }
};

}  // namespace

double PivotClassifier::score(std::span<const double> x) const {
    double z = bias_;
    const auto n = std::min(x.size(), weights_.size());
    for (std::size_t d = 0; d < n; ++d) z += weights_[d] * x[d];
    return sigmoid(z);
}

PivotTraining train_pivot(const EmbeddingTable& emb, std::span<const EntityId> positives,
                          std::span<const EntityId> negatives, const PivotTrainingConfig& config) {
    PivotTraining result;
    LogisticProblem prob;
    auto collect = [&](std::span<const EntityId> ids, double label) {
        std::size_t used = 0;
        for (EntityId id : ids) {
            auto v = emb.vector(id);
            if (v.empty()) {
                result.warnings.push_back("entity without embedding skipped");
                continue;
            }
            prob.x.emplace_back(v.begin(), v.end());
            prob.y.push_back(label);
            ++used;
        }
        return used;
    };
    if (collect(positives, 1.0) == 0) throw InputError("pivot classifier: no positive examples");
    if (collect(negatives, 0.0) == 0) throw InputError("pivot classifier: no negative examples");

    const std::size_t dim = emb.dimension();
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> init(0.0, 0.01);
    std::vector<double> w(dim);
    for (auto& v : w) v = init(rng);
    double b = 0.0;

    const double n = static_cast<double>(prob.x.size());
    double current = prob.loss(w, b);
    std::vector<double> grad(dim);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < prob.x.size(); ++i) {
            double z = b;
            for (std::size_t d = 0; d < dim; ++d) z += w[d] * prob.x[i][d];
            const double r = sigmoid(z) - prob.y[i];
            for (std::size_t d = 0; d < dim; ++d) grad[d] += r * prob.x[i][d];
            grad_b += r;
        }
        double step = config.learning_rate;
        for (int attempt = 0; attempt < 40; ++attempt, step *= 0.5) {
            std::vector<double> w_next(dim);
            for (std::size_t d = 0; d < dim; ++d) w_next[d] = w[d] - step * grad[d] / n;
            const double b_next = b - step * grad_b / n;
            const double next = prob.loss(w_next, b_next);
            if (next <= current) {
                w = std::move(w_next);
                b = b_next;
                current = next;
                break;
            }
        }
        result.loss_history.push_back(current);
    }
    result.classifier = PivotClassifier(std::move(w), b);
    return result;
}

void PivotRegistry::set(const Candidate& key, PivotClassifier classifier) {
    classifiers_[key] = std::move(classifier);
}

const PivotClassifier* PivotRegistry::find(const Candidate& key) const {
    auto it = classifiers_.find(key);
    return it == classifiers_.end() ? nullptr : &it->second;
}

Candidate PivotRegistry::key_for(const NegativeStatement& st) {
    if (st.kind == StatementKind::grounded) return Candidate{st.property, st.object};
    return Candidate{st.property, std::nullopt};
}

PivotRegistry train_pivots_for(const KnowledgeBase& kb, const EmbeddingTable& emb,
                               const std::vector<ScoredNegation>& negations,
                               std::size_t per_class, const PivotTrainingConfig& config) {
    std::map<Candidate, std::set<EntityId>> keys;
    for (const auto& n : negations) {
        if (n.stmt.kind == StatementKind::conditional) continue;
        keys[PivotRegistry::key_for(n.stmt)].insert(n.stmt.subject);
    }
    PivotRegistry registry;
    for (const auto& [key, subjects] : keys) {
        std::vector<EntityId> pos;
        std::vector<EntityId> neg;
        for (EntityId id : emb.entities()) {
            if (subjects.count(id)) continue;
            (holds(kb, id, key) ? pos : neg).push_back(id);
        }
        if (pos.empty() || neg.empty()) continue;
        std::string name = kb.name(key.property);
        if (key.object) name += "|" + kb.name(*key.object);
        std::mt19937_64 rng(derive_seed(config.seed, name));
        std::shuffle(pos.begin(), pos.end(), rng);
        std::shuffle(neg.begin(), neg.end(), rng);
        if (pos.size() > per_class) pos.resize(per_class);
        if (neg.size() > per_class) neg.resize(per_class);
        auto cfg = config;
        cfg.seed = derive_seed(config.seed, name + "#init");
        registry.set(key, train_pivot(emb, pos, neg, cfg).classifier);
    }
    return registry;
}

// --- features -----------------------------------------------------------------

FeatureVector raw_features(const KnowledgeBase& kb, const EmbeddingTable* emb,
                           const PivotRegistry* pivots, const ScoredNegation& negation) {
    FeatureVector fv;
    fv.peer = negation.score;
    const auto& st = negation.stmt;
    if (st.kind == StatementKind::grounded)
        fv.pop_o = static_cast<double>(kb.popularity(st.object));
    else if (st.kind == StatementKind::universal)
        fv.frq_p = static_cast<double>(kb.property_frequency(st.property));

    if (emb && pivots && st.kind != StatementKind::conditional) {
        const auto* clf = pivots->find(PivotRegistry::key_for(st));
        auto x = emb->vector(st.subject);
        if (clf && !x.empty()) {
            fv.pivo = clf->score(x);
            fv.pivo_available = true;
        }
    }
    return fv;
}

std::vector<double> rank_transform(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        // 1-based ranks i+1 .. j share their average.
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) out[order[t]] = avg_rank / static_cast<double>(n);
        i = j;
    }
    return out;
}

void normalize_features(std::span<FeatureVector> rows) {
    if (rows.empty()) return;
    auto transform = [&](auto get, auto set, auto present) {
        std::vector<double> vals;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!present(rows[i])) continue;
            vals.push_back(get(rows[i]));
            idx.push_back(i);
        }
        if (vals.empty()) return;
        auto ranked = rank_transform(vals);
        for (std::size_t t = 0; t < idx.size(); ++t) set(rows[idx[t]], ranked[t]);
    };
    auto always = [](const FeatureVector&) { return true; };
    transform([](const FeatureVector& f) { return f.peer; },
              [](FeatureVector& f, double v) { f.peer = v; }, always);
    transform([](const FeatureVector& f) { return *f.pop_o; },
              [](FeatureVector& f, double v) { f.pop_o = v; },
              [](const FeatureVector& f) { return f.pop_o.has_value(); });
    transform([](const FeatureVector& f) { return *f.frq_p; },
              [](FeatureVector& f, double v) { f.frq_p = v; },
              [](const FeatureVector& f) { return f.frq_p.has_value(); });
    transform([](const FeatureVector& f) { return f.pivo; },
              [](FeatureVector& f, double v) { f.pivo = v; }, always);
}

// --- labels.tsv ------------------------------------------------------------------

namespace {

std::optional<double> parse_optional_real(std::string_view text, const char* what) {
    if (text.empty() || text == "-") return std::nullopt;
    try {
        std::size_t used = 0;
        double v = std::stod(std::string(text), &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw InputError(std::string("bad ") + what + " value '" + std::string(text) + "'");
    }
}

}  // namespace

std::vector<LabeledRow> read_labels(const std::filesystem::path& path) {
    std::vector<LabeledRow> rows;
    bool first = true;
    for_each_tsv_row(path, [&](std::size_t, const auto& f) {
        if (first) {
            first = false;
            if (f[0] == "statement-id") return;
        }
        if (f.size() < 5) throw InputError("expected at least 5 tab-separated fields");
        LabeledRow row;
        row.id = std::string(f[0]);
        row.kind = parse_statement_id(f[0]).kind;
        auto peer = parse_optional_real(f[1], "peer");
        if (!peer) throw InputError("peer value is required");
        row.fv.peer = *peer;
        auto frq = parse_optional_real(f[2], "frq_p");
        auto pop = parse_optional_real(f[3], "pop_o");
        if (auto pivo = parse_optional_real(f[4], "pivo")) {
            row.fv.pivo = *pivo;
            row.fv.pivo_available = true;
        }
        if (row.kind == StatementKind::grounded) {
            if (!pop) throw InputError("grounded row needs pop_o");
            row.fv.pop_o = pop;
        } else if (row.kind == StatementKind::universal) {
            if (!frq) throw InputError("universal row needs frq_p");
            row.fv.frq_p = frq;
        } else {
            throw InputError("conditional statements carry no ranking features");
        }
        if (f.size() >= 6) row.label = parse_optional_real(f[5], "label");
        rows.push_back(std::move(row));
    });
    return rows;
}

void write_labels_header(std::ostream& out) {
    out << "statement-id\tpeer\tfrq_p\tpop_o\tpivo\tlabel\n";
}

// --- ensemble training -------------------------------------------------------------

std::string CvReport::to_json() const {
    json j = {{"fold_precision", fold_precision},
              {"mean_precision", mean_precision},
              {"ridge_fallback", ridge_fallback}};
    return j.dump(2);
}

std::pair<EnsembleModel, CvReport> train_ensemble(std::span<const LabeledRow> rows,
                                                  std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw InputError("need at least 2 folds");
    if (rows.size() < folds) throw InputError("fewer rows than folds");
    for (const auto& r : rows) {
        if (!r.label || *r.label < 0.0 || *r.label > 1.0)
            throw InputError("row '" + r.id + "' needs a label in [0,1]");
    }

    constexpr int cols = 5;  // peer, pop_o, pivo, frq_p, 1
    auto design_row = [](const LabeledRow& r) {
        Eigen::Matrix<double, 1, cols> x;
        x << r.fv.peer, r.fv.pop_o.value_or(0.0), r.fv.pivo, r.fv.frq_p.value_or(0.0), 1.0;
        return x;
    };

    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    CvReport report;
    Eigen::Matrix<double, cols, 1> sum = Eigen::Matrix<double, cols, 1>::Zero();
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < order.size(); ++i) (i % folds == f ? test : train).push_back(order[i]);

        Eigen::MatrixXd X(static_cast<Eigen::Index>(train.size()), cols);
        Eigen::VectorXd y(static_cast<Eigen::Index>(train.size()));
        for (std::size_t i = 0; i < train.size(); ++i) {
            X.row(static_cast<Eigen::Index>(i)) = design_row(rows[train[i]]);
            y(static_cast<Eigen::Index>(i)) = *rows[train[i]].label;
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        Eigen::VectorXd beta;
        if (qr.rank() == cols) {
            beta = qr.solve(y);
        } else {
            if (!report.ridge_fallback)
                report.warnings.push_back("singular design matrix, using ridge regularization 1e-8");
            report.ridge_fallback = true;
            Eigen::MatrixXd gram = X.transpose() * X;
            gram.diagonal().array() += 1e-8;
            beta = gram.ldlt().solve(X.transpose() * y);
        }
        sum += beta;

        std::size_t hits = 0;
        for (auto i : test) {
            const double pred = design_row(rows[i]) * beta;
            if ((pred >= 0.5) == (*rows[i].label >= 0.5)) ++hits;
        }
        report.fold_precision.push_back(static_cast<double>(hits) / static_cast<double>(test.size()));
    }
    report.mean_precision =
        std::accumulate(report.fold_precision.begin(), report.fold_precision.end(), 0.0) /
        static_cast<double>(folds);

    const Eigen::Matrix<double, cols, 1> avg = sum / static_cast<double>(folds);
    EnsembleModel model;
    model.lambda1 = avg(0);
    model.lambda2 = avg(1);
    model.lambda3 = avg(2);
    model.lambda4 = avg(3);
    model.constant = avg(4);
    return {model, report};
}

}  // namespace negkb

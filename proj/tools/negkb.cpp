// negkb: command-line front end.
//
//   negkb infer --config run.cfg --entity "Brad Pitt" --k 3
//   negkb ordered --triples kb.tsv --qualifiers q.tsv --entity "Olivia Colman"
//   negkb lift --aspects aspects.tsv --entity "Albert Einstein"
//   negkb rank | train | eval | coverage | suggest-aspects
//
// Data goes to stdout (or -o), diagnostics to stderr. Exit status: 0 ok,
// 1 internal error, 2 bad input.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "negkb/config.hpp"
#include "negkb/eval.hpp"
#include "negkb/output.hpp"
#include "negkb/pipeline.hpp"
#include "negkb/util.hpp"

using namespace negkb;

namespace {

struct Options {
    std::string config;
    std::vector<std::string> settings;  // --set key=value
    std::vector<std::pair<std::string, std::string>> overrides;
    std::string format;
    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string output;

    std::vector<std::string> entities;
    std::string entities_file;

    std::string negations;
    std::string labels;
    std::string report;
    std::string features;
    std::string judgments;
    std::vector<std::size_t> ks{3, 5, 10, 20};
    std::size_t sample = 100;
    std::string mode = "peer";
    std::vector<std::string> properties;
    std::size_t limit = 10;
};

void note(const std::string& msg) { std::cerr << "negkb: " << msg << '\n'; }

// Config file flags shared by every subcommand. Each maps to a config key.
void add_config_flags(CLI::App* sub, Options& o) {
    struct Flag {
        const char* name;
        const char* key;
        const char* help;
    };
    static const Flag flags[] = {
        {"--triples", "triples", "triples.tsv"},
        {"--qualifiers", "qualifiers", "qualifiers.tsv"},
        {"--popularity", "popularity", "popularity.tsv"},
        {"--hierarchy", "hierarchy", "hierarchy.tsv"},
        {"--embeddings", "embeddings", "entity<TAB>vector file"},
        {"--aspects", "aspects", "aspects.tsv"},
        {"--model", "model", "model.json for ensemble re-ranking"},
        {"--peering", "peering", "facet | embedding"},
        {"--facet", "facet_property", "facet property for peer groups"},
        {"-s,--s", "s", "peers per group"},
        {"--min-pop-ratio", "min_pop_ratio", "minimum peer popularity relative to the subject"},
        {"--embedding-k", "embedding_k", "nearest neighbours for embedding peering"},
        {"--tq-min-size", "tq_min_size", "minimum size of qualifier-ordered lists"},
        {"--tp-min-size", "tp_min_size", "minimum chain length"},
        {"--tp-max-size", "tp_max_size", "maximum chain length"},
        {"--follows-property", "follows_property", "name of the follows property"},
        {"--followed-by-property", "followed_by_property", "name of the followed-by property"},
        {"-k,--k", "k", "rows per entity"},
        {"--alpha", "alpha", "ordered scoring weight in [0,1]"},
        {"--combine", "combine", "max | avg"},
        {"--normalize-by", "normalize_by", "s | group_size"},
        {"--hops", "subsumption_hops", "subsumption hierarchy hops (1 or 2)"},
        {"--noun", "peer_noun", "noun used in peer verbalizations"},
        {"--norm-scope", "norm_scope", "batch | entity"},
        {"--pivot-per-class", "pivot_per_class", "training examples per class"},
        {"--pivot-epochs", "pivot_epochs", "pivot classifier epochs"},
        {"--pivot-lr", "pivot_learning_rate", "pivot classifier learning rate"},
        {"--folds", "folds", "cross-validation folds"},
        {"--seed", "seed", "master seed"},
    };
    for (const auto& f : flags) {
        const std::string key = f.key;
        sub->add_option_function<std::string>(
               f.name, [&o, key](const std::string& v) { o.overrides.emplace_back(key, v); },
               f.help)
            ->group("Configuration");
    }
    sub->add_option_function<std::vector<std::string>>(
           "--filter",
           [&o](const std::vector<std::string>& v) {
               std::string joined;
               for (const auto& item : v) joined += (joined.empty() ? "" : ",") + item;
               o.overrides.emplace_back("filter", joined);
           },
           "pca, subsumption or none (repeatable, or comma-separated)")
        ->group("Configuration");
    sub->add_option("--config", o.config, "key=value config file (default: $NEGKB_CONFIG)");
    sub->add_option("--set", o.settings, "override any config key: key=value");
    sub->add_option("--format", o.format, "tsv | json")->check(CLI::IsMember({"tsv", "json"}));
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", o.output, "write data here instead of stdout");
}

void add_entity_flags(CLI::App* sub, Options& o) {
    sub->add_option("--entity,entities", o.entities, "entity name (repeatable)");
    sub->add_option("--entities", o.entities_file, "file with one entity per line");
}

RunConfig resolve_config(const Options& o) {
    RunConfig cfg;
    std::string path = o.config;
    if (path.empty()) {
        if (const char* env = std::getenv("NEGKB_CONFIG")) path = env;
    }
    if (!path.empty()) cfg = load_config(path);
    for (const auto& kv : o.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + kv + "'");
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, value] : o.overrides) apply_setting(cfg, key, value);
    return cfg;
}

Session open_session(const RunConfig& cfg) {
    auto session = Session::open(cfg);
    for (const auto& w : session.warnings) note("warning: " + w);
    return session;
}

std::vector<EntityId> resolve_entities(const Session& session, const Options& o) {
    std::vector<std::string> names = o.entities;
    if (!o.entities_file.empty()) {
        std::ifstream in(o.entities_file);
        if (!in) throw InputError("cannot open " + o.entities_file);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            names.push_back(line);
        }
    }
    if (names.empty()) throw InputError("no entity given (use --entity or --entities)");
    std::vector<EntityId> ids;
    for (const auto& n : names) ids.push_back(session.entity(n));
    return ids;
}

Format format_or(const Options& o, Format fallback) {
    return o.format.empty() ? fallback : parse_format(o.format);
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw InputError("cannot write " + path);
        }
    }
    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void emit_notices(const std::vector<EntityResult>& results) {
    for (const auto& r : results) {
        for (const auto& n : r.notices) note(n);
    }
}

int cmd_infer(const Options& o) {
    const auto cfg = resolve_config(o);
    const auto session = open_session(cfg);
    const auto entities = resolve_entities(session, o);
    std::optional<EnsembleModel> model;
    if (cfg.model) model = EnsembleModel::load(*cfg.model);
    const auto results = infer_batch(session, entities, model, o.jobs);
    emit_notices(results);
    std::vector<ScoredNegation> rows;
    for (const auto& r : results) rows.insert(rows.end(), r.rows.begin(), r.rows.end());
    Sink sink(o.output);
    write_table(sink.out(), negation_table(session.kb, rows), format_or(o, Format::tsv));
    return 0;
}

int cmd_ordered(const Options& o) {
    const auto cfg = resolve_config(o);
    const auto session = open_session(cfg);
    const auto entities = resolve_entities(session, o);
    const OrderedIndex index(session);
    const auto results = parallel_map<EntityResult>(entities.size(), o.jobs, [&](std::size_t i) {
        return ordered_entity(session, index, entities[i]);
    });
    emit_notices(results);
    std::vector<ScoredNegation> rows;
    for (const auto& r : results) rows.insert(rows.end(), r.rows.begin(), r.rows.end());
    Sink sink(o.output);
    write_table(sink.out(), ordered_negation_table(session.kb, rows, cfg.alpha),
                format_or(o, Format::tsv));
    return 0;
}

int cmd_lift(const Options& o) {
    const auto cfg = resolve_config(o);
    if (!cfg.aspects) throw InputError("lift needs an aspects file (--aspects)");
    const auto session = open_session(cfg);
    std::vector<std::string> warnings;
    const auto aspects = AspectConfig::load(*cfg.aspects, session.kb, &warnings);
    for (const auto& w : warnings) note("warning: " + w);

    std::optional<std::vector<NegativeStatement>> given;
    std::vector<EntityId> entities;
    if (!o.negations.empty()) {
        given = read_negations(o.negations, session.kb);
        if (o.entities.empty() && o.entities_file.empty()) {
            for (const auto& st : *given) {
                if (std::find(entities.begin(), entities.end(), st.subject) == entities.end())
                    entities.push_back(st.subject);
            }
        }
    }
    if (entities.empty()) entities = resolve_entities(session, o);

    const auto results = parallel_map<LiftResult>(entities.size(), o.jobs, [&](std::size_t i) {
        const EntityId e = entities[i];
        std::vector<NegativeStatement> grounded;
        if (given) {
            for (const auto& st : *given) {
                if (st.subject == e && st.kind == StatementKind::grounded) grounded.push_back(st);
            }
        } else {
            grounded = grounded_for_lifting(session, e);
        }
        auto r = lift(session.kb, e, grounded, aspects, cfg.k);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu grounded -> %zu conditional (compression %.2f)",
                      grounded.size(), r.conditionals.size(),
                      compression_ratio(grounded.size(), r.conditionals.size()));
        r.notices.push_back(session.kb.name(e) + ": " + buf);
        return r;
    });
    std::vector<ConditionalNegation> rows;
    for (const auto& r : results) {
        for (const auto& n : r.notices) note(n);
        rows.insert(rows.end(), r.conditionals.begin(), r.conditionals.end());
    }
    Sink sink(o.output);
    write_table(sink.out(), conditional_table(session.kb, rows), format_or(o, Format::tsv));
    return 0;
}

Cell optional_cell(const std::optional<double>& v) {
    return v ? Cell(*v) : Cell(std::monostate{});
}

int cmd_rank(const Options& o) {
    const auto cfg = resolve_config(o);
    const auto session = open_session(cfg);
    const auto entities = resolve_entities(session, o);
    std::optional<EnsembleModel> model;
    if (cfg.model) model = EnsembleModel::load(*cfg.model);
    const auto results = feature_batch(session, entities, o.jobs);
    emit_notices(results);

    Table table{{"statement-id", "peer", "frq_p", "pop_o", "pivo", "label"}, {}};
    if (model) table.columns.emplace_back("score");
    for (const auto& r : results) {
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            const auto& fv = r.features[i];
            std::vector<Cell> row{statement_id(session.kb, r.rows[i].stmt), fv.peer,
                                  optional_cell(fv.frq_p), optional_cell(fv.pop_o),
                                  fv.pivo_available ? Cell(fv.pivo) : Cell(std::monostate{}),
                                  std::monostate{}};
            if (model) row.emplace_back(ensemble_score(*model, fv, r.rows[i].stmt.kind));
            table.rows.push_back(std::move(row));
        }
    }
    Sink sink(o.output);
    write_table(sink.out(), table, format_or(o, Format::tsv));
    return 0;
}

int cmd_train(const Options& o) {
    const auto cfg = resolve_config(o);
    if (o.labels.empty()) throw InputError("train needs --labels");
    const auto rows = read_labels(o.labels);
    auto [model, report] = train_ensemble(rows, cfg.folds, cfg.seed);
    model.norm_scope = cfg.norm_scope;
    for (const auto& w : report.warnings) note("warning: " + w);
    char buf[96];
    std::snprintf(buf, sizeof buf, "mean precision %.4f over %zu folds", report.mean_precision,
                  report.fold_precision.size());
    note(buf);
    if (!o.report.empty()) {
        std::ofstream rep(o.report, std::ios::binary);
        if (!rep) throw InputError("cannot write " + o.report);
        rep << report.to_json() << '\n';
    }
    Sink sink(o.output);
    if (format_or(o, Format::json) == Format::json) {
        sink.out() << model.to_json() << '\n';
    } else {
        Table t{{"parameter", "value"},
                {{std::string("lambda1"), model.lambda1},
                 {std::string("lambda2"), model.lambda2},
                 {std::string("lambda3"), model.lambda3},
                 {std::string("lambda4"), model.lambda4},
                 {std::string("constant"), model.constant},
                 {std::string("norm_scope"), std::string(to_string(model.norm_scope))}}};
        write_table(sink.out(), t, Format::tsv);
    }
    return 0;
}

int cmd_eval(const Options& o) {
    const auto cfg = resolve_config(o);
    if (o.features.empty() || o.judgments.empty())
        throw InputError("eval needs --features and --judgments");
    std::optional<EnsembleModel> model;
    if (cfg.model) model = EnsembleModel::load(*cfg.model);
    const auto rows = read_labels(o.features);
    const auto candidates = candidates_from_rows(rows);
    const auto judgments = read_judgments(o.judgments);
    const auto scorers = standard_scorers(model, cfg.seed);
    const auto report = compare_models(candidates, judgments, scorers, o.ks);
    Sink sink(o.output);
    if (format_or(o, Format::json) == Format::json) {
        sink.out() << report.to_json() << '\n';
        return 0;
    }
    Table t{{"model", "coverage"}, {}};
    for (auto k : report.ks) t.columns.push_back("ndcg@" + std::to_string(k));
    for (const auto& m : report.models) {
        std::vector<Cell> row{m.name, m.coverage};
        for (auto k : report.ks) row.emplace_back(m.ndcg.at(k));
        t.rows.push_back(std::move(row));
    }
    write_table(sink.out(), t, Format::tsv);
    return 0;
}

int cmd_coverage(const Options& o) {
    const auto cfg = resolve_config(o);
    const auto session = open_session(cfg);
    const auto mode = o.mode == "ordered" ? CoverageMode::ordered : CoverageMode::peer;
    const auto result = measure_coverage(session, o.sample, mode, o.jobs);
    Table t{{"mode", "sampled", "covered", "coverage"},
            {{o.mode, static_cast<std::int64_t>(result.sampled),
              static_cast<std::int64_t>(result.covered), result.coverage()}}};
    Sink sink(o.output);
    write_table(sink.out(), t, format_or(o, Format::tsv));
    return 0;
}

int cmd_suggest(const Options& o) {
    const auto cfg = resolve_config(o);
    const auto session = open_session(cfg);
    std::vector<PropertyId> props;
    for (const auto& name : o.properties) {
        auto p = session.kb.find_property(name);
        if (!p) throw InputError("unknown property '" + name + "'");
        props.push_back(*p);
    }
    if (props.empty()) {
        for (std::size_t i = 0; i < session.kb.property_count(); ++i)
            props.push_back(PropertyId{static_cast<std::uint32_t>(i)});
    }
    Table t{{"property", "aspect", "distinct_values", "coverage"}, {}};
    for (PropertyId p : props) {
        for (const auto& s : suggest_aspects(session.kb, p, o.limit))
            t.rows.push_back({session.kb.name(s.property), session.kb.name(s.aspect),
                              static_cast<std::int64_t>(s.distinct_values), s.coverage});
    }
    Sink sink(o.output);
    write_table(sink.out(), t, format_or(o, Format::tsv));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Infer, rank, lift and evaluate negative statements about KB entities"};
    app.require_subcommand(1);
    Options o;

    auto* infer = app.add_subcommand("infer", "peer-based negations");
    auto* ordered = app.add_subcommand("ordered", "negations over ordered peers");
    auto* lift_cmd = app.add_subcommand("lift", "lift grounded negations to conditional ones");
    auto* rank = app.add_subcommand("rank", "candidate features in labels.tsv layout");
    auto* train = app.add_subcommand("train", "fit the ensemble from labels.tsv");
    auto* eval = app.add_subcommand("eval", "compare ranking models by nDCG");
    auto* coverage = app.add_subcommand("coverage", "share of sampled subjects with negations");
    auto* suggest = app.add_subcommand("suggest-aspects", "candidate lifting aspects");

    for (auto* sub : {infer, ordered, lift_cmd, rank, train, eval, coverage, suggest})
        add_config_flags(sub, o);
    for (auto* sub : {infer, ordered, lift_cmd, rank}) add_entity_flags(sub, o);
    lift_cmd->add_option("--negations", o.negations, "grounded negations (infer TSV output)");
    train->add_option("--labels,labels", o.labels, "labels.tsv");
    train->add_option("--report", o.report, "write the cross-validation report here");
    eval->add_option("--features", o.features, "features in labels.tsv layout");
    eval->add_option("--judgments", o.judgments, "judgments.tsv");
    eval->add_option("--ks", o.ks, "cut-offs for nDCG")->delimiter(',');
    coverage->add_option("--sample", o.sample, "subjects to sample");
    coverage->add_option("--mode", o.mode, "peer | ordered")
        ->check(CLI::IsMember({"peer", "ordered"}));
    suggest->add_option("--property,properties", o.properties, "properties (default: all)");
    suggest->add_option("--limit", o.limit, "suggestions per property");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (infer->parsed()) return cmd_infer(o);
        if (ordered->parsed()) return cmd_ordered(o);
        if (lift_cmd->parsed()) return cmd_lift(o);
        if (rank->parsed()) return cmd_rank(o);
        if (train->parsed()) return cmd_train(o);
        if (eval->parsed()) return cmd_eval(o);
        if (coverage->parsed()) return cmd_coverage(o);
        if (suggest->parsed()) return cmd_suggest(o);
    } catch (const InputError& e) {
        note(e.what());
        return 2;
    } catch (const std::exception& e) {
        note(std::string("internal error: ") + e.what());
        return 1;
    }
    return 1;
}

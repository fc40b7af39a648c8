#include "negkb/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace negkb {

InferOptions RunConfig::infer_options() const {
    InferOptions o;
    o.s = s;
    o.k = k;
    o.combine = combine;
    o.normalize = normalize_by;
    o.noun = peer_noun;
    return o;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "triples",         "qualifiers",       "popularity",     "hierarchy",
        "embeddings",      "aspects",          "model",          "peering",
        "facet_property",  "s",                "min_pop_ratio",  "embedding_k",
        "tq_min_size",     "tp_min_size",      "tp_max_size",    "follows_property",
        "followed_by_property", "k",           "alpha",          "combine",
        "normalize_by",    "filter",           "subsumption_hops", "peer_noun",
        "norm_scope",      "pivot_per_class",  "pivot_epochs",   "pivot_learning_rate",
        "folds",           "seed"};
    return keys;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw InputError("invalid value '" + value + "' for " + key);
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value,
                          std::uint64_t min = 0) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || v < min) bad_value(key, value);
    return v;
}

double to_real(const std::string& key, const std::string& value, double lo, double hi) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(v) || v < lo || v > hi) bad_value(key, value);
        return v;
    } catch (const std::logic_error&) {
        bad_value(key, value);
    }
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw,
                   const std::filesystem::path& base_dir) {
    const std::string value = trim(raw);
    auto path = [&] {
        std::filesystem::path p(value);
        if (value.empty()) bad_value(key, value);
        return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };

    if (key == "triples") c.triples = path();
    else if (key == "qualifiers") c.qualifiers = path();
    else if (key == "popularity") c.popularity = path();
    else if (key == "hierarchy") c.hierarchy = path();
    else if (key == "embeddings") c.embeddings = path();
    else if (key == "aspects") c.aspects = path();
    else if (key == "model") c.model = path();
    else if (key == "peering") {
        if (value == "facet") c.peering = PeeringMode::facet;
        else if (value == "embedding") c.peering = PeeringMode::embedding;
        else bad_value(key, value);
    }
    else if (key == "facet_property") {
        if (value.empty()) bad_value(key, value);
        c.facet_property = value;
    }
    else if (key == "s") c.s = to_unsigned(key, value, 1);
    else if (key == "min_pop_ratio") c.min_pop_ratio = to_real(key, value, 0.0, 1.0);
    else if (key == "embedding_k") c.embedding_k = to_unsigned(key, value, 1);
    else if (key == "tq_min_size") c.tq_min_size = to_unsigned(key, value, 1);
    else if (key == "tp_min_size") c.tp_min_size = to_unsigned(key, value, 1);
    else if (key == "tp_max_size") c.tp_max_size = to_unsigned(key, value, 1);
    else if (key == "follows_property") c.follows_property = value;
    else if (key == "followed_by_property") c.followed_by_property = value;
    else if (key == "k") c.k = to_unsigned(key, value, 1);
    else if (key == "alpha") c.alpha = to_real(key, value, 0.0, 1.0);
    else if (key == "combine") {
        if (value == "max") c.combine = CombineMode::max;
        else if (value == "avg" || value == "average") c.combine = CombineMode::average;
        else bad_value(key, value);
    }
    else if (key == "normalize_by") {
        if (value == "s") c.normalize_by = Normalization::by_s;
        else if (value == "group_size") c.normalize_by = Normalization::by_group_size;
        else bad_value(key, value);
    }
    else if (key == "filter") {
        // comma-separated subset of {pca, subsumption}, or "none"
        c.pca = false;
        c.subsumption = false;
        std::string_view rest = value;
        while (!rest.empty()) {
            auto comma = rest.find(',');
            auto item = trim(rest.substr(0, comma));
            if (item == "pca") c.pca = true;
            else if (item == "subsumption") c.subsumption = true;
            else if (item != "none" && !item.empty()) bad_value(key, value);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    }
    else if (key == "subsumption_hops") {
        auto h = to_unsigned(key, value, 1);
        if (h > 2) bad_value(key, value);
        c.subsumption_hops = static_cast<int>(h);
    }
    else if (key == "peer_noun") c.peer_noun = value;
    else if (key == "norm_scope") c.norm_scope = parse_norm_scope(value);
    else if (key == "pivot_per_class") c.pivot_per_class = to_unsigned(key, value, 1);
    else if (key == "pivot_epochs") c.pivot_epochs = static_cast<int>(to_unsigned(key, value, 1));
    else if (key == "pivot_learning_rate") c.pivot_learning_rate = to_real(key, value, 1e-12, 1e6);
    else if (key == "folds") c.folds = to_unsigned(key, value, 2);
    else if (key == "seed") c.seed = to_unsigned(key, value);
    else throw InputError("unknown config key '" + key + "'");
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path.string());
    const auto dir = path.parent_path();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        try {
            apply_setting(base, trim(text.substr(0, eq)), text.substr(eq + 1), dir);
        } catch (const InputError& err) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + err.what());
        }
    }
    return base;
}

void check_paths_exist(const RunConfig& c) {
    for (const auto* p : {&c.triples, &c.qualifiers, &c.popularity, &c.hierarchy, &c.embeddings,
                          &c.aspects, &c.model}) {
        if (*p && !std::filesystem::exists(**p))
            throw InputError("file not found: " + (*p)->string());
    }
}

}  // namespace negkb

#pragma once
// Run configuration: defaults <- key=value file <- command-line overrides.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "negkb/peer_inference.hpp"
#include "negkb/ranking.hpp"

namespace negkb {

enum class PeeringMode { facet, embedding };

struct RunConfig {
    // inputs
    std::optional<std::filesystem::path> triples;
    std::optional<std::filesystem::path> qualifiers;
    std::optional<std::filesystem::path> popularity;
    std::optional<std::filesystem::path> hierarchy;
    std::optional<std::filesystem::path> embeddings;
    std::optional<std::filesystem::path> aspects;
    std::optional<std::filesystem::path> model;

    // peering
    PeeringMode peering = PeeringMode::facet;
    std::string facet_property = "occupation";
    std::size_t s = 30;
    double min_pop_ratio = 0.25;
    std::size_t embedding_k = 30;
    std::size_t tq_min_size = 10;
    std::size_t tp_min_size = 10;
    std::size_t tp_max_size = 150;
    std::string follows_property = "follows";
    std::string followed_by_property = "followed by";

    // inference
    std::size_t k = 10;
    double alpha = 0.5;
    CombineMode combine = CombineMode::max;
    Normalization normalize_by = Normalization::by_s;
    bool pca = false;
    bool subsumption = false;
    int subsumption_hops = 2;
    std::string peer_noun = "people";

    // ranking
    NormScope norm_scope = NormScope::batch;
    std::size_t pivot_per_class = 100;
    int pivot_epochs = 300;
    double pivot_learning_rate = 0.5;
    std::size_t folds = 5;

    std::uint64_t seed = 42;

    InferOptions infer_options() const;
};

// Recognised keys, in documentation order.
const std::vector<std::string>& config_keys();

// Throws InputError for unknown keys or invalid values. Relative paths are
// resolved against `base_dir`.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   const std::filesystem::path& base_dir = {});

// key=value lines; '#' starts a comment line; surrounding blanks trimmed.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// InputError naming the first configured file that does not exist.
void check_paths_exist(const RunConfig& config);

}  // namespace negkb

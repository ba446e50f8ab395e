#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "dbac/synthbias.hpp"

namespace dbac {

// Complete run configuration. Loaded from a JSON file whose keys match the
// field names below; individual CLI flags override individual keys.
struct RunConfig {
    // data
    std::string dataset;
    std::string header;        // optional; defaults to the sidecar next to `dataset`
    std::string embeddings;    // word-vector file (needed for contextual substitution)
    std::string out_dir;       // empty: compute only, write nothing
    std::string attr_lexicon;  // word-list file; empty: built-in gender list
    bool plural_forms = true;
    std::string attr_mask = "<gender>";
    std::string task_mask = "<Obj>";
    int max_hgcs = 0;          // HGCs used per image; 0 = all

    // measurement
    std::string direction = "both";          // a2t | t2a | both
    std::string substitution = "contextual"; // contextual | constant
    double delta = 0.4;
    std::string q = "accuracy";              // accuracy | inv-ce
    double kappa = 1e-2;
    double epsilon = 1e-8;
    std::string aggregation = "per_sample";  // per_sample | per_group
    int n_runs = 5;
    std::uint64_t seed_base = 1;
    double train_frac = 0.8;

    // attacker
    std::string encoder = "mean_embedding";
    std::vector<std::string> sweep_encoders = {"mean_embedding", "recurrent", "bag_of_words"};
    int embed_dim = 32;
    int hidden_dim = 32;
    int mlp_hidden = 128;
    bool use_pretrained_embeddings = false;
    bool freeze_embeddings = false;
    int epochs = 30;
    int batch_size = 32;
    double learning_rate = 0.05;
    double l2 = 0.0;
    std::string optimizer = "sgd";           // sgd | adam

    // delta sweep
    std::vector<double> sweep_deltas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};

    // controlled experiment
    std::vector<Ratio> ratios = default_ratio_ladder();
    int per_gender_count = 50;
};

// Throws ConfigError on unknown keys or out-of-range values.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);
void validate_config(const RunConfig& c);
nlohmann::json config_echo(const RunConfig& c);

struct RunOutput {
    nlohmann::json report;
    std::string markdown;
    std::map<std::string, std::string> csv_files;  // filename -> content
};

// Full bias measurement: split, mask, align, train the two attackers per
// direction and seed, then aggregate omega/DBAC/LIC with CIs over seeds.
RunOutput run_measure(const RunConfig& c);

// DBAC/LIC per encoder plus cross-encoder coefficient-of-variation and the
// CV percent reduction of DBAC relative to LIC.
RunOutput run_encoder_sweep(const RunConfig& c);

// omega_H and LIC_H under constant vs contextual substitution, plus corpus
// METEOR between pre- and post-substitution captions for both schemes.
RunOutput run_substitution_compare(const RunConfig& c);

// Generates the controlled datasets at each configured ratio and reports
// label balance plus seed-mean attacker leakage per ratio.
RunOutput run_controlled_experiment(const RunConfig& c);

// Substitution statistics as a function of the distance threshold.
RunOutput run_delta_sweep(const RunConfig& c);

// Writes report.json, report.md, and any CSVs into out_dir (creating it).
void write_output(const RunOutput& out, const std::string& out_dir);

}  // namespace dbac

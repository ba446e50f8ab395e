#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "dbac/error.hpp"
#include "dbac/pipeline.hpp"
#include "dbac/report.hpp"
#include "dbac/synthbias.hpp"

namespace {

struct CommonOpts {
    std::string config, dataset, header, embeddings, out, lexicon;
    std::string direction, q, subst, encoder, optimizer, aggregation;
    double delta = 0.0, train_frac = 0.0, lr = 0.0;
    int runs = 0, epochs = 0, batch = 0, max_hgcs = 0, per_gender = 0;
    std::uint64_t seed_base = 0;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config, "JSON config file (flags override its keys)");
    sub->add_option("--dataset", o.dataset, "JSONL caption dataset");
    sub->add_option("--header", o.header, "dataset header JSON (default: sidecar file)");
    sub->add_option("--embeddings", o.embeddings, "word-vector text file");
    sub->add_option("--out", o.out, "output directory (default: print report JSON)");
    sub->add_option("--lexicon", o.lexicon, "attribute word list (default: built-in)");
    sub->add_option("--direction", o.direction, "a2t | t2a | both")
        ->check(CLI::IsMember({"a2t", "t2a", "both"}));
    sub->add_option("--q", o.q, "quality function: accuracy | inv-ce")
        ->check(CLI::IsMember({"accuracy", "inv-ce"}));
    sub->add_option("--subst", o.subst, "substitution scheme: contextual | constant")
        ->check(CLI::IsMember({"contextual", "constant"}));
    sub->add_option("--delta", o.delta, "cosine-distance threshold for substitution");
    sub->add_option("--encoder", o.encoder,
                    "mean_embedding | recurrent | bag_of_words");
    sub->add_option("--optimizer", o.optimizer, "sgd | adam")
        ->check(CLI::IsMember({"sgd", "adam"}));
    sub->add_option("--aggregation", o.aggregation, "per_sample | per_group")
        ->check(CLI::IsMember({"per_sample", "per_group"}));
    sub->add_option("--runs", o.runs, "independent attacker seeds");
    sub->add_option("--seed-base", o.seed_base, "base seed for split and runs");
    sub->add_option("--epochs", o.epochs);
    sub->add_option("--batch-size", o.batch);
    sub->add_option("--lr", o.lr, "learning rate");
    sub->add_option("--train-frac", o.train_frac, "train split fraction in (0, 1)");
    sub->add_option("--max-hgcs", o.max_hgcs, "HGCs used per image (0 = all)");
    sub->add_option("--per-gender", o.per_gender,
                    "captions per gender per controlled subset");
}

dbac::RunConfig build_config(CLI::App* sub, const CommonOpts& o) {
    dbac::RunConfig c =
        o.config.empty() ? dbac::RunConfig{} : dbac::load_config_file(o.config);
    auto has = [&](const std::string& name) { return sub->count(name) > 0; };
    if (has("--dataset")) c.dataset = o.dataset;
    if (has("--header")) c.header = o.header;
    if (has("--embeddings")) c.embeddings = o.embeddings;
    if (has("--out")) c.out_dir = o.out;
    if (has("--lexicon")) c.attr_lexicon = o.lexicon;
    if (has("--direction")) c.direction = o.direction;
    if (has("--q")) c.q = o.q;
    if (has("--subst")) c.substitution = o.subst;
    if (has("--delta")) c.delta = o.delta;
    if (has("--encoder")) c.encoder = o.encoder;
    if (has("--optimizer")) c.optimizer = o.optimizer;
    if (has("--aggregation")) c.aggregation = o.aggregation;
    if (has("--runs")) c.n_runs = o.runs;
    if (has("--seed-base")) c.seed_base = o.seed_base;
    if (has("--epochs")) c.epochs = o.epochs;
    if (has("--batch-size")) c.batch_size = o.batch;
    if (has("--lr")) c.learning_rate = o.lr;
    if (has("--train-frac")) c.train_frac = o.train_frac;
    if (has("--max-hgcs")) c.max_hgcs = o.max_hgcs;
    if (has("--per-gender")) c.per_gender_count = o.per_gender;
    dbac::validate_config(c);
    return c;
}

void emit(const dbac::RunOutput& out, const dbac::RunConfig& c) {
    if (c.out_dir.empty()) {
        std::cout << out.report.dump(2) << "\n";
    } else {
        std::cout << "wrote " << c.out_dir << "/report.json and report.md\n";
        for (const auto& [name, content] : out.csv_files) {
            (void)content;
            std::cout << "wrote " << c.out_dir << "/" << name << "\n";
        }
    }
}

dbac::Ratio parse_ratio(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= s.size()) {
        throw dbac::ConfigError("--ratio must look like \"30:20\"");
    }
    try {
        int r1 = std::stoi(s.substr(0, colon));
        int r2 = std::stoi(s.substr(colon + 1));
        return dbac::Ratio{r1, r2};
    } catch (const std::exception&) {
        throw dbac::ConfigError("--ratio must look like \"30:20\"");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directional bias amplification for image captioning corpora"};
    app.require_subcommand(1);

    CommonOpts o_measure, o_enc, o_subst, o_controlled, o_delta;

    CLI::App* measure = app.add_subcommand(
        "measure", "Leakage, DBAC, and LIC for one dataset");
    add_common(measure, o_measure);
    measure->callback([&] {
        dbac::RunConfig c = build_config(measure, o_measure);
        emit(dbac::run_measure(c), c);
    });

    CLI::App* enc = app.add_subcommand(
        "encoder-sweep", "DBAC/LIC stability across attacker encoders");
    add_common(enc, o_enc);
    enc->callback([&] {
        dbac::RunConfig c = build_config(enc, o_enc);
        emit(dbac::run_encoder_sweep(c), c);
    });

    CLI::App* subst = app.add_subcommand(
        "subst-compare", "Constant vs contextual substitution");
    add_common(subst, o_subst);
    subst->callback([&] {
        dbac::RunConfig c = build_config(subst, o_subst);
        emit(dbac::run_substitution_compare(c), c);
    });

    CLI::App* controlled = app.add_subcommand(
        "controlled", "Synthetic ratio-ladder experiment");
    add_common(controlled, o_controlled);
    controlled->callback([&] {
        dbac::RunConfig c = build_config(controlled, o_controlled);
        emit(dbac::run_controlled_experiment(c), c);
    });

    CLI::App* delta = app.add_subcommand(
        "delta-sweep", "Substitution statistics vs distance threshold");
    add_common(delta, o_delta);
    delta->callback([&] {
        dbac::RunConfig c = build_config(delta, o_delta);
        emit(dbac::run_delta_sweep(c), c);
    });

    CLI::App* gen = app.add_subcommand(
        "gen-controlled", "Write one controlled synthetic dataset");
    std::string ratio_str = "30:20";
    int per_gender = 50;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--ratio", ratio_str, "verb-class ratio r1:r2 (default 30:20)");
    gen->add_option("--per-gender", per_gender, "captions per gender per subset");
    gen->add_option("--seed", gen_seed, "generation seed");
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->callback([&] {
        dbac::ControlledSpec spec = dbac::default_controlled_spec();
        spec.ratio = parse_ratio(ratio_str);
        spec.per_gender_count = per_gender;
        spec.seed = gen_seed;
        dbac::Dataset d = dbac::generate_controlled(spec);
        dbac::ensure_dir(gen_out);
        dbac::save_dataset(d, gen_out + "/dataset.jsonl");
        std::cout << "wrote " << gen_out << "/dataset.jsonl (" << d.records.size()
                  << " records)\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const dbac::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const dbac::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const dbac::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

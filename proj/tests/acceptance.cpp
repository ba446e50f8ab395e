// Acceptance checks for the toolkit. Each check prints exactly one
// [PASS]/[FAIL] line; the process exits nonzero if any check fails.
//
// Usage: acceptance <path-to-dbac-cli>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dbac/attacker.hpp"
#include "dbac/corpus.hpp"
#include "dbac/embedding.hpp"
#include "dbac/error.hpp"
#include "dbac/masking.hpp"
#include "dbac/metrics.hpp"
#include "dbac/pipeline.hpp"
#include "dbac/report.hpp"
#include "dbac/rng.hpp"
#include "dbac/similarity.hpp"
#include "dbac/synthbias.hpp"
#include "dbac/vocab_align.hpp"

using namespace dbac;
using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// ---------------------------------------------------------------------------
// Pinned tolerances and budgets.

constexpr double kBalanceTol = 0.005;           // |co-occurrence - 0.5|
constexpr double kLadderChanceMargin = 0.1;     // most-skewed omega over chance
constexpr double kLadderBudgetSeconds = 180.0;
constexpr double kPercentPointTol = 0.1;        // consistency-gain arithmetic
constexpr int kDbacPairTrials = 100000;
constexpr double kDbacBudgetSeconds = 5.0;
constexpr int kNnOracleTrials = 100;            // per distance threshold
constexpr double kGradientTol = 1e-4;
constexpr int kGradientSamples = 20;            // per encoder
constexpr double kNullDbacTol = 0.05;
constexpr double kAmplifiedDbacMin = 0.2;
constexpr int kAlignmentTrials = 500;
constexpr double kHandValueTol = 1e-5;

int g_failures = 0;

void run_check(int index, const std::string& name,
               const std::function<std::string()>& body) {
    std::string detail;
    bool pass = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("unexpected exception: ") + e.what();
    }
    if (!detail.empty() && detail.rfind("FAIL:", 0) == 0) {
        pass = false;
        detail = detail.substr(5);
    }
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << index << ": " << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

std::string fail(const std::string& why) { return "FAIL:" + why; }

std::string fmt(double v, int decimals = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << v;
    return os.str();
}

// The attacker settings every measurement check runs with. Frozen: they give
// a clean monotone controlled ladder and stable leakage estimates at this
// corpus scale.
RunConfig calibrated_config() {
    RunConfig c;
    c.encoder = "mean_embedding";
    c.optimizer = "adam";
    c.learning_rate = 0.05;
    c.epochs = 60;
    c.l2 = 1e-3;
    c.n_runs = 5;
    c.seed_base = 3;
    c.q = "accuracy";
    c.substitution = "constant";
    return c;
}

std::string tmp_path(const std::string& name) {
    return (fs::path("acceptance_tmp") / name).string();
}

// ---------------------------------------------------------------------------
// Criterion 1: controlled ladder.

std::string check_controlled_ladder() {
    auto t0 = Clock::now();
    RunConfig c = calibrated_config();
    c.ratios = default_ratio_ladder();
    c.per_gender_count = 50;
    RunOutput out = run_controlled_experiment(c);
    double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();

    const json& rows = out.report.at("rows");
    if (rows.size() != 4) return fail("expected 4 ratio rows, got " + std::to_string(rows.size()));

    std::vector<double> omegas;
    std::string ladder;
    for (const json& row : rows) {
        double cooc = row.at("cooccurrence").get<double>();
        if (std::abs(cooc - 0.5) > kBalanceTol) {
            return fail("co-occurrence " + fmt(cooc) + " outside 0.500 +/- " +
                        fmt(kBalanceTol));
        }
        omegas.push_back(row.at("omega_h").at("mean").get<double>());
        if (!ladder.empty()) ladder += "/";
        ladder += fmt(omegas.back());
    }
    for (std::size_t i = 1; i < omegas.size(); ++i) {
        if (!(omegas[i] > omegas[i - 1])) {
            return fail("ladder not strictly increasing: " + ladder);
        }
    }
    double chance = rows.back().at("chance_omega").get<double>();
    double margin = omegas.back() - chance;
    if (margin < kLadderChanceMargin) {
        return fail("most-skewed omega " + fmt(omegas.back()) + " only " + fmt(margin) +
                    " above chance " + fmt(chance));
    }
    if (elapsed >= kLadderBudgetSeconds) {
        return fail("took " + fmt(elapsed, 1) + "s, budget " + fmt(kLadderBudgetSeconds, 0) +
                    "s");
    }
    return "omega " + ladder + ", chance " + fmt(chance) + ", margin " + fmt(margin) + ", " +
           fmt(elapsed, 1) + "s";
}

// ---------------------------------------------------------------------------
// Criterion 2: consistency-gain arithmetic.

std::string check_percent_reduction() {
    const struct {
        double cv_ref, cv_new, expect;
    } cases[] = {
        {2.23, 0.78, 65.06},
        {19.54, 0.64, 96.71},
        {32.52, 0.20, 99.38},
    };
    std::string detail;
    for (const auto& t : cases) {
        double got = percent_reduction(t.cv_ref, t.cv_new);
        if (std::abs(got - t.expect) > kPercentPointTol) {
            return fail("(" + fmt(t.cv_ref, 2) + ", " + fmt(t.cv_new, 2) + ") -> " +
                        fmt(got, 4) + "%, expected " + fmt(t.expect, 2) + " +/- " +
                        fmt(kPercentPointTol, 1) + "pp");
        }
        if (!detail.empty()) detail += ", ";
        detail += fmt(got, 2) + "%";
    }
    return detail;
}

// ---------------------------------------------------------------------------
// Criterion 3: score range, antisymmetry, sign.

std::string check_dbac_properties() {
    auto t0 = Clock::now();
    Rng rng(0xD5A);
    for (int trial = 0; trial < kDbacPairTrials; ++trial) {
        double x = rng.next_double() * 10.0;
        double y = rng.next_double() * 10.0;
        if (trial % 8 == 0) y = x;       // exercise the exact-tie branch
        if (trial % 16 == 0) x = y = 0;  // and the all-zero corner
        double fwd = dbac_value(x, y);
        double rev = dbac_value(y, x);
        if (!(fwd > -1.0 && fwd < 1.0)) {
            return fail("value " + fmt(fwd, 9) + " outside (-1, 1)");
        }
        if (fwd != -rev) {
            return fail("antisymmetry violated at (" + fmt(x, 9) + ", " + fmt(y, 9) + ")");
        }
        if ((x > y && !(fwd > 0.0)) || (x < y && !(fwd < 0.0)) || (x == y && fwd != 0.0)) {
            return fail("sign mismatch at (" + fmt(x, 9) + ", " + fmt(y, 9) + ")");
        }
    }
    double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    if (elapsed >= kDbacBudgetSeconds) {
        return fail("took " + fmt(elapsed, 2) + "s, budget " + fmt(kDbacBudgetSeconds, 0) + "s");
    }
    return std::to_string(kDbacPairTrials) + " pairs in " + fmt(elapsed, 2) + "s";
}

// ---------------------------------------------------------------------------
// Criterion 4: substitution map vs an exhaustive nearest-neighbor oracle.

double oracle_cosine_distance(const std::vector<double>& u, const std::vector<double>& v) {
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    return 1.0 - dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::string check_substitution_oracle() {
    const std::vector<double> deltas = {0.2, 0.4, 0.8};
    std::size_t contextual_total = 0, unk_total = 0;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        for (int trial = 0; trial < kNnOracleTrials; ++trial) {
            Rng rng(1000003ULL * (di + 1) + static_cast<std::uint64_t>(trial));

            VocabPair vocab;
            std::vector<std::string> hgc_words, mgc_words;
            for (int i = 0; i < 200; ++i) hgc_words.push_back("hw" + std::to_string(i));
            for (int i = 0; i < 50; ++i) mgc_words.push_back("mw" + std::to_string(i));
            for (int i = 0; i < 50; ++i) mgc_words.push_back(hgc_words[i]);  // shared half
            vocab.v_hgc.insert(hgc_words.begin(), hgc_words.end());
            vocab.v_mgc.insert(mgc_words.begin(), mgc_words.end());

            std::map<std::string, std::vector<double>> vecs;
            auto random_vec = [&]() {
                std::vector<double> v(16);
                for (double& x : v) x = rng.next_normal();
                return v;
            };
            for (const std::string& w : mgc_words) vecs[w] = random_vec();
            for (const std::string& w : hgc_words) {
                if (vecs.count(w)) continue;  // shared words already drawn
                if (rng.next_double() < 0.3) {
                    // Plant a near neighbor so every delta sees both branches.
                    std::vector<double> v = vecs["mw" + std::to_string(rng.next_index(50))];
                    for (double& x : v) x += 0.05 * rng.next_normal();
                    vecs[w] = v;
                } else {
                    vecs[w] = random_vec();
                }
            }
            EmbeddingTable table(16, vecs);

            SubstitutionStats got = build_substitution_map(vocab, table, deltas[di]);
            contextual_total += got.contextual;
            unk_total += got.unk;

            // Exhaustive oracle: scan every in-vocabulary word, strict-less
            // keeps the lexicographically first of an exact tie.
            std::map<std::string, std::string> want;
            for (const std::string& w : vocab.v_hgc) {
                if (vocab.v_mgc.count(w)) continue;
                double best = std::numeric_limits<double>::infinity();
                std::string best_word;
                for (const std::string& m : vocab.v_mgc) {
                    double d = oracle_cosine_distance(vecs.at(w), vecs.at(m));
                    if (d < best) {
                        best = d;
                        best_word = m;
                    }
                }
                want[w] = best < deltas[di] ? best_word : std::string(kUnkToken);
            }
            if (got.per_word != want) {
                for (const auto& [w, repl] : want) {
                    auto it = got.per_word.find(w);
                    if (it == got.per_word.end() || it->second != repl) {
                        return fail("delta " + fmt(deltas[di], 1) + " trial " +
                                    std::to_string(trial) + ": '" + w + "' -> '" +
                                    (it == got.per_word.end() ? "<missing>" : it->second) +
                                    "', oracle says '" + repl + "'");
                    }
                }
                return fail("map size mismatch at delta " + fmt(deltas[di], 1));
            }
            if (got.total_oov != want.size()) {
                return fail("total_oov " + std::to_string(got.total_oov) + " != " +
                            std::to_string(want.size()));
            }
        }
    }
    if (contextual_total == 0 || unk_total == 0) {
        return fail("degenerate fixture: both substitution branches must occur");
    }
    return std::to_string(kNnOracleTrials) + " trials x 3 deltas, " +
           std::to_string(contextual_total) + " neighbor hits / " +
           std::to_string(unk_total) + " fallbacks";
}

// ---------------------------------------------------------------------------
// Criterion 5: analytic vs finite-difference gradients.

std::string check_gradients() {
    // Separable three-class captions with filler variation. Evaluating at a
    // moderately trained model on label-consistent samples keeps each sample's
    // cross-entropy O(1); central differences at h = 1e-5 then sit far above
    // the double-precision rounding floor, so the comparison measures the
    // gradients rather than cancellation noise.
    const std::vector<std::string> fill = {"a",     "the", "sits", "on",   "mat",    "quietly",
                                           "naps",  "small", "big", "near", "window", "floor"};
    const std::vector<std::string> cls = {"cat", "dog", "bird"};
    Rng rng(42);
    auto make_caption = [&](Rng& r, int c, std::size_t spread) {
        std::string s;
        std::size_t len = 3 + r.next_index(spread);
        std::size_t pos = r.next_index(len);
        for (std::size_t i = 0; i < len; ++i) {
            if (i) s += ' ';
            s += (i == pos) ? cls[static_cast<std::size_t>(c)] : fill[r.next_index(fill.size())];
        }
        return s;
    };
    std::vector<LabeledCaption> train;
    for (int i = 0; i < 60; ++i) train.push_back({make_caption(rng, i % 3, 5), i % 3});

    double worst = 0.0;
    for (EncoderKind kind : {EncoderKind::MeanEmbedding, EncoderKind::Recurrent}) {
        EncoderConfig ec;
        ec.kind = kind;
        ec.embed_dim = 12;
        ec.hidden_dim = 10;
        ec.mlp_hidden = 24;
        ec.seed = 17;
        TrainConfig tc;
        tc.epochs = 30;
        tc.learning_rate = 0.05;
        AttackerModel m = train_attacker(train, ec, tc, 3);
        Rng srng(7);
        for (int s = 0; s < kGradientSamples; ++s) {
            int c = static_cast<int>(srng.next_index(3));
            LabeledCaption sample{make_caption(srng, c, 6), c};
            double err = gradient_check(m, sample);
            worst = std::max(worst, err);
            if (err >= kGradientTol) {
                return fail(encoder_kind_name(kind) + " relative error " + fmt(err, 8) +
                            " on \"" + sample.text + "\"");
            }
        }
    }
    return "max relative error " + fmt(worst, 8) + " over 2 x " +
           std::to_string(kGradientSamples) + " samples";
}

// ---------------------------------------------------------------------------
// Criterion 6: contextual substitution beats the constant baseline.

Dataset near_synonym_fixture() {
    Dataset d;
    d.attribute_domain = {"male", "female"};
    d.task_lexicon = {"tire", "diaper"};
    for (int i = 0; i < 30; ++i) {
        CaptionRecord m;
        m.image_id = "m" + std::to_string(i);
        m.hgcs = {"a man changing a tire at home"};
        m.mgc = "a person changing a wheel at home";
        m.attribute = "male";
        m.tasks = {"tire"};
        d.records.push_back(m);

        CaptionRecord f;
        f.image_id = "f" + std::to_string(i);
        f.hgcs = {"a woman changing a diaper at home"};
        f.mgc = "a person changing a underpants at home";
        f.attribute = "female";
        f.tasks = {"diaper"};
        d.records.push_back(f);
    }
    return d;
}

std::string write_synonym_embeddings() {
    std::string path = tmp_path("near_synonyms.vec");
    std::ofstream out(path);
    out << "tire 1 0.1 0\n"
        << "wheel 0.95 0.2 0.05\n"
        << "diaper 0 1 0.1\n"
        << "underpants 0.05 0.9 0.2\n"
        << "person 0.3 0.3 0.9\n";
    return path;
}

std::string check_substitution_direction() {
    Dataset d = near_synonym_fixture();
    std::string data_path = tmp_path("near_synonyms.jsonl");
    save_dataset(d, data_path);
    std::string emb_path = write_synonym_embeddings();

    // Leakage half: the attribute attacker on the rewritten captions, five
    // seeds per scheme, compared as seed means.
    RunConfig c = calibrated_config();
    c.dataset = data_path;
    c.embeddings = emb_path;
    c.delta = 0.4;
    RunOutput out = run_substitution_compare(c);
    double w_const = out.report.at("omega_h").at("constant").at("mean").get<double>();
    double w_ctx = out.report.at("omega_h").at("contextual").at("mean").get<double>();
    if (!(w_ctx >= w_const)) {
        return fail("omega_H contextual " + fmt(w_ctx) + " < constant " + fmt(w_const));
    }

    // Similarity half: score the rewritten captions against independent
    // references (the model captions) that contain the planted synonyms.
    EmbeddingTable table = load_embeddings(emb_path);
    Lexicon gender = default_gender_lexicon("<gender>", true);
    std::vector<std::string> hgc_masked, refs;
    for (const CaptionRecord& rec : d.records) {
        hgc_masked.push_back(mask_caption(rec.hgcs[0], gender));
        refs.push_back(rec.mgc);
    }
    VocabPair vocab = make_vocab_pair(hgc_masked, refs);
    AlignedCorpus ctx = contextual_substitute(hgc_masked, vocab, table, 0.4);
    AlignedCorpus cst = constant_substitute(hgc_masked, vocab);
    auto pair_up = [&](const std::vector<std::string>& hyps) {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (std::size_t i = 0; i < hyps.size(); ++i) pairs.emplace_back(refs[i], hyps[i]);
        return pairs;
    };
    double meteor_ctx = corpus_meteor(pair_up(ctx.captions));
    double meteor_cst = corpus_meteor(pair_up(cst.captions));
    if (!(meteor_ctx > meteor_cst)) {
        return fail("corpus METEOR contextual " + fmt(meteor_ctx, 4) + " <= constant " +
                    fmt(meteor_cst, 4));
    }
    return "METEOR " + fmt(meteor_ctx, 4) + " > " + fmt(meteor_cst, 4) + ", omega_H " +
           fmt(w_ctx) + " >= " + fmt(w_const);
}

// ---------------------------------------------------------------------------
// Criterion 7: null and amplification fixtures.

Dataset amplification_fixture() {
    // Human captions are task-neutral once the task word is masked; model
    // captions carry a surviving correlate word per task.
    Dataset d;
    d.attribute_domain = {"male", "female"};
    d.task_lexicon = {"bed", "frisbee"};
    const char* attrs[2] = {"male", "female"};
    for (int i = 0; i < 60; ++i) {
        CaptionRecord b;
        b.image_id = "b" + std::to_string(i);
        b.hgcs = {"a person with a bed at the park"};
        b.mgc = "a person with a bed at the park and a guitar";
        b.attribute = attrs[i % 2];
        b.tasks = {"bed"};
        d.records.push_back(b);

        CaptionRecord f;
        f.image_id = "p" + std::to_string(i);
        f.hgcs = {"a person with a frisbee at the park"};
        f.mgc = "a person with a frisbee at the park and a knife";
        f.attribute = attrs[(i + 1) % 2];
        f.tasks = {"frisbee"};
        d.records.push_back(f);
    }
    return d;
}

std::string check_null_and_amplification() {
    // Null half: paired corpora are identical by construction, so the score
    // must sit at zero up to attacker-seed noise, in both directions.
    ControlledSpec spec = default_controlled_spec();
    spec.ratio = {45, 5};
    spec.per_gender_count = 50;
    spec.seed = 3;
    std::string null_path = tmp_path("null_fixture.jsonl");
    save_dataset(generate_controlled(spec), null_path);

    RunConfig c = calibrated_config();
    c.dataset = null_path;
    c.direction = "both";
    RunOutput null_out = run_measure(c);
    std::string detail = "null";
    for (const json& rep : null_out.report.at("reports")) {
        double mean = rep.at("dbac").at("mean").get<double>();
        std::string dir = rep.at("direction").get<std::string>();
        if (std::abs(mean) > kNullDbacTol) {
            return fail("null " + dir + " score " + fmt(mean) + " exceeds +/-" +
                        fmt(kNullDbacTol, 2));
        }
        detail += " " + dir + " " + fmt(mean);
    }

    // Amplification half: the correlate words exist only on the model side,
    // so the task->attribute score must come out clearly positive.
    std::string amp_path = tmp_path("amplification_fixture.jsonl");
    save_dataset(amplification_fixture(), amp_path);
    RunConfig a = calibrated_config();
    a.dataset = amp_path;
    a.direction = "t2a";
    RunOutput amp_out = run_measure(a);
    const json& rep = amp_out.report.at("reports").at(0);
    double mean = rep.at("dbac").at("mean").get<double>();
    double ci = rep.at("dbac").at("ci_halfwidth").get<double>();
    if (!(mean > kAmplifiedDbacMin)) {
        return fail("amplified score " + fmt(mean) + " not above " +
                    fmt(kAmplifiedDbacMin, 1));
    }
    if (!(mean - ci > 0.0)) {
        return fail("95% interval " + fmt(mean) + " +/- " + fmt(ci) + " includes 0");
    }
    return detail + "; amplified " + fmt(mean) + " +/- " + fmt(ci);
}

// ---------------------------------------------------------------------------
// Criterion 8: byte-identical reports through the command-line tool.

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string check_cli_determinism(const std::string& cli) {
    if (cli.empty()) return fail("no CLI binary path given (argv[1])");

    ControlledSpec spec = default_controlled_spec();
    spec.ratio = {9, 1};
    spec.per_gender_count = 10;
    spec.seed = 7;
    std::string data = tmp_path("cli_fixture.jsonl");
    save_dataset(generate_controlled(spec), data);

    // The exact same command line runs twice (the config echo is part of the
    // report, so the output directory must match too); the first report is
    // set aside before the rerun overwrites it.
    std::string out_dir = tmp_path("cli_run");
    std::string cmd = "\"" + cli + "\" measure --dataset \"" + data + "\" --out \"" + out_dir +
                      "\" --runs 2 --epochs 3 --seed-base 5 --subst constant"
                      " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return fail("first invocation exited nonzero");
    std::string a = read_file_bytes(out_dir + "/report.json");
    if (std::system(cmd.c_str()) != 0) return fail("second invocation exited nonzero");
    std::string b = read_file_bytes(out_dir + "/report.json");
    if (a.empty()) return fail("first run produced an empty report.json");
    if (a != b) return fail("report.json differs between identical invocations");
    return std::to_string(a.size()) + " bytes, identical";
}

// ---------------------------------------------------------------------------
// Criterion 9: threshold sweep monotonicity.

std::string check_delta_sweep_monotone() {
    for (int trial = 0; trial < 5; ++trial) {
        Rng rng(9000 + trial);
        VocabPair vocab;
        std::map<std::string, std::vector<double>> vecs;
        auto random_vec = [&]() {
            std::vector<double> v(8);
            for (double& x : v) x = rng.next_normal();
            return v;
        };
        for (int i = 0; i < 30; ++i) {
            std::string w = "m" + std::to_string(i);
            vocab.v_mgc.insert(w);
            vecs[w] = random_vec();
        }
        for (int i = 0; i < 40; ++i) {
            std::string w = "h" + std::to_string(i);
            vocab.v_hgc.insert(w);
            if (rng.next_double() < 0.4) {
                // Near-copies at varying noise scales spread the distances.
                std::vector<double> v = vecs["m" + std::to_string(rng.next_index(30))];
                double scale = 0.01 + 0.3 * rng.next_double();
                for (double& x : v) x += scale * rng.next_normal();
                vecs[w] = v;
            } else {
                vecs[w] = random_vec();
            }
        }
        EmbeddingTable table(8, vecs);

        double prev = -1.0;
        for (double delta : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}) {
            double rate = substitution_rate(build_substitution_map(vocab, table, delta));
            if (rate < 0.0 || rate > 1.0) {
                return fail("rate " + fmt(rate) + " outside [0, 1]");
            }
            if (rate < prev) {
                return fail("rate fell from " + fmt(prev) + " to " + fmt(rate) +
                            " at delta " + fmt(delta, 1) + " (trial " +
                            std::to_string(trial) + ")");
            }
            prev = rate;
        }
        // Cosine distance never exceeds 2, so past that every embedded word
        // finds a neighbor.
        double full = substitution_rate(build_substitution_map(vocab, table, 2.000001));
        if (full != 1.0) {
            return fail("rate at delta just above 2 is " + fmt(full) + ", expected 1");
        }
    }
    return "non-decreasing over 8 thresholds x 5 corpora, full coverage past 2";
}

// ---------------------------------------------------------------------------
// Criterion 10: alignment scorer vs exhaustive search plus hand values.

struct BruteState {
    const std::vector<std::string>* ref;
    const std::vector<std::string>* hyp;
    std::vector<int> assign;
    std::vector<bool> used;
    std::size_t best_m = 0;
    std::size_t best_ch = 0;
};

void brute_count(BruteState& st) {
    std::size_t m = 0, ch = 0;
    int prev_h = -2, prev_r = -2;
    for (std::size_t h = 0; h < st.assign.size(); ++h) {
        if (st.assign[h] < 0) continue;
        ++m;
        bool contiguous = (static_cast<int>(h) == prev_h + 1) && (st.assign[h] == prev_r + 1);
        if (!contiguous) ++ch;
        prev_h = static_cast<int>(h);
        prev_r = st.assign[h];
    }
    if (m > st.best_m || (m == st.best_m && (st.best_m == 0 || ch < st.best_ch))) {
        st.best_m = m;
        st.best_ch = (m == 0) ? 0 : ch;
    }
}

void brute_rec(BruteState& st, std::size_t h) {
    if (h == st.hyp->size()) {
        brute_count(st);
        return;
    }
    st.assign[h] = -1;
    brute_rec(st, h + 1);
    for (std::size_t r = 0; r < st.ref->size(); ++r) {
        if (!st.used[r] && (*st.ref)[r] == (*st.hyp)[h]) {
            st.used[r] = true;
            st.assign[h] = static_cast<int>(r);
            brute_rec(st, h + 1);
            st.assign[h] = -1;
            st.used[r] = false;
        }
    }
}

double brute_cost(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
    double cost = 1.0;
    for (const std::string& w : hyp) {
        cost *= 1.0 + static_cast<double>(std::count(ref.begin(), ref.end(), w));
    }
    return cost;
}

std::string check_alignment_oracle() {
    static const std::vector<std::string> kWords = {"a", "b", "c", "d", "e", "f", "g", "h"};
    Rng rng(0xA11C);
    auto random_sentence = [&](std::size_t alphabet) {
        std::vector<std::string> s;
        std::size_t len = rng.next_index(13);  // 0..12 tokens
        for (std::size_t i = 0; i < len; ++i) s.push_back(kWords[rng.next_index(alphabet)]);
        return s;
    };

    for (int trial = 0; trial < kAlignmentTrials; ++trial) {
        std::size_t alphabet = 4 + rng.next_index(5);
        std::vector<std::string> ref = random_sentence(alphabet);
        std::vector<std::string> hyp = random_sentence(alphabet);
        for (int tries = 0; brute_cost(ref, hyp) > 4e6 && tries < 50; ++tries) {
            ref = random_sentence(alphabet);
            hyp = random_sentence(alphabet);
        }
        if (brute_cost(ref, hyp) > 4e6) continue;

        AlignmentResult got = align_tokens(ref, hyp);
        BruteState st;
        st.ref = &ref;
        st.hyp = &hyp;
        st.assign.assign(hyp.size(), -1);
        st.used.assign(ref.size(), false);
        brute_rec(st, 0);
        if (got.matches != st.best_m || got.chunks != st.best_ch) {
            return fail("trial " + std::to_string(trial) + ": got (m=" +
                        std::to_string(got.matches) + ", ch=" + std::to_string(got.chunks) +
                        "), oracle (m=" + std::to_string(st.best_m) + ", ch=" +
                        std::to_string(st.best_ch) + ")");
        }
    }

    double identical = meteor("a red tire", "a red tire");
    if (std::abs(identical - 0.98148) > kHandValueTol) {
        return fail("identical-caption score " + fmt(identical, 7) + " != 0.98148");
    }
    double substituted = meteor("a man changing a tire", "a man changing a <unk>");
    if (std::abs(substituted - 0.79375) > kHandValueTol) {
        return fail("substituted-caption score " + fmt(substituted, 7) + " != 0.79375");
    }
    return std::to_string(kAlignmentTrials) + " trials, hand values " + fmt(identical, 5) +
           " / " + fmt(substituted, 5);
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";

    std::error_code ec;
    fs::remove_all("acceptance_tmp", ec);
    fs::create_directories("acceptance_tmp");

    run_check(1, "controlled corpora yield a monotone leakage ladder",
              check_controlled_ladder);
    run_check(2, "consistency-gain percentages match the reference arithmetic",
              check_percent_reduction);
    run_check(3, "score range, exact antisymmetry, and sign", check_dbac_properties);
    run_check(4, "substitution map equals the exhaustive nearest-neighbor oracle",
              check_substitution_oracle);
    run_check(5, "analytic gradients match central differences", check_gradients);
    run_check(6, "contextual substitution preserves similarity and leakage",
              check_substitution_direction);
    run_check(7, "null fixture scores zero; planted amplification is detected",
              check_null_and_amplification);
    run_check(8, "command-line measurement runs are byte-identical",
              [&] { return check_cli_determinism(cli); });
    run_check(9, "substitution rate is monotone in the distance threshold",
              check_delta_sweep_monotone);
    run_check(10, "caption aligner is exhaustive-optimal and matches hand values",
              check_alignment_oracle);

    fs::remove_all("acceptance_tmp", ec);
    if (g_failures > 0) {
        std::cout << g_failures << " acceptance check(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all 10 acceptance checks passed" << std::endl;
    return 0;
}

#include "dbac/attacker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dbac/error.hpp"
#include "dbac/rng.hpp"
#include "dbac/tokenize.hpp"

namespace dbac {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Vocabulary

TokenVocab TokenVocab::build(const std::vector<std::string>& captions,
                             const std::vector<std::string>& extra_specials) {
    TokenVocab v;
    auto add = [&v](const std::string& w) {
        if (v.word_to_id.emplace(w, static_cast<int>(v.id_to_word.size())).second) {
            v.id_to_word.push_back(w);
        }
    };
    add("<pad>");
    add("<unk>");
    for (const std::string& s : extra_specials) add(normalize_token(s));

    std::set<std::string> words;
    for (const std::string& c : captions) {
        for (const std::string& t : tokenize(c)) words.insert(t);
    }
    for (const std::string& w : words) add(w);
    return v;
}

int TokenVocab::id(const std::string& token) const {
    auto it = word_to_id.find(token);
    return it == word_to_id.end() ? kUnkId : it->second;
}

std::vector<int> TokenVocab::encode(const std::string& caption) const {
    std::vector<int> ids;
    for (const std::string& t : tokenize(caption)) ids.push_back(id(t));
    if (ids.empty()) ids.push_back(kPadId);
    return ids;
}

std::string encoder_kind_name(EncoderKind kind) {
    switch (kind) {
        case EncoderKind::MeanEmbedding: return "mean_embedding";
        case EncoderKind::Recurrent: return "recurrent";
        case EncoderKind::BagOfWords: return "bag_of_words";
    }
    return "?";
}

EncoderKind encoder_kind_from_name(const std::string& name) {
    if (name == "mean_embedding") return EncoderKind::MeanEmbedding;
    if (name == "recurrent") return EncoderKind::Recurrent;
    if (name == "bag_of_words") return EncoderKind::BagOfWords;
    throw ConfigError("unknown encoder kind \"" + name +
                      "\" (expected mean_embedding, recurrent, or bag_of_words)");
}

std::string q_kind_name(QKind kind) {
    return kind == QKind::Accuracy ? "accuracy" : "inv_cross_entropy";
}

int AttackerModel::encoder_output_dim() const {
    switch (cfg.kind) {
        case EncoderKind::MeanEmbedding: return cfg.embed_dim;
        case EncoderKind::Recurrent: return cfg.hidden_dim;
        case EncoderKind::BagOfWords: return static_cast<int>(vocab.size());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Forward / backward

namespace {

struct Forward {
    std::vector<int> ids;
    std::vector<VectorXd> h;  // recurrent states h_1..h_T
    VectorXd enc, z1pre, z1, z2pre, z2, logits, probs;
    double ce = 0.0;
};

struct Gradients {
    MatrixXd embed, w_xh, w_hh, b_h, w1, b1, w2, b2, w3, b3;

    static Gradients zeros_like(const AttackerModel& m) {
        Gradients g;
        auto z = [](const MatrixXd& p) { return MatrixXd::Zero(p.rows(), p.cols()).eval(); };
        g.embed = z(m.embed);
        g.w_xh = z(m.w_xh);
        g.w_hh = z(m.w_hh);
        g.b_h = z(m.b_h);
        g.w1 = z(m.w1);
        g.b1 = z(m.b1);
        g.w2 = z(m.w2);
        g.b2 = z(m.b2);
        g.w3 = z(m.w3);
        g.b3 = z(m.b3);
        return g;
    }
};

struct ParamRef {
    const char* name;
    MatrixXd* value;
    MatrixXd* grad;
    bool weight_decay;
};

std::vector<ParamRef> trainable_params(AttackerModel& m, Gradients& g) {
    std::vector<ParamRef> out;
    bool has_embed = m.cfg.kind != EncoderKind::BagOfWords;
    if (has_embed && !m.cfg.freeze_embeddings) {
        out.push_back({"embed", &m.embed, &g.embed, false});
    }
    if (m.cfg.kind == EncoderKind::Recurrent) {
        out.push_back({"w_xh", &m.w_xh, &g.w_xh, true});
        out.push_back({"w_hh", &m.w_hh, &g.w_hh, true});
        out.push_back({"b_h", &m.b_h, &g.b_h, false});
    }
    out.push_back({"w1", &m.w1, &g.w1, true});
    out.push_back({"b1", &m.b1, &g.b1, false});
    out.push_back({"w2", &m.w2, &g.w2, true});
    out.push_back({"b2", &m.b2, &g.b2, false});
    out.push_back({"w3", &m.w3, &g.w3, true});
    out.push_back({"b3", &m.b3, &g.b3, false});
    return out;
}

VectorXd encode_ids(const AttackerModel& m, const std::vector<int>& ids,
                    std::vector<VectorXd>* states) {
    switch (m.cfg.kind) {
        case EncoderKind::MeanEmbedding: {
            VectorXd enc = VectorXd::Zero(m.cfg.embed_dim);
            for (int id : ids) enc += m.embed.row(id).transpose();
            enc /= static_cast<double>(ids.size());
            return enc;
        }
        case EncoderKind::Recurrent: {
            VectorXd h = VectorXd::Zero(m.cfg.hidden_dim);
            for (int id : ids) {
                VectorXd pre = m.w_xh * m.embed.row(id).transpose() + m.w_hh * h + m.b_h.col(0);
                h = pre.array().tanh().matrix();
                if (states) states->push_back(h);
            }
            return h;
        }
        case EncoderKind::BagOfWords: {
            VectorXd enc = VectorXd::Zero(static_cast<int>(m.vocab.size()));
            for (int id : ids) enc[id] += 1.0;
            return enc;
        }
    }
    throw NumericError("unreachable encoder kind");
}

Forward forward_ids(const AttackerModel& m, const std::vector<int>& ids, int label) {
    Forward f;
    f.ids = ids;
    f.enc = encode_ids(m, ids, m.cfg.kind == EncoderKind::Recurrent ? &f.h : nullptr);
    f.z1pre = m.w1 * f.enc + m.b1.col(0);
    f.z1 = f.z1pre.cwiseMax(0.0);
    f.z2pre = m.w2 * f.z1 + m.b2.col(0);
    f.z2 = f.z2pre.cwiseMax(0.0);
    f.logits = m.w3 * f.z2 + m.b3.col(0);

    double mx = f.logits.maxCoeff();
    double lse = std::log((f.logits.array() - mx).exp().sum()) + mx;
    f.probs = (f.logits.array() - lse).exp().matrix();
    if (label >= 0) f.ce = lse - f.logits[label];
    return f;
}

void backward(const AttackerModel& m, const Forward& f, int label, Gradients& g) {
    VectorXd dlogits = f.probs;
    dlogits[label] -= 1.0;

    g.w3 += dlogits * f.z2.transpose();
    g.b3.col(0) += dlogits;
    VectorXd dz2 = m.w3.transpose() * dlogits;
    VectorXd dz2pre = dz2.cwiseProduct((f.z2pre.array() > 0.0).cast<double>().matrix());

    g.w2 += dz2pre * f.z1.transpose();
    g.b2.col(0) += dz2pre;
    VectorXd dz1 = m.w2.transpose() * dz2pre;
    VectorXd dz1pre = dz1.cwiseProduct((f.z1pre.array() > 0.0).cast<double>().matrix());

    g.w1 += dz1pre * f.enc.transpose();
    g.b1.col(0) += dz1pre;
    VectorXd denc = m.w1.transpose() * dz1pre;

    switch (m.cfg.kind) {
        case EncoderKind::MeanEmbedding: {
            double inv_n = 1.0 / static_cast<double>(f.ids.size());
            for (int id : f.ids) {
                g.embed.row(id) += inv_n * denc.transpose();
            }
            break;
        }
        case EncoderKind::Recurrent: {
            VectorXd dh = denc;
            for (std::size_t t = f.ids.size(); t-- > 0;) {
                const VectorXd& ht = f.h[t];
                VectorXd dpre = (dh.array() * (1.0 - ht.array().square())).matrix();
                VectorXd x = m.embed.row(f.ids[t]).transpose();
                VectorXd hprev =
                    t == 0 ? VectorXd::Zero(m.cfg.hidden_dim).eval() : f.h[t - 1];
                g.w_xh += dpre * x.transpose();
                g.w_hh += dpre * hprev.transpose();
                g.b_h.col(0) += dpre;
                g.embed.row(f.ids[t]) += (m.w_xh.transpose() * dpre).transpose();
                dh = m.w_hh.transpose() * dpre;
            }
            break;
        }
        case EncoderKind::BagOfWords:
            break;  // the count vector has no parameters behind it
    }
}

void check_train_config(const TrainConfig& tc) {
    if (tc.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (tc.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (tc.learning_rate < 0.0) throw ConfigError("learning_rate must be >= 0");
    if (tc.l2 < 0.0) throw ConfigError("l2 must be >= 0");
}

void check_encoder_config(const EncoderConfig& ec) {
    if (ec.embed_dim < 1 && ec.kind != EncoderKind::BagOfWords) {
        throw ConfigError("embed_dim must be >= 1");
    }
    if (ec.hidden_dim < 1 && ec.kind == EncoderKind::Recurrent) {
        throw ConfigError("hidden_dim must be >= 1");
    }
    if (ec.mlp_hidden < 1) throw ConfigError("mlp_hidden must be >= 1");
}

MatrixXd init_matrix(int rows, int cols, double stddev, Rng& rng) {
    MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = rng.next_normal(0.0, stddev);
    }
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Training

AttackerModel train_attacker(const std::vector<LabeledCaption>& train,
                             const EncoderConfig& enc_cfg, const TrainConfig& train_cfg,
                             int n_classes, const std::vector<std::string>& extra_specials) {
    check_encoder_config(enc_cfg);
    check_train_config(train_cfg);
    if (train.empty()) throw DataError("attacker training set is empty");
    if (n_classes < 2) throw ConfigError("attacker needs n_classes >= 2");

    std::set<int> seen;
    for (const LabeledCaption& s : train) {
        if (s.label < 0 || s.label >= n_classes) {
            std::ostringstream os;
            os << "training label " << s.label << " outside [0, " << n_classes << ")";
            throw DataError(os.str());
        }
        seen.insert(s.label);
    }
    if (seen.size() < 2) {
        throw DataError("attacker training set contains a single class; "
                        "at least two distinct labels are required");
    }

    AttackerModel m;
    m.cfg = enc_cfg;
    m.n_classes = n_classes;
    std::vector<std::string> captions;
    captions.reserve(train.size());
    for (const LabeledCaption& s : train) captions.push_back(s.text);
    m.vocab = TokenVocab::build(captions, extra_specials);

    const int v = static_cast<int>(m.vocab.size());
    Rng init_rng(enc_cfg.seed);
    if (enc_cfg.kind != EncoderKind::BagOfWords) {
        m.embed = init_matrix(v, enc_cfg.embed_dim, 0.3, init_rng);
        if (enc_cfg.init_embeddings) {
            const EmbeddingTable& table = *enc_cfg.init_embeddings;
            if (static_cast<int>(table.dim()) != enc_cfg.embed_dim) {
                std::ostringstream os;
                os << "pretrained embeddings have dim " << table.dim()
                   << " but embed_dim is " << enc_cfg.embed_dim;
                throw ConfigError(os.str());
            }
            for (int i = 0; i < v; ++i) {
                if (const std::vector<double>* vec = table.find(m.vocab.id_to_word[i])) {
                    for (int d = 0; d < enc_cfg.embed_dim; ++d) m.embed(i, d) = (*vec)[d];
                }
            }
        }
    } else {
        m.embed.resize(0, 0);
    }
    if (enc_cfg.kind == EncoderKind::Recurrent) {
        m.w_xh = init_matrix(enc_cfg.hidden_dim, enc_cfg.embed_dim,
                             1.0 / std::sqrt(enc_cfg.embed_dim), init_rng);
        m.w_hh = init_matrix(enc_cfg.hidden_dim, enc_cfg.hidden_dim,
                             1.0 / std::sqrt(enc_cfg.hidden_dim), init_rng);
        m.b_h = MatrixXd::Zero(enc_cfg.hidden_dim, 1);
    }
    const int enc_dim = m.encoder_output_dim();
    m.w1 = init_matrix(enc_cfg.mlp_hidden, enc_dim, std::sqrt(2.0 / enc_dim), init_rng);
    m.b1 = MatrixXd::Zero(enc_cfg.mlp_hidden, 1);
    m.w2 = init_matrix(enc_cfg.mlp_hidden, enc_cfg.mlp_hidden,
                       std::sqrt(2.0 / enc_cfg.mlp_hidden), init_rng);
    m.b2 = MatrixXd::Zero(enc_cfg.mlp_hidden, 1);
    m.w3 = MatrixXd::Zero(n_classes, enc_cfg.mlp_hidden);
    m.b3 = MatrixXd::Zero(n_classes, 1);

    std::vector<std::vector<int>> encoded;
    encoded.reserve(train.size());
    for (const LabeledCaption& s : train) encoded.push_back(m.vocab.encode(s.text));

    Gradients grads = Gradients::zeros_like(m);
    std::vector<ParamRef> params = trainable_params(m, grads);

    // Adam state, allocated lazily alongside the parameter list.
    std::vector<MatrixXd> adam_m, adam_v;
    long adam_t = 0;
    if (train_cfg.optimizer == Optimizer::Adam) {
        for (const ParamRef& p : params) {
            adam_m.push_back(MatrixXd::Zero(p.value->rows(), p.value->cols()));
            adam_v.push_back(MatrixXd::Zero(p.value->rows(), p.value->cols()));
        }
    }

    Rng order_rng(train_cfg.seed);
    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const std::size_t n = train.size();
    for (int epoch = 0; epoch < train_cfg.epochs; ++epoch) {
        order_rng.shuffle(order);
        double loss_sum = 0.0;

        for (std::size_t start = 0; start < n; start += train_cfg.batch_size) {
            std::size_t stop = std::min(n, start + train_cfg.batch_size);
            for (const ParamRef& p : params) p.grad->setZero();

            for (std::size_t k = start; k < stop; ++k) {
                const std::size_t i = order[k];
                Forward f = forward_ids(m, encoded[i], train[i].label);
                loss_sum += f.ce;
                backward(m, f, train[i].label, grads);
            }

            double batch_loss = loss_sum;  // running; NaN anywhere poisons the sum
            if (!std::isfinite(batch_loss)) {
                std::ostringstream os;
                os << "training loss became non-finite at epoch " << epoch << ", batch "
                   << (start / train_cfg.batch_size) << " (lr=" << train_cfg.learning_rate
                   << ", optimizer="
                   << (train_cfg.optimizer == Optimizer::Sgd ? "sgd" : "adam") << ")";
                throw NumericError(os.str());
            }

            const double inv_b = 1.0 / static_cast<double>(stop - start);
            if (train_cfg.optimizer == Optimizer::Sgd) {
                for (const ParamRef& p : params) {
                    MatrixXd step = *p.grad * inv_b;
                    if (p.weight_decay && train_cfg.l2 > 0.0) step += train_cfg.l2 * *p.value;
                    *p.value -= train_cfg.learning_rate * step;
                }
            } else {
                ++adam_t;
                const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
                double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam_t));
                double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam_t));
                for (std::size_t pi = 0; pi < params.size(); ++pi) {
                    MatrixXd step = *params[pi].grad * inv_b;
                    if (params[pi].weight_decay && train_cfg.l2 > 0.0) {
                        step += train_cfg.l2 * *params[pi].value;
                    }
                    adam_m[pi] = beta1 * adam_m[pi] + (1.0 - beta1) * step;
                    adam_v[pi] = beta2 * adam_v[pi] + (1.0 - beta2) * step.cwiseProduct(step);
                    MatrixXd mhat = adam_m[pi] / bc1;
                    MatrixXd vhat = adam_v[pi] / bc2;
                    *params[pi].value -=
                        train_cfg.learning_rate *
                        (mhat.array() / (vhat.array().sqrt() + eps)).matrix();
                }
            }
        }
        m.epoch_loss.push_back(loss_sum / static_cast<double>(n));
    }
    return m;
}

VectorXd predict(const AttackerModel& m, const std::string& caption) {
    Forward f = forward_ids(m, m.vocab.encode(caption), -1);
    return f.probs;
}

double mean_cross_entropy(const AttackerModel& m, const std::vector<LabeledCaption>& samples) {
    if (samples.empty()) throw DataError("mean_cross_entropy over an empty sample list");
    double sum = 0.0;
    for (const LabeledCaption& s : samples) {
        sum += forward_ids(m, m.vocab.encode(s.text), s.label).ce;
    }
    return sum / static_cast<double>(samples.size());
}

// ---------------------------------------------------------------------------
// Quality functions

QualityVector quality_accuracy(const std::vector<VectorXd>& preds,
                               const std::vector<int>& labels) {
    if (preds.size() != labels.size()) {
        throw DataError("quality_accuracy: prediction/label count mismatch");
    }
    QualityVector q;
    q.kind = QKind::Accuracy;
    q.values.reserve(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        int best = 0;
        for (int c = 1; c < preds[i].size(); ++c) {
            if (preds[i][c] > preds[i][best]) best = c;  // ties keep the lowest index
        }
        q.values.push_back(best == labels[i] ? 1.0 : 0.0);
    }
    return q;
}

QualityVector quality_inv_ce(const std::vector<VectorXd>& preds,
                             const std::vector<int>& labels, double kappa) {
    if (preds.size() != labels.size()) {
        throw DataError("quality_inv_ce: prediction/label count mismatch");
    }
    if (!(kappa > 0.0)) throw ConfigError("kappa must be > 0");
    QualityVector q;
    q.kind = QKind::InvCrossEntropy;
    q.values.reserve(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= preds[i].size()) {
            throw DataError("quality_inv_ce: label outside prediction range");
        }
        double p = std::max(preds[i][labels[i]], 1e-12);
        double ce = -std::log(p);
        q.values.push_back(1.0 / (ce + kappa));
    }
    return q;
}

// ---------------------------------------------------------------------------
// Gradient verification

double gradient_check(AttackerModel& m, const LabeledCaption& sample, double h) {
    if (!(h > 0.0)) throw ConfigError("finite-difference step h must be > 0");
    std::vector<int> ids = m.vocab.encode(sample.text);
    if (sample.label < 0 || sample.label >= m.n_classes) {
        throw DataError("gradient_check: label outside [0, n_classes)");
    }

    Gradients grads = Gradients::zeros_like(m);
    std::vector<ParamRef> params = trainable_params(m, grads);
    Forward f = forward_ids(m, ids, sample.label);
    backward(m, f, sample.label, grads);

    double max_rel = 0.0;
    for (const ParamRef& p : params) {
        MatrixXd& value = *p.value;
        const MatrixXd& grad = *p.grad;
        for (int r = 0; r < value.rows(); ++r) {
            for (int c = 0; c < value.cols(); ++c) {
                const double saved = value(r, c);
                value(r, c) = saved + h;
                double up = forward_ids(m, ids, sample.label).ce;
                value(r, c) = saved - h;
                double down = forward_ids(m, ids, sample.label).ce;
                value(r, c) = saved;

                double numeric = (up - down) / (2.0 * h);
                double analytic = grad(r, c);
                double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
                max_rel = std::max(max_rel, std::abs(analytic - numeric) / denom);
            }
        }
    }
    return max_rel;
}

// ---------------------------------------------------------------------------
// Checkpointing

namespace {

json matrix_to_json(const MatrixXd& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json data = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    }
    j["data"] = std::move(data);
    return j;
}

MatrixXd matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
        throw DataError(where + ": malformed tensor");
    }
    long rows = j["rows"].get<long>();
    long cols = j["cols"].get<long>();
    const json& data = j["data"];
    if (!data.is_array() || static_cast<long>(data.size()) != rows * cols) {
        throw DataError(where + ": tensor payload size mismatch");
    }
    MatrixXd m(rows, cols);
    std::size_t k = 0;
    for (long r = 0; r < rows; ++r) {
        for (long c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
    }
    return m;
}

constexpr const char* kCheckpointFormat = "dbac-attacker-v1";

}  // namespace

void save_model(const AttackerModel& m, const std::string& path) {
    json j;
    j["format"] = kCheckpointFormat;
    j["encoder"] = {
        {"kind", encoder_kind_name(m.cfg.kind)},
        {"embed_dim", m.cfg.embed_dim},
        {"hidden_dim", m.cfg.hidden_dim},
        {"mlp_hidden", m.cfg.mlp_hidden},
        {"freeze_embeddings", m.cfg.freeze_embeddings},
        {"seed", m.cfg.seed},
    };
    j["n_classes"] = m.n_classes;
    j["vocab"] = m.vocab.id_to_word;
    j["epoch_loss"] = m.epoch_loss;
    j["params"] = {
        {"embed", matrix_to_json(m.embed)}, {"w_xh", matrix_to_json(m.w_xh)},
        {"w_hh", matrix_to_json(m.w_hh)},   {"b_h", matrix_to_json(m.b_h)},
        {"w1", matrix_to_json(m.w1)},       {"b1", matrix_to_json(m.b1)},
        {"w2", matrix_to_json(m.w2)},       {"b2", matrix_to_json(m.b2)},
        {"w3", matrix_to_json(m.w3)},       {"b3", matrix_to_json(m.b3)},
    };

    std::ofstream out(path);
    if (!out) throw DataError("cannot write checkpoint " + path);
    out << j.dump(2) << "\n";
}

AttackerModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open checkpoint " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json j = json::parse(buf.str(), nullptr, false);
    if (j.is_discarded()) throw DataError(path + ": malformed checkpoint JSON");
    if (!j.contains("format") || j["format"] != kCheckpointFormat) {
        throw DataError(path + ": unsupported checkpoint format");
    }

    AttackerModel m;
    const json& e = j.at("encoder");
    m.cfg.kind = encoder_kind_from_name(e.at("kind").get<std::string>());
    m.cfg.embed_dim = e.at("embed_dim").get<int>();
    m.cfg.hidden_dim = e.at("hidden_dim").get<int>();
    m.cfg.mlp_hidden = e.at("mlp_hidden").get<int>();
    m.cfg.freeze_embeddings = e.at("freeze_embeddings").get<bool>();
    m.cfg.seed = e.at("seed").get<std::uint64_t>();
    m.n_classes = j.at("n_classes").get<int>();

    for (const auto& w : j.at("vocab")) {
        std::string word = w.get<std::string>();
        m.vocab.word_to_id.emplace(word, static_cast<int>(m.vocab.id_to_word.size()));
        m.vocab.id_to_word.push_back(std::move(word));
    }
    m.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();

    const json& p = j.at("params");
    m.embed = matrix_from_json(p.at("embed"), path);
    m.w_xh = matrix_from_json(p.at("w_xh"), path);
    m.w_hh = matrix_from_json(p.at("w_hh"), path);
    m.b_h = matrix_from_json(p.at("b_h"), path);
    m.w1 = matrix_from_json(p.at("w1"), path);
    m.b1 = matrix_from_json(p.at("b1"), path);
    m.w2 = matrix_from_json(p.at("w2"), path);
    m.b2 = matrix_from_json(p.at("b2"), path);
    m.w3 = matrix_from_json(p.at("w3"), path);
    m.b3 = matrix_from_json(p.at("b3"), path);
    return m;
}

}  // namespace dbac

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dbac/embedding.hpp"

namespace dbac {

// Token ids for attacker inputs. Index 0 is "<pad>", index 1 is "<unk>";
// mask tokens are registered as additional reserved entries, then the
// training-caption vocabulary follows in lexicographic order.
struct TokenVocab {
    std::vector<std::string> id_to_word;
    std::unordered_map<std::string, int> word_to_id;

    static constexpr int kPadId = 0;
    static constexpr int kUnkId = 1;

    static TokenVocab build(const std::vector<std::string>& captions,
                            const std::vector<std::string>& extra_specials = {});
    int id(const std::string& token) const;
    // Normalized token ids for a caption; an empty caption encodes as {<pad>}.
    std::vector<int> encode(const std::string& caption) const;
    std::size_t size() const { return id_to_word.size(); }
};

enum class EncoderKind { MeanEmbedding, Recurrent, BagOfWords };

std::string encoder_kind_name(EncoderKind kind);
EncoderKind encoder_kind_from_name(const std::string& name);

struct EncoderConfig {
    EncoderKind kind = EncoderKind::MeanEmbedding;
    int embed_dim = 32;       // token embedding size (mean_embedding, recurrent)
    int hidden_dim = 32;      // recurrent state size
    int mlp_hidden = 128;     // width of the two hidden MLP layers
    const EmbeddingTable* init_embeddings = nullptr;  // optional pretrained init
    bool freeze_embeddings = false;
    std::uint64_t seed = 0;   // parameter initialization stream
};

enum class Optimizer { Sgd, Adam };

struct TrainConfig {
    int epochs = 30;
    int batch_size = 32;
    double learning_rate = 0.05;
    double l2 = 0.0;            // weight decay on weight matrices (not biases)
    Optimizer optimizer = Optimizer::Sgd;
    std::uint64_t seed = 1;     // example-order shuffling stream
};

struct LabeledCaption {
    std::string text;
    int label = 0;
};

// Sentence encoder (by kind) feeding a 3-layer MLP:
//   z1 = relu(W1 enc + b1), z2 = relu(W2 z1 + b2), logits = W3 z2 + b3.
// The final layer starts at zero, so an untrained model predicts uniformly.
struct AttackerModel {
    EncoderConfig cfg;
    int n_classes = 0;
    TokenVocab vocab;

    Eigen::MatrixXd embed;        // |V| x embed_dim (unused for bag_of_words)
    Eigen::MatrixXd w_xh, w_hh, b_h;  // recurrent cell (b_h is hidden x 1)
    Eigen::MatrixXd w1, b1, w2, b2, w3, b3;

    std::vector<double> epoch_loss;  // mean training CE per epoch

    int encoder_output_dim() const;
};

// Mini-batch training that minimizes mean cross-entropy. Deterministic given
// the two config seeds. Throws DataError when fewer than two classes appear
// and NumericError (with epoch/batch diagnostics) if the loss leaves the
// finite range.
AttackerModel train_attacker(const std::vector<LabeledCaption>& train,
                             const EncoderConfig& enc_cfg, const TrainConfig& train_cfg,
                             int n_classes,
                             const std::vector<std::string>& extra_specials = {});

// Class-probability vector; components sum to 1.
Eigen::VectorXd predict(const AttackerModel& m, const std::string& caption);

// Mean cross-entropy of the model over a labeled set.
double mean_cross_entropy(const AttackerModel& m, const std::vector<LabeledCaption>& samples);

enum class QKind { Accuracy, InvCrossEntropy };

std::string q_kind_name(QKind kind);

struct QualityVector {
    QKind kind = QKind::Accuracy;
    std::vector<double> values;
};

// q_i = 1{argmax == label}; argmax ties resolve to the lowest class index.
QualityVector quality_accuracy(const std::vector<Eigen::VectorXd>& preds,
                               const std::vector<int>& labels);

// q_i = 1 / (CE_i + kappa), with the predicted label probability clamped to
// at least 1e-12 before the log. kappa must be > 0.
QualityVector quality_inv_ce(const std::vector<Eigen::VectorXd>& preds,
                             const std::vector<int>& labels, double kappa = 1e-2);

// Central-difference verification of the analytic CE gradient on one sample:
//   numeric = (CE(th + h) - CE(th - h)) / 2h
//   rel_err = |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)
// Returns the maximum relative error over every trainable parameter.
double gradient_check(AttackerModel& m, const LabeledCaption& sample, double h = 1e-5);

// Checkpointing: versioned JSON container with config echo, vocabulary, and
// parameter tensors. Parameters round-trip bit-exactly.
void save_model(const AttackerModel& m, const std::string& path);
AttackerModel load_model(const std::string& path);

}  // namespace dbac

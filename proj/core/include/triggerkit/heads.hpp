#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "triggerkit/encoder.hpp"
#include "triggerkit/labels.hpp"

namespace triggerkit {

struct head_config {
    std::size_t hidden_size = 100;
    std::size_t batch_size = 8;  // documents per SGD step
    double learning_rate = 0.01;
    std::size_t max_epochs = 10;
    std::optional<double> pos_weight;  // overrides the n_neg/n_pos formula
    double decision_threshold = 0.5;
    std::uint64_t seed = 0;

    bool valid() const {
        return hidden_size >= 1 && batch_size >= 1 && max_epochs >= 1 &&
               decision_threshold > 0.0 && decision_threshold < 1.0 &&
               (!pos_weight || *pos_weight > 0.0);
    }
};

// Which classes get a positive-class weight in the loss. The default set
// {15..32} covers the rare half of the vocabulary; the weight itself is
// n_negative / n_positive counted on the training split.
struct weight_policy {
    std::set<std::size_t> weighted_class_indices;

    static weight_policy default_policy();
    bool applies_to(std::size_t class_index) const {
        return weighted_class_indices.contains(class_index);
    }
};

// n_neg / n_pos as an exact ratio; throws data_error when n_pos is 0.
double positive_class_weight(std::size_t n_pos, std::size_t n_neg);

// -[w * t * log(p) + (1 - t) * log(1 - p)] with p clamped to
// [1e-7, 1 - 1e-7] before the logs. w multiplies only the positive term.
double weighted_bce(double prob, double target, double pos_weight);

// Single-layer LSTM over the embedding sequence followed by a two-layer
// classifier (hidden -> hidden, ReLU, hidden -> 1). Weight layout follows
// the fused-gate convention: rows of w_ih/w_hh hold the [i, f, g, o] gate
// blocks.
struct lstm_head_params {
    Eigen::MatrixXf w_ih;  // 4H x D
    Eigen::MatrixXf w_hh;  // 4H x H
    Eigen::MatrixXf b_ih;  // 1 x 4H
    Eigen::MatrixXf b_hh;  // 1 x 4H
    Eigen::MatrixXf fc1_w;  // H x H
    Eigen::MatrixXf fc1_b;  // 1 x H
    Eigen::MatrixXf fc2_w;  // 1 x H
    Eigen::MatrixXf fc2_b;  // 1 x 1

    std::size_t input_dim() const { return static_cast<std::size_t>(w_ih.cols()); }
    std::size_t hidden_size() const { return static_cast<std::size_t>(w_hh.cols()); }

    // Seeded uniform fan-in initialization: U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
    static lstm_head_params init(std::size_t input_dim, std::size_t hidden, std::uint64_t seed);
};

struct trained_head {
    std::size_t class_index = 0;  // 1..32
    lstm_head_params params;
    bool degenerate = false;  // constant-negative head (no training positives)
    std::size_t selected_epoch = 0;  // 1-based
    double validation_f1_at_selection = 0.0;
    double pos_weight_used = 1.0;
    std::vector<double> train_loss_curve;  // per epoch, mean per-document loss
    std::vector<double> valid_f1_curve;    // per epoch, positive-class F1
};

// Probability that the sequence belongs to the head's class. The recurrent
// unit consumes embeddings in segment order; the final hidden state feeds
// the classifier. Degenerate heads always return 0.
double forward(const trained_head& head, const embedding_sequence& seq);

// One-vs-all training of a single class. Sequences must carry labels.
// Epochs run to cfg.max_epochs; after each epoch the positive-class F1 on
// the validation sequences is logged and the best epoch's snapshot is kept
// (ties resolve to the earlier epoch).
trained_head train_head(std::size_t class_index,
                        const std::vector<embedding_sequence>& train,
                        const std::vector<embedding_sequence>& valid,
                        const head_config& cfg, const weight_policy& policy);

struct ensemble {
    std::vector<trained_head> heads;  // exactly 32, index-aligned to the vocabulary

    const trained_head& head_for(std::size_t class_index) const {
        return heads.at(class_index - 1);
    }
};

// Trains all 32 heads independently (in parallel across threads; each head
// derives its own RNG stream from cfg.seed and the class index, so results
// do not depend on scheduling). A class without training positives fails
// the run unless allow_degenerate downgrades it to a constant-negative
// head.
ensemble train_ensemble(const std::vector<embedding_sequence>& train,
                        const std::vector<embedding_sequence>& valid,
                        const head_config& cfg, const weight_policy& policy,
                        bool allow_degenerate);

// Thresholded multi-label prediction: bit k set iff forward(head_k, seq)
// >= threshold.
label_vector predict(const ensemble& ens, const embedding_sequence& seq,
                     double threshold = 0.5);

// Joins store sequences with corpus labels by doc_id; order follows the
// sequences. Throws when a labeled document is missing.
std::vector<embedding_sequence> attach_labels(std::vector<embedding_sequence> sequences,
                                              const corpus& docs);

// Ensemble directory: one checkpoint per class named by label, plus
// manifest.json with configs, per-class selected epoch / validation F1 /
// pos_weight and the embedding-store fingerprint it was trained against.
void save_ensemble(const ensemble& ens, const std::filesystem::path& dir,
                   const std::string& store_fingerprint, const head_config& cfg);
ensemble load_ensemble(const std::filesystem::path& dir);
std::string ensemble_store_fingerprint(const std::filesystem::path& dir);

}  // namespace triggerkit

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "triggerkit/labels.hpp"
#include "triggerkit/segmenter.hpp"

namespace triggerkit {

struct encoder_config {
    std::string model_name = "roberta-base";  // checkpoint name or path
    std::size_t max_tokens = 256;
    double learning_rate = 1e-5;
    std::size_t epochs = 3;
    std::size_t batch_size = 8;
    std::uint64_t seed = 0;

    bool valid() const { return max_tokens >= 2 && epochs >= 1 && batch_size >= 1; }
};

struct segment_embedding {
    std::string doc_id;
    std::size_t segment_index = 0;
    std::vector<float> vector;
};

// Ordered per-document sequence of segment embeddings; the interface
// between the encoder stage and the heads stage.
struct embedding_sequence {
    std::string doc_id;
    std::vector<std::vector<float>> embeddings;  // indexed by segment_index
    std::optional<label_vector> labels;
};

// A fitted segment-to-vector function. Implementations must be
// deterministic in inference mode; the fingerprint identifies the exact
// weights + tokenizer so downstream caches can detect staleness.
class encoder {
public:
    virtual ~encoder() = default;
    virtual std::size_t dim() const = 0;
    virtual std::string fingerprint() const = 0;
    virtual std::vector<float> embed(const segment& seg) const = 0;
};

// Deterministic dependency-free encoder: seeded feature hashing of segment
// words into `dim` buckets, L2-normalized. Order-insensitive by
// construction (bag of words), which makes planted-token corpora linearly
// separable downstream without any training.
class reference_encoder final : public encoder {
public:
    reference_encoder(std::size_t dim, std::uint64_t seed);

    std::size_t dim() const override { return dim_; }
    std::string fingerprint() const override;
    std::vector<float> embed(const segment& seg) const override;

    std::uint64_t seed() const { return seed_; }

private:
    std::size_t dim_;
    std::uint64_t seed_;
};

}  // namespace triggerkit

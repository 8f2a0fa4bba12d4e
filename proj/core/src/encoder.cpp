#include "triggerkit/encoder.hpp"

#include <cmath>

#include "triggerkit/errors.hpp"
#include "triggerkit/hashing.hpp"

namespace triggerkit {

reference_encoder::reference_encoder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
    if (dim_ < 8) throw data_error("reference_encoder: dim must be >= 8");
}

std::string reference_encoder::fingerprint() const {
    return fingerprint_builder{}
        .add("reference-encoder")
        .add(static_cast<std::uint64_t>(dim_))
        .add(seed_)
        .hex();
}

std::vector<float> reference_encoder::embed(const segment& seg) const {
    if (seg.words.empty()) throw data_error("reference_encoder: empty segment");
    std::vector<float> vec(dim_, 0.0f);
    for (const auto& word : seg.words) {
        const auto bucket = mix64(fnv1a64(word) ^ seed_) % dim_;
        vec[bucket] += 1.0f;
    }
    double norm_sq = 0.0;
    for (float v : vec) norm_sq += static_cast<double>(v) * v;
    const auto inv_norm = static_cast<float>(1.0 / std::sqrt(norm_sq));
    for (float& v : vec) v *= inv_norm;
    return vec;
}

}  // namespace triggerkit

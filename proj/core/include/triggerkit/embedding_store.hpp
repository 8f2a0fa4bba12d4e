#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "triggerkit/encoder.hpp"
#include "triggerkit/segmenter.hpp"

namespace triggerkit {

// On-disk layout of the embedding cache. One binary file plus a sidecar
// index (`<store>.idx`) mapping doc_id to byte offset.
//
//   header: magic "TKES", u32 version, u32 dim, u64 doc count,
//           u16 fingerprint length + fingerprint bytes
//   record: u16 doc_id length + doc_id bytes, u32 n_segments,
//           n_segments * dim little-endian f32
//
// The fingerprint digests the encoder identity plus the segmentation and
// cleaning configs; any component change invalidates the cache.
struct store_entry {
    std::string doc_id;
    std::uint64_t offset = 0;  // byte offset of the record
    std::uint32_t n_segments = 0;
};

class embedding_store_writer {
public:
    embedding_store_writer(const std::filesystem::path& path, std::size_t dim,
                           std::string fingerprint);
    ~embedding_store_writer();

    embedding_store_writer(const embedding_store_writer&) = delete;
    embedding_store_writer& operator=(const embedding_store_writer&) = delete;

    // Appends one document record; embeddings must all have the store dim.
    void append(const std::string& doc_id, const std::vector<std::vector<float>>& embeddings);

    // Patches the document count into the header and writes the sidecar
    // index. Must be called exactly once; no appends afterwards.
    void finalize();

private:
    struct impl;
    std::unique_ptr<impl> impl_;
};

class embedding_store {
public:
    static embedding_store open(const std::filesystem::path& path);

    std::size_t dim() const { return dim_; }
    const std::string& fingerprint() const { return fingerprint_; }
    std::size_t n_documents() const { return entries_.size(); }
    const std::vector<store_entry>& entries() const { return entries_; }

    bool contains(const std::string& doc_id) const;

    // Random access by doc_id; opens its own stream, safe to call from any
    // number of threads once the store is finalized.
    embedding_sequence load(const std::string& doc_id) const;

    // All sequences in store order.
    std::vector<embedding_sequence> load_all() const;

private:
    std::filesystem::path path_;
    std::size_t dim_ = 0;
    std::string fingerprint_;
    std::vector<store_entry> entries_;
    std::size_t id_of(const std::string& doc_id) const;
};

// Digest identifying an (encoder, segmentation, cleaning) combination.
std::string cache_fingerprint(const encoder& enc, const segmentation_config& seg,
                              const cleaning_config& clean);

struct embed_corpus_result {
    std::size_t documents_embedded = 0;  // 0 when the cache was already complete
    std::size_t documents_total = 0;
};

// Embeds every document with at least one segment and persists the store.
// Re-running against a complete cache with a matching fingerprint computes
// nothing; a fingerprint mismatch is refused with a stale_pipeline_error.
embed_corpus_result embed_corpus(const encoder& enc, const segmented_corpus& segments,
                                 const std::filesystem::path& cache_path);

}  // namespace triggerkit

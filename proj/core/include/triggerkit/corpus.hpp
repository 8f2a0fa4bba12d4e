#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "triggerkit/labels.hpp"

namespace triggerkit {

// One fanfiction work as ingested: opaque id, raw UTF-8 text, labels when
// the corpus is a labeled (train/validation style) split.
struct document {
    std::string id;
    std::string text;
    std::optional<label_vector> labels;
};

using corpus = std::vector<document>;

struct corpus_stats_report {
    std::size_t n_documents = 0;
    double avg_words = 0.0;                      // whitespace word count of raw text
    std::array<double, kNumClasses> pos_ratio{}; // fraction of documents per class
};

// Reads a line-delimited record file (one JSON object per line with keys
// `work_id`, `text`, optional `labels`). Documents come back in file order.
// When `expect_labels` is set, a record without labels is an error.
// Throws data_error with the offending line number for malformed records,
// duplicate ids, unknown label names and missing labels.
corpus load_corpus(const std::filesystem::path& path, bool expect_labels);

// Writes the same record format; load_corpus(save_corpus(c)) round-trips
// documents bit-exactly.
void save_corpus(const corpus& docs, const std::filesystem::path& path);

// Word counts use whitespace splitting of the raw text (pre-cleaning).
corpus_stats_report corpus_stats(const corpus& docs);

// Deterministic seeded partition into (rest, holdout). `fraction` is the
// holdout share and must leave at least one document on each side.
std::pair<corpus, corpus> split_holdout(const corpus& docs, double fraction,
                                        std::uint64_t seed);

// Number of whitespace-delimited words in raw text.
std::size_t raw_word_count(const std::string& text);

}  // namespace triggerkit

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "triggerkit/corpus.hpp"
#include "triggerkit/labels.hpp"

namespace triggerkit {

struct cleaning_config {
    bool lowercase = true;
    bool strip_html = true;
    bool strip_urls = true;
    bool remove_stopwords = true;
};

struct segmentation_config {
    std::size_t segment_length = 200;
    std::size_t overlap = 50;

    std::size_t stride() const { return segment_length - overlap; }
    bool valid() const { return segment_length > 0 && overlap < segment_length; }
};

// One fixed-length word window of a cleaned document. `start` is the word
// offset into the cleaned word list and always equals index * stride.
struct segment {
    std::string doc_id;
    std::size_t index = 0;
    std::size_t start = 0;
    std::vector<std::string> words;
    std::optional<label_vector> labels;
};

struct segmented_corpus {
    std::vector<segment> segments;          // ordered by (document order, index)
    std::vector<std::string> skipped_docs;  // empty after cleaning
    cleaning_config cleaning;
    segmentation_config segmentation;
};

// Cleaning pipeline, applied in fixed order: strip HTML tags, strip URL
// tokens, lowercase, whitespace-tokenize, drop stopwords. Tags match
// `<[^>]*>` and are treated as word separators; URL tokens are those with
// an http://, https:// or www. prefix (case-insensitive).
std::vector<std::string> clean_text(const std::string& text, const cleaning_config& cfg);

// Overlapping windows at offsets 0, stride, 2*stride, ...; every window has
// segment_length words except a possibly shorter final one, emitted only
// when words past the last full window would otherwise be dropped.
std::vector<std::vector<std::string>> chunk_words(const std::vector<std::string>& words,
                                                  const segmentation_config& cfg);

// Closed form for the number of windows chunk_words yields on n_words >= 1.
std::size_t window_count(std::size_t n_words, const segmentation_config& cfg);

// Cleans and chunks every document; each segment inherits the parent's
// label vector verbatim. Documents that clean to nothing yield no segments
// and land in the skip report.
segmented_corpus segment_corpus(const corpus& docs, const cleaning_config& clean,
                                const segmentation_config& seg);

// Line-delimited persistence (`doc_id`, `segment_index`, `start`, `words`,
// optional `labels`) plus a plain-text skip report of one doc_id per line.
void save_segments(const segmented_corpus& segs, const std::filesystem::path& path,
                   const std::filesystem::path& skip_report_path);
segmented_corpus load_segments(const std::filesystem::path& path);

}  // namespace triggerkit

#include "triggerkit/segmenter.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "triggerkit/errors.hpp"
#include "triggerkit/stopwords.hpp"

namespace triggerkit {

using nlohmann::json;

namespace {

// Removes every run matching `<[^>]*>`, writing a space in its place so a
// tag never glues its neighbours into one word. An unclosed '<' is literal.
std::string strip_html_tags(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '<') {
            std::size_t close = text.find('>', i + 1);
            if (close != std::string::npos) {
                out.push_back(' ');
                i = close + 1;
                continue;
            }
        }
        out.push_back(text[i]);
        ++i;
    }
    return out;
}

bool has_prefix_icase(std::string_view token, std::string_view prefix) {
    if (token.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(token[i])) != prefix[i]) return false;
    }
    return true;
}

bool is_url_token(std::string_view token) {
    return has_prefix_icase(token, "http://") || has_prefix_icase(token, "https://") ||
           has_prefix_icase(token, "www.");
}

std::string ascii_lower(std::string word) {
    for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return word;
}

}  // namespace

std::vector<std::string> clean_text(const std::string& text, const cleaning_config& cfg) {
    std::string stripped = cfg.strip_html ? strip_html_tags(text) : text;

    // Whitespace tokenization; a word is a maximal run of non-whitespace.
    std::vector<std::string> words;
    std::size_t i = 0;
    const auto& stop = english_stopwords();
    while (i < stripped.size()) {
        while (i < stripped.size() && std::isspace(static_cast<unsigned char>(stripped[i]))) ++i;
        std::size_t begin = i;
        while (i < stripped.size() && !std::isspace(static_cast<unsigned char>(stripped[i]))) ++i;
        if (i == begin) break;
        std::string_view token(stripped.data() + begin, i - begin);
        if (cfg.strip_urls && is_url_token(token)) continue;
        std::string word(token);
        if (cfg.lowercase) word = ascii_lower(std::move(word));
        if (cfg.remove_stopwords && stop.contains(word)) continue;
        words.push_back(std::move(word));
    }
    return words;
}

std::size_t window_count(std::size_t n_words, const segmentation_config& cfg) {
    if (n_words == 0) return 0;
    if (n_words <= cfg.segment_length) return 1;
    const std::size_t stride = cfg.stride();
    // ceil((n_words - segment_length) / stride) + 1
    return (n_words - cfg.segment_length + stride - 1) / stride + 1;
}

std::vector<std::vector<std::string>> chunk_words(const std::vector<std::string>& words,
                                                  const segmentation_config& cfg) {
    if (!cfg.valid()) throw data_error("chunk_words: invalid segmentation config");
    std::vector<std::vector<std::string>> windows;
    if (words.empty()) return windows;

    const std::size_t stride = cfg.stride();
    // Emit windows at k*stride until every word is covered; the final window
    // may be shorter than segment_length but is never dropped.
    std::size_t covered = 0;
    for (std::size_t k = 0; k * stride < words.size() && covered < words.size(); ++k) {
        const std::size_t offset = k * stride;
        const std::size_t len = std::min(cfg.segment_length, words.size() - offset);
        windows.emplace_back(words.begin() + static_cast<std::ptrdiff_t>(offset),
                             words.begin() + static_cast<std::ptrdiff_t>(offset + len));
        covered = offset + len;
    }
    return windows;
}

segmented_corpus segment_corpus(const corpus& docs, const cleaning_config& clean,
                                const segmentation_config& seg) {
    if (!seg.valid()) throw data_error("segment_corpus: invalid segmentation config");
    segmented_corpus out;
    out.cleaning = clean;
    out.segmentation = seg;
    for (const auto& doc : docs) {
        auto words = clean_text(doc.text, clean);
        if (words.empty()) {
            out.skipped_docs.push_back(doc.id);
            continue;
        }
        auto windows = chunk_words(words, seg);
        for (std::size_t i = 0; i < windows.size(); ++i) {
            segment s;
            s.doc_id = doc.id;
            s.index = i;
            s.start = i * seg.stride();
            s.words = std::move(windows[i]);
            s.labels = doc.labels;
            out.segments.push_back(std::move(s));
        }
    }
    return out;
}

void save_segments(const segmented_corpus& segs, const std::filesystem::path& path,
                   const std::filesystem::path& skip_report_path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot write segments file: " + path.string());
    for (const auto& s : segs.segments) {
        json rec;
        rec["doc_id"] = s.doc_id;
        rec["segment_index"] = s.index;
        rec["start"] = s.start;
        rec["words"] = s.words;
        if (s.labels) rec["labels"] = s.labels->to_names();
        out << rec.dump() << '\n';
    }
    if (!out) throw data_error("failed writing segments file: " + path.string());

    std::ofstream skip(skip_report_path, std::ios::binary | std::ios::trunc);
    if (!skip) throw data_error("cannot write skip report: " + skip_report_path.string());
    for (const auto& id : segs.skipped_docs) skip << id << '\n';
}

segmented_corpus load_segments(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open segments file: " + path.string());
    segmented_corpus out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object())
            throw data_error(path.string() + ":" + std::to_string(line_no) +
                             ": malformed segment record");
        segment s;
        s.doc_id = rec.at("doc_id").get<std::string>();
        s.index = rec.at("segment_index").get<std::size_t>();
        s.start = rec.at("start").get<std::size_t>();
        s.words = rec.at("words").get<std::vector<std::string>>();
        if (rec.contains("labels"))
            s.labels = label_vector::from_names(rec["labels"].get<std::vector<std::string>>());
        out.segments.push_back(std::move(s));
    }
    return out;
}

}  // namespace triggerkit

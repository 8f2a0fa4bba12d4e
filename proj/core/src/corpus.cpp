#include "triggerkit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_set>

#include <json.hpp>

#include "triggerkit/errors.hpp"

namespace triggerkit {

using nlohmann::json;

namespace {

[[noreturn]] void record_error(const std::filesystem::path& path, std::size_t line_no,
                               const std::string& what) {
    throw data_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

corpus load_corpus(const std::filesystem::path& path, bool expect_labels) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open corpus file: " + path.string());

    corpus docs;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object())
            record_error(path, line_no, "malformed record (not a JSON object)");
        if (!rec.contains("work_id") || !rec["work_id"].is_string())
            record_error(path, line_no, "missing or non-string 'work_id'");
        if (!rec.contains("text") || !rec["text"].is_string())
            record_error(path, line_no, "missing or non-string 'text'");

        document doc;
        doc.id = rec["work_id"].get<std::string>();
        doc.text = rec["text"].get<std::string>();
        if (doc.text.empty()) record_error(path, line_no, "empty 'text'");
        if (!seen_ids.insert(doc.id).second)
            record_error(path, line_no, "duplicate work_id '" + doc.id + "'");

        if (rec.contains("labels")) {
            if (!rec["labels"].is_array())
                record_error(path, line_no, "'labels' must be an array of label names");
            std::vector<std::string> names;
            for (const auto& item : rec["labels"]) {
                if (!item.is_string())
                    record_error(path, line_no, "'labels' entries must be strings");
                names.push_back(item.get<std::string>());
            }
            try {
                doc.labels = label_vector::from_names(names);
            } catch (const data_error& e) {
                record_error(path, line_no, e.what());
            }
        } else if (expect_labels) {
            record_error(path, line_no, "record has no 'labels' but labels were expected");
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

void save_corpus(const corpus& docs, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot write corpus file: " + path.string());
    for (const auto& doc : docs) {
        json rec;
        rec["work_id"] = doc.id;
        rec["text"] = doc.text;
        if (doc.labels) rec["labels"] = doc.labels->to_names();
        out << rec.dump() << '\n';
    }
    if (!out) throw data_error("failed writing corpus file: " + path.string());
}

std::size_t raw_word_count(const std::string& text) {
    std::size_t count = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        bool ws = std::isspace(c) != 0;
        if (!ws && !in_word) ++count;
        in_word = !ws;
    }
    return count;
}

corpus_stats_report corpus_stats(const corpus& docs) {
    if (docs.empty()) throw data_error("corpus_stats: empty corpus");
    corpus_stats_report report;
    report.n_documents = docs.size();
    std::array<std::size_t, kNumClasses> pos_counts{};
    std::size_t total_words = 0;
    for (const auto& doc : docs) {
        if (!doc.labels) throw data_error("corpus_stats: document '" + doc.id + "' has no labels");
        total_words += raw_word_count(doc.text);
        for (std::size_t k = 1; k <= kNumClasses; ++k)
            if (doc.labels->get(k)) ++pos_counts[k - 1];
    }
    report.avg_words = static_cast<double>(total_words) / static_cast<double>(docs.size());
    for (std::size_t k = 0; k < kNumClasses; ++k)
        report.pos_ratio[k] =
            static_cast<double>(pos_counts[k]) / static_cast<double>(docs.size());
    return report;
}

std::pair<corpus, corpus> split_holdout(const corpus& docs, double fraction,
                                        std::uint64_t seed) {
    const auto n = docs.size();
    const auto n_holdout = static_cast<std::size_t>(fraction * static_cast<double>(n));
    if (fraction <= 0.0 || fraction >= 1.0 || n_holdout < 1 || n - n_holdout < 1)
        throw data_error("split_holdout: fraction " + std::to_string(fraction) +
                         " leaves an empty side for " + std::to_string(n) + " documents");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<bool> held(n, false);
    for (std::size_t i = 0; i < n_holdout; ++i) held[order[i]] = true;

    corpus rest, holdout;
    rest.reserve(n - n_holdout);
    holdout.reserve(n_holdout);
    for (std::size_t i = 0; i < n; ++i) (held[i] ? holdout : rest).push_back(docs[i]);
    return {std::move(rest), std::move(holdout)};
}

}  // namespace triggerkit

#include "triggerkit/embedding_store.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "triggerkit/errors.hpp"
#include "triggerkit/hashing.hpp"

static_assert(std::endian::native == std::endian::little,
              "embedding store assumes a little-endian host");

namespace triggerkit {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'T', 'K', 'E', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

std::filesystem::path index_path(const std::filesystem::path& store_path) {
    auto p = store_path;
    p += ".idx";
    return p;
}

}  // namespace

struct embedding_store_writer::impl {
    std::ofstream out;
    std::filesystem::path path;
    std::size_t dim;
    std::string fingerprint;
    std::vector<store_entry> entries;
    std::uint64_t count_offset = 0;
    bool finalized = false;
};

embedding_store_writer::embedding_store_writer(const std::filesystem::path& path,
                                               std::size_t dim, std::string fingerprint)
    : impl_(std::make_unique<impl>()) {
    impl_->path = path;
    impl_->dim = dim;
    impl_->fingerprint = std::move(fingerprint);
    impl_->out.open(path, std::ios::binary | std::ios::trunc);
    if (!impl_->out) throw data_error("cannot create embedding store: " + path.string());

    impl_->out.write(kMagic, sizeof(kMagic));
    write_pod<std::uint32_t>(impl_->out, kVersion);
    write_pod<std::uint32_t>(impl_->out, static_cast<std::uint32_t>(dim));
    impl_->count_offset = static_cast<std::uint64_t>(impl_->out.tellp());
    write_pod<std::uint64_t>(impl_->out, 0);  // patched in finalize()
    write_pod<std::uint16_t>(impl_->out, static_cast<std::uint16_t>(impl_->fingerprint.size()));
    impl_->out.write(impl_->fingerprint.data(),
                     static_cast<std::streamsize>(impl_->fingerprint.size()));
}

embedding_store_writer::~embedding_store_writer() = default;

void embedding_store_writer::append(const std::string& doc_id,
                                    const std::vector<std::vector<float>>& embeddings) {
    if (impl_->finalized) throw data_error("embedding store writer already finalized");
    if (embeddings.empty())
        throw data_error("embedding store: document '" + doc_id + "' has no segments");
    store_entry entry;
    entry.doc_id = doc_id;
    entry.offset = static_cast<std::uint64_t>(impl_->out.tellp());
    entry.n_segments = static_cast<std::uint32_t>(embeddings.size());

    write_pod<std::uint16_t>(impl_->out, static_cast<std::uint16_t>(doc_id.size()));
    impl_->out.write(doc_id.data(), static_cast<std::streamsize>(doc_id.size()));
    write_pod<std::uint32_t>(impl_->out, entry.n_segments);
    for (const auto& vec : embeddings) {
        if (vec.size() != impl_->dim)
            throw data_error("embedding store: dimension mismatch for '" + doc_id + "'");
        impl_->out.write(reinterpret_cast<const char*>(vec.data()),
                         static_cast<std::streamsize>(vec.size() * sizeof(float)));
    }
    impl_->entries.push_back(std::move(entry));
}

void embedding_store_writer::finalize() {
    if (impl_->finalized) throw data_error("embedding store writer already finalized");
    impl_->finalized = true;
    impl_->out.seekp(static_cast<std::streamoff>(impl_->count_offset));
    write_pod<std::uint64_t>(impl_->out, static_cast<std::uint64_t>(impl_->entries.size()));
    impl_->out.flush();
    if (!impl_->out) throw data_error("failed writing embedding store: " + impl_->path.string());
    impl_->out.close();

    json offsets = json::array();
    for (const auto& e : impl_->entries)
        offsets.push_back(
            {{"doc_id", e.doc_id}, {"offset", e.offset}, {"n_segments", e.n_segments}});
    json idx{{"fingerprint", impl_->fingerprint}, {"dim", impl_->dim}, {"entries", offsets}};
    std::ofstream idx_out(index_path(impl_->path), std::ios::binary | std::ios::trunc);
    if (!idx_out) throw data_error("cannot write store index sidecar");
    idx_out << idx.dump() << '\n';
}

embedding_store embedding_store::open(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open embedding store: " + path.string());
    char magic[4];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw data_error("not an embedding store: " + path.string());
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kVersion)
        throw data_error("unsupported embedding store version " + std::to_string(version));

    embedding_store store;
    store.path_ = path;
    store.dim_ = read_pod<std::uint32_t>(in);
    const auto count = read_pod<std::uint64_t>(in);
    const auto fp_len = read_pod<std::uint16_t>(in);
    store.fingerprint_.resize(fp_len);
    in.read(store.fingerprint_.data(), fp_len);
    if (!in) throw data_error("truncated embedding store header: " + path.string());

    // The sidecar carries the record offsets; fall back to a sequential scan
    // when it is missing.
    const auto idx_file = index_path(path);
    if (std::filesystem::exists(idx_file)) {
        std::ifstream idx_in(idx_file, std::ios::binary);
        json idx = json::parse(idx_in, nullptr, false);
        if (idx.is_discarded() || idx["fingerprint"] != store.fingerprint_)
            throw data_error("embedding store index sidecar does not match store");
        for (const auto& e : idx["entries"]) {
            store_entry entry;
            entry.doc_id = e.at("doc_id").get<std::string>();
            entry.offset = e.at("offset").get<std::uint64_t>();
            entry.n_segments = e.at("n_segments").get<std::uint32_t>();
            store.entries_.push_back(std::move(entry));
        }
    } else {
        for (std::uint64_t i = 0; i < count; ++i) {
            store_entry entry;
            entry.offset = static_cast<std::uint64_t>(in.tellg());
            const auto id_len = read_pod<std::uint16_t>(in);
            entry.doc_id.resize(id_len);
            in.read(entry.doc_id.data(), id_len);
            entry.n_segments = read_pod<std::uint32_t>(in);
            in.seekg(static_cast<std::streamoff>(entry.n_segments * store.dim_ * sizeof(float)),
                     std::ios::cur);
            if (!in) throw data_error("truncated embedding store: " + path.string());
            store.entries_.push_back(std::move(entry));
        }
    }
    if (store.entries_.size() != count)
        throw data_error("embedding store count mismatch: " + path.string());
    return store;
}

bool embedding_store::contains(const std::string& doc_id) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const store_entry& e) { return e.doc_id == doc_id; });
}

std::size_t embedding_store::id_of(const std::string& doc_id) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].doc_id == doc_id) return i;
    throw data_error("embedding store has no document '" + doc_id + "'");
}

embedding_sequence embedding_store::load(const std::string& doc_id) const {
    const auto& entry = entries_[id_of(doc_id)];
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw data_error("cannot open embedding store: " + path_.string());
    in.seekg(static_cast<std::streamoff>(entry.offset));
    const auto id_len = read_pod<std::uint16_t>(in);
    std::string stored_id(id_len, '\0');
    in.read(stored_id.data(), id_len);
    const auto n_segments = read_pod<std::uint32_t>(in);
    if (!in || stored_id != doc_id || n_segments != entry.n_segments)
        throw data_error("embedding store record corrupt for '" + doc_id + "'");

    embedding_sequence seq;
    seq.doc_id = doc_id;
    seq.embeddings.resize(n_segments, std::vector<float>(dim_));
    for (auto& vec : seq.embeddings)
        in.read(reinterpret_cast<char*>(vec.data()),
                static_cast<std::streamsize>(dim_ * sizeof(float)));
    if (!in) throw data_error("truncated embedding record for '" + doc_id + "'");
    return seq;
}

std::vector<embedding_sequence> embedding_store::load_all() const {
    std::vector<embedding_sequence> out;
    out.reserve(entries_.size());
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw data_error("cannot open embedding store: " + path_.string());
    for (const auto& entry : entries_) {
        in.seekg(static_cast<std::streamoff>(entry.offset));
        const auto id_len = read_pod<std::uint16_t>(in);
        embedding_sequence seq;
        seq.doc_id.resize(id_len);
        in.read(seq.doc_id.data(), id_len);
        const auto n_segments = read_pod<std::uint32_t>(in);
        seq.embeddings.resize(n_segments, std::vector<float>(dim_));
        for (auto& vec : seq.embeddings)
            in.read(reinterpret_cast<char*>(vec.data()),
                    static_cast<std::streamsize>(dim_ * sizeof(float)));
        if (!in) throw data_error("truncated embedding store: " + path_.string());
        out.push_back(std::move(seq));
    }
    return out;
}

std::string cache_fingerprint(const encoder& enc, const segmentation_config& seg,
                              const cleaning_config& clean) {
    return fingerprint_builder{}
        .add(enc.fingerprint())
        .add(static_cast<std::uint64_t>(seg.segment_length))
        .add(static_cast<std::uint64_t>(seg.overlap))
        .add(static_cast<std::uint64_t>(clean.lowercase))
        .add(static_cast<std::uint64_t>(clean.strip_html))
        .add(static_cast<std::uint64_t>(clean.strip_urls))
        .add(static_cast<std::uint64_t>(clean.remove_stopwords))
        .hex();
}

embed_corpus_result embed_corpus(const encoder& enc, const segmented_corpus& segments,
                                 const std::filesystem::path& cache_path) {
    const auto fingerprint = cache_fingerprint(enc, segments.segmentation, segments.cleaning);

    // Group segments by document, preserving document order.
    std::vector<std::pair<std::string, std::vector<const segment*>>> docs;
    std::unordered_map<std::string, std::size_t> doc_pos;
    for (const auto& s : segments.segments) {
        auto [it, inserted] = doc_pos.try_emplace(s.doc_id, docs.size());
        if (inserted) docs.emplace_back(s.doc_id, std::vector<const segment*>{});
        docs[it->second].second.push_back(&s);
    }

    embed_corpus_result result;
    result.documents_total = docs.size();

    if (std::filesystem::exists(cache_path)) {
        auto existing = embedding_store::open(cache_path);
        if (existing.fingerprint() != fingerprint)
            throw stale_pipeline_error(
                "embed", "embedding cache at " + cache_path.string() +
                             " was built with a different encoder or segmentation config "
                             "(fingerprint " +
                             existing.fingerprint() + ", expected " + fingerprint +
                             "); rerun the embed stage with a fresh cache path");
        const bool complete =
            existing.n_documents() == docs.size() &&
            std::all_of(docs.begin(), docs.end(), [&](const auto& d) {
                return existing.contains(d.first);
            });
        if (complete) return result;  // cache hit, nothing to compute
        // Matching fingerprint but different document set: rebuild below.
    }

    embedding_store_writer writer(cache_path, enc.dim(), fingerprint);
    for (const auto& [doc_id, segs] : docs) {
        std::vector<std::vector<float>> vectors;
        vectors.reserve(segs.size());
        for (const segment* s : segs) vectors.push_back(enc.embed(*s));
        writer.append(doc_id, vectors);
        ++result.documents_embedded;
    }
    writer.finalize();
    return result;
}

}  // namespace triggerkit

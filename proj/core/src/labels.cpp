#include "triggerkit/labels.hpp"

#include <stdexcept>
#include <unordered_map>

#include "triggerkit/errors.hpp"

namespace triggerkit {

label_vocabulary::label_vocabulary()
    : names_{
          "pornographic",    // 1
          "violence",        // 2
          "death",           // 3
          "sexual-assault",  // 4
          "abuse",           // 5
          "blood",           // 6
          "suicide",         // 7
          "pregnancy",       // 8
          "child-abuse",     // 9
          "incest",          // 10
          "underage",        // 11
          "homophobia",      // 12
          "self-harm",       // 13
          "dying",           // 14
          "kidnapping",      // 15
          "mental-illness",  // 16
          "dissection",      // 17
          "eating-disorder", // 18
          "abduction",       // 19
          "body-hatred",     // 20
          "childbirth",      // 21
          "racism",          // 22
          "sexism",          // 23
          "miscarriage",     // 24
          "transphobia",     // 25
          "abortion",        // 26
          "fat-phobia",      // 27
          "animal-death",    // 28
          "ableism",         // 29
          "classism",        // 30
          "misogyny",        // 31
          "animal-cruelty",  // 32
      } {}

const label_vocabulary& label_vocabulary::instance() {
    static const label_vocabulary vocab;
    return vocab;
}

std::optional<std::size_t> label_vocabulary::index_of(std::string_view name) const {
    static const std::unordered_map<std::string_view, std::size_t> lookup = [] {
        std::unordered_map<std::string_view, std::size_t> m;
        const auto& names = instance().names_;
        for (std::size_t i = 0; i < names.size(); ++i) m.emplace(names[i], i + 1);
        return m;
    }();
    auto it = lookup.find(name);
    if (it == lookup.end()) return std::nullopt;
    return it->second;
}

const std::string& label_vocabulary::name_of(std::size_t class_index) const {
    if (class_index < 1 || class_index > kNumClasses)
        throw std::out_of_range("class index must be in 1..32");
    return names_[class_index - 1];
}

std::vector<std::string> label_vector::to_names() const {
    std::vector<std::string> out;
    const auto& vocab = label_vocabulary::instance();
    for (std::size_t k = 1; k <= kNumClasses; ++k)
        if (get(k)) out.push_back(vocab.name_of(k));
    return out;
}

label_vector label_vector::from_names(const std::vector<std::string>& names) {
    label_vector lv;
    const auto& vocab = label_vocabulary::instance();
    for (const auto& name : names) {
        auto idx = vocab.index_of(name);
        if (!idx) throw data_error("unknown label: '" + name + "'");
        lv.set(*idx);
    }
    return lv;
}

}  // namespace triggerkit

#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace triggerkit {

inline constexpr std::size_t kNumClasses = 32;

// Canonical trigger-warning vocabulary. Class indices are 1-based
// (1 = "pornographic" ... 32 = "animal-cruelty") and this ordering is the
// single source of truth for every stage: label files, embedding stores,
// trained heads and metric reports all align to it.
class label_vocabulary {
public:
    static const label_vocabulary& instance();

    const std::array<std::string, kNumClasses>& names() const { return names_; }

    // 1-based class index for a label name; nullopt for unknown names.
    std::optional<std::size_t> index_of(std::string_view name) const;

    // name for a 1-based class index; throws std::out_of_range outside 1..32.
    const std::string& name_of(std::size_t class_index) const;

private:
    label_vocabulary();
    std::array<std::string, kNumClasses> names_;
};

// One bit per trigger class, aligned to label_vocabulary.
class label_vector {
public:
    label_vector() = default;

    bool get(std::size_t class_index) const { return bits_.test(class_index - 1); }
    void set(std::size_t class_index, bool value = true) { bits_.set(class_index - 1, value); }

    bool any() const { return bits_.any(); }
    std::size_t count() const { return bits_.count(); }

    bool operator==(const label_vector&) const = default;

    // Label names of the set bits, in vocabulary order.
    std::vector<std::string> to_names() const;

    // Builds a vector from label names; throws data_error on unknown names.
    static label_vector from_names(const std::vector<std::string>& names);

private:
    std::bitset<kNumClasses> bits_;
};

}  // namespace triggerkit

#pragma once

#include <string>
#include <string_view>
#include <unordered_set>

namespace triggerkit {

// The bundled English stopword list (lowercase forms only; removal runs
// after lowercasing). The exact word set is versioned: results are stated
// relative to english_stopwords_version().
const std::unordered_set<std::string>& english_stopwords();

std::string_view english_stopwords_version();

}  // namespace triggerkit

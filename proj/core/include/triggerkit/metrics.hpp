#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "triggerkit/labels.hpp"

namespace triggerkit {

struct confusion_counts {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t total() const { return tp + fp + fn + tn; }
};

struct prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct multilabel_scores {
    double f1_macro = 0.0, p_macro = 0.0, r_macro = 0.0;
    double f1_micro = 0.0, p_micro = 0.0, r_micro = 0.0;
};

// One row of the per-class report. The binary "macro" columns average the
// metric over the positive and the negative class; the binary "micro"
// columns come from pooled counts, which for a single binary task collapses
// micro-F1 = micro-P = micro-R = accuracy.
struct class_report_row {
    std::string label;
    double pos_ratio = 0.0;
    double f1_macro = 0.0, p_macro = 0.0, r_macro = 0.0;
    double f1_micro = 0.0, p_micro = 0.0, r_micro = 0.0;
    double pos_pred_ratio = 0.0;
};

struct metrics_report {
    std::array<class_report_row, kNumClasses> per_class{};
    multilabel_scores overall;                // macro over all 32 classes
    multilabel_scores overall_present_only;   // macro over classes with any tp/fp/fn
    std::vector<std::string> zero_division_classes;  // macro F1 forced to 0
    std::size_t n_documents = 0;
};

// Whether macro averages run over all 32 classes or only classes that occur
// (any tp, fp or fn). The overall report carries both; the all-classes
// variant is the default and matches the task's headline numbers.
enum class macro_average { all_classes, present_classes };

confusion_counts binary_confusion(const std::vector<label_vector>& preds,
                                  const std::vector<label_vector>& truth,
                                  std::size_t class_index);

// F1/precision/recall of the positive class; zero-division resolves to 0.
prf binary_prf(const confusion_counts& c);

multilabel_scores multilabel_f1(const std::vector<label_vector>& preds,
                                const std::vector<label_vector>& truth,
                                macro_average mode = macro_average::all_classes);

class_report_row binary_class_report(const std::vector<label_vector>& preds,
                                     const std::vector<label_vector>& truth,
                                     std::size_t class_index);

metrics_report report(const std::vector<label_vector>& preds,
                      const std::vector<label_vector>& truth);

// Aligned text table in the per-class report layout, one row per class plus
// the overall multi-label row.
std::string format_report_table(const metrics_report& rep);

// Machine-readable JSON form of the same report.
void save_report(const metrics_report& rep, const std::filesystem::path& path);

}  // namespace triggerkit

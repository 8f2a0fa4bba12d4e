#include "triggerkit/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "triggerkit/errors.hpp"

namespace triggerkit {

using nlohmann::json;

namespace {

void check_inputs(const std::vector<label_vector>& preds,
                  const std::vector<label_vector>& truth) {
    if (preds.size() != truth.size())
        throw data_error("metrics: preds/truth length mismatch (" +
                         std::to_string(preds.size()) + " vs " +
                         std::to_string(truth.size()) + ")");
    if (preds.empty()) throw data_error("metrics: empty input");
}

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

confusion_counts binary_confusion(const std::vector<label_vector>& preds,
                                  const std::vector<label_vector>& truth,
                                  std::size_t class_index) {
    confusion_counts c;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool p = preds[i].get(class_index);
        const bool t = truth[i].get(class_index);
        if (p && t) ++c.tp;
        else if (p && !t) ++c.fp;
        else if (!p && t) ++c.fn;
        else ++c.tn;
    }
    return c;
}

prf binary_prf(const confusion_counts& c) {
    prf out;
    out.precision = safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
    out.recall = safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
    out.f1 = safe_div(2.0 * static_cast<double>(c.tp),
                      static_cast<double>(2 * c.tp + c.fp + c.fn));
    return out;
}

multilabel_scores multilabel_f1(const std::vector<label_vector>& preds,
                                const std::vector<label_vector>& truth,
                                macro_average mode) {
    check_inputs(preds, truth);

    double f1_sum = 0.0, p_sum = 0.0, r_sum = 0.0;
    std::size_t considered = 0;
    std::size_t tp_total = 0, fp_total = 0, fn_total = 0;
    for (std::size_t k = 1; k <= kNumClasses; ++k) {
        const auto c = binary_confusion(preds, truth, k);
        tp_total += c.tp;
        fp_total += c.fp;
        fn_total += c.fn;
        if (mode == macro_average::present_classes && c.tp + c.fp + c.fn == 0) continue;
        const auto scores = binary_prf(c);
        f1_sum += scores.f1;
        p_sum += scores.precision;
        r_sum += scores.recall;
        ++considered;
    }

    multilabel_scores out;
    out.f1_macro = safe_div(f1_sum, static_cast<double>(considered));
    out.p_macro = safe_div(p_sum, static_cast<double>(considered));
    out.r_macro = safe_div(r_sum, static_cast<double>(considered));
    out.p_micro = safe_div(static_cast<double>(tp_total), static_cast<double>(tp_total + fp_total));
    out.r_micro = safe_div(static_cast<double>(tp_total), static_cast<double>(tp_total + fn_total));
    out.f1_micro = safe_div(2.0 * static_cast<double>(tp_total),
                            static_cast<double>(2 * tp_total + fp_total + fn_total));
    return out;
}

class_report_row binary_class_report(const std::vector<label_vector>& preds,
                                     const std::vector<label_vector>& truth,
                                     std::size_t class_index) {
    check_inputs(preds, truth);
    const auto c = binary_confusion(preds, truth, class_index);
    const auto n = static_cast<double>(c.total());

    // Positive class as-is; the negative class re-reads the table with
    // labels flipped (tn becomes its tp, fn its fp).
    const prf pos = binary_prf(c);
    const prf neg = binary_prf(confusion_counts{c.tn, c.fn, c.fp, c.tp});

    class_report_row row;
    row.label = label_vocabulary::instance().name_of(class_index);
    row.pos_ratio = static_cast<double>(c.tp + c.fn) / n;
    row.pos_pred_ratio = static_cast<double>(c.tp + c.fp) / n;
    row.f1_macro = 0.5 * (pos.f1 + neg.f1);
    row.p_macro = 0.5 * (pos.precision + neg.precision);
    row.r_macro = 0.5 * (pos.recall + neg.recall);

    // Pooled counts over {positive, negative} make micro P = R = F1 =
    // accuracy for a single binary task.
    const double accuracy = static_cast<double>(c.tp + c.tn) / n;
    row.f1_micro = accuracy;
    row.p_micro = accuracy;
    row.r_micro = accuracy;
    return row;
}

metrics_report report(const std::vector<label_vector>& preds,
                      const std::vector<label_vector>& truth) {
    check_inputs(preds, truth);
    metrics_report rep;
    rep.n_documents = preds.size();
    for (std::size_t k = 1; k <= kNumClasses; ++k) {
        rep.per_class[k - 1] = binary_class_report(preds, truth, k);
        const auto c = binary_confusion(preds, truth, k);
        if (c.tp + c.fp + c.fn == 0)
            rep.zero_division_classes.push_back(label_vocabulary::instance().name_of(k));
    }
    rep.overall = multilabel_f1(preds, truth, macro_average::all_classes);
    rep.overall_present_only = multilabel_f1(preds, truth, macro_average::present_classes);
    return rep;
}

std::string format_report_table(const metrics_report& rep) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof(line), "%-16s %10s %9s %8s %8s %9s %8s %8s %15s\n", "Class",
                  "Pos.Ratio", "F1-macro", "P-macro", "R-macro", "F1-micro", "P-micro",
                  "R-micro", "Pos.Pred.Ratio");
    os << line;
    for (const auto& row : rep.per_class) {
        std::snprintf(line, sizeof(line),
                      "%-16s %10.3f %9.3f %8.3f %8.3f %9.3f %8.3f %8.3f %15.3f\n",
                      row.label.c_str(), row.pos_ratio, row.f1_macro, row.p_macro, row.r_macro,
                      row.f1_micro, row.p_micro, row.r_micro, row.pos_pred_ratio);
        os << line;
    }
    const auto& o = rep.overall;
    std::snprintf(line, sizeof(line), "%-16s %10s %9.4f %8.4f %8.4f %9.4f %8.4f %8.4f %15s\n",
                  "Multi-label", "-", o.f1_macro, o.p_macro, o.r_macro, o.f1_micro, o.p_micro,
                  o.r_micro, "-");
    os << line;
    return os.str();
}

void save_report(const metrics_report& rep, const std::filesystem::path& path) {
    json per_class = json::array();
    for (const auto& row : rep.per_class) {
        per_class.push_back({{"label", row.label},
                             {"pos_ratio", row.pos_ratio},
                             {"f1_macro", row.f1_macro},
                             {"p_macro", row.p_macro},
                             {"r_macro", row.r_macro},
                             {"f1_micro", row.f1_micro},
                             {"p_micro", row.p_micro},
                             {"r_micro", row.r_micro},
                             {"pos_pred_ratio", row.pos_pred_ratio}});
    }
    auto scores_json = [](const multilabel_scores& s) {
        return json{{"f1_macro", s.f1_macro}, {"p_macro", s.p_macro}, {"r_macro", s.r_macro},
                    {"f1_micro", s.f1_micro}, {"p_micro", s.p_micro}, {"r_micro", s.r_micro}};
    };
    json doc{{"n_documents", rep.n_documents},
             {"per_class", per_class},
             {"overall", scores_json(rep.overall)},
             {"overall_present_only", scores_json(rep.overall_present_only)},
             {"zero_division_classes", rep.zero_division_classes}};
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot write metrics report: " + path.string());
    out << doc.dump(2) << '\n';
}

}  // namespace triggerkit

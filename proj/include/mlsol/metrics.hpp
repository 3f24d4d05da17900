#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlsol/dataset.hpp"
#include "mlsol/matrix.hpp"

namespace mlsol {

struct LabelMetrics {
    double f1 = 0.0;
    std::optional<double> auc_roc;  // empty when the label is single-class in truth
    std::optional<double> auc_pr;
};

/// Macro averages are means over the labels that have a value; AUC macros are NaN when
/// every label was skipped.
struct MetricsReport {
    double macro_f = 0.0;
    double macro_auc_roc = 0.0;
    double macro_aucpr = 0.0;
    std::vector<LabelMetrics> per_label;
    std::vector<std::size_t> skipped_labels;
};

/// 2TP / (2TP + FP + FN); 0 when nothing is predicted or true.
double f1(std::span<const LabelBit> pred, std::span<const LabelBit> truth);

/// Mann-Whitney statistic: chance a random positive outscores a random negative, ties half.
std::optional<double> auc_roc(std::span<const double> scores, std::span<const LabelBit> truth);

/// Step-wise area under the precision-recall curve, sweeping distinct scores from high to
/// low and adding precision times the recall increment at each step.
std::optional<double> auc_pr(std::span<const double> scores, std::span<const LabelBit> truth);

MetricsReport evaluate(const Matrix<double>& scores, const Matrix<LabelBit>& preds, const Matrix<LabelBit>& truth);

/// Serializers: JSON object, and CSV with one row per label followed by a "macro" row.
std::string to_json(const MetricsReport& report, const std::vector<std::string>& label_names);
std::string to_csv(const MetricsReport& report, const std::vector<std::string>& label_names);

}  // namespace mlsol

#include "mlsol/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mlsol/error.hpp"

namespace mlsol {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b) throw Error("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

std::vector<std::size_t> descending(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace

double f1(std::span<const LabelBit> pred, std::span<const LabelBit> truth) {
    check_lengths(pred.size(), truth.size());
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        tp += pred[i] && truth[i];
        fp += pred[i] && !truth[i];
        fn += !pred[i] && truth[i];
    }
    const std::size_t denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

std::optional<double> auc_roc(std::span<const double> scores, std::span<const LabelBit> truth) {
    check_lengths(scores.size(), truth.size());
    const auto positives = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), LabelBit{1}));
    const std::size_t negatives = truth.size() - positives;
    if (positives == 0 || negatives == 0) return std::nullopt;

    // Walk groups of tied scores from high to low; each positive beats every negative
    // below its group and ties with the negatives inside it.
    const auto order = descending(scores);
    double wins = 0.0;
    std::size_t negatives_above = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t pos = 0, neg = 0;
        const double value = scores[order[i]];
        for (; i < order.size() && scores[order[i]] == value; ++i) {
            if (truth[order[i]]) ++pos; else ++neg;
        }
        const std::size_t negatives_below = negatives - negatives_above - neg;
        wins += static_cast<double>(pos) * (static_cast<double>(negatives_below) + 0.5 * static_cast<double>(neg));
        negatives_above += neg;
    }
    return wins / (static_cast<double>(positives) * static_cast<double>(negatives));
}

std::optional<double> auc_pr(std::span<const double> scores, std::span<const LabelBit> truth) {
    check_lengths(scores.size(), truth.size());
    const auto positives = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), LabelBit{1}));
    if (positives == 0 || positives == truth.size()) return std::nullopt;

    // long double accumulation keeps short sums such as 1/2 + 1/3 correctly rounded
    const auto order = descending(scores);
    long double area = 0.0L;
    std::size_t tp = 0, predicted = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double value = scores[order[i]];
        std::size_t gained = 0;
        for (; i < order.size() && scores[order[i]] == value; ++i) {
            ++predicted;
            if (truth[order[i]]) ++gained;
        }
        tp += gained;
        if (gained > 0) {
            const long double precision = static_cast<long double>(tp) / static_cast<long double>(predicted);
            area += precision * static_cast<long double>(gained) / static_cast<long double>(positives);
        }
    }
    return static_cast<double>(area);
}

MetricsReport evaluate(const Matrix<double>& scores, const Matrix<LabelBit>& preds, const Matrix<LabelBit>& truth) {
    const std::size_t q = truth.cols();
    if (q == 0) throw Error("cannot evaluate zero labels");
    if (scores.rows() != truth.rows() || preds.rows() != truth.rows() || scores.cols() != q || preds.cols() != q) {
        throw Error("score, prediction and truth shapes differ");
    }
    MetricsReport report;
    double sum_f = 0.0, sum_roc = 0.0, sum_pr = 0.0;
    std::size_t auc_labels = 0;
    for (std::size_t j = 0; j < q; ++j) {
        const auto s = scores.column(j);
        const auto p = preds.column(j);
        const auto t = truth.column(j);
        LabelMetrics m;
        m.f1 = f1(p, t);
        m.auc_roc = auc_roc(s, t);
        m.auc_pr = auc_pr(s, t);
        sum_f += m.f1;
        if (m.auc_roc) {
            sum_roc += *m.auc_roc;
            sum_pr += *m.auc_pr;
            ++auc_labels;
        } else {
            report.skipped_labels.push_back(j);
        }
        report.per_label.push_back(m);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.macro_f = sum_f / static_cast<double>(q);
    report.macro_auc_roc = auc_labels ? sum_roc / static_cast<double>(auc_labels) : nan;
    report.macro_aucpr = auc_labels ? sum_pr / static_cast<double>(auc_labels) : nan;
    return report;
}

namespace {

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
nlohmann::json number_or_null(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::string name_of(const std::vector<std::string>& names, std::size_t j) {
    return j < names.size() ? names[j] : "label" + std::to_string(j);
}

std::string csv_number(double v) {
    if (!std::isfinite(v)) return "";
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

std::string to_json(const MetricsReport& report, const std::vector<std::string>& label_names) {
    nlohmann::json j;
    j["macro_f"] = number_or_null(report.macro_f);
    j["macro_auc_roc"] = number_or_null(report.macro_auc_roc);
    j["macro_aucpr"] = number_or_null(report.macro_aucpr);
    j["skipped_labels"] = report.skipped_labels;
    auto& per = j["per_label"] = nlohmann::json::array();
    for (std::size_t l = 0; l < report.per_label.size(); ++l) {
        const auto& m = report.per_label[l];
        per.push_back({{"label", name_of(label_names, l)},
                       {"f1", m.f1},
                       {"auc_roc", number_or_null(m.auc_roc)},
                       {"auc_pr", number_or_null(m.auc_pr)}});
    }
    return j.dump(2);
}

std::string to_csv(const MetricsReport& report, const std::vector<std::string>& label_names) {
    std::ostringstream out;
    out << "label,f1,auc_roc,auc_pr\n";
    for (std::size_t l = 0; l < report.per_label.size(); ++l) {
        const auto& m = report.per_label[l];
        out << name_of(label_names, l) << ',' << csv_number(m.f1) << ','
            << (m.auc_roc ? csv_number(*m.auc_roc) : "") << ',' << (m.auc_pr ? csv_number(*m.auc_pr) : "") << '\n';
    }
    out << "macro," << csv_number(report.macro_f) << ',' << csv_number(report.macro_auc_roc) << ','
        << csv_number(report.macro_aucpr) << '\n';
    return out.str();
}

}  // namespace mlsol

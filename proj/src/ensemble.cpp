#include "mlsol/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mlsol/error.hpp"

namespace mlsol {

EnsembleModel::EnsembleModel(std::vector<std::shared_ptr<const RelevanceScorer>> members, std::vector<double> thresholds)
    : members_(std::move(members)), thresholds_(std::move(thresholds)) {
    if (members_.empty()) throw Error("ensemble needs at least one member");
    for (const auto& m : members_) {
        if (!m) throw Error("null ensemble member");
        if (m->num_labels() != thresholds_.size()) throw Error("threshold count does not match label count");
    }
}

std::vector<double> EnsembleModel::predict_scores(std::span<const double> x) const {
    std::vector<double> sum(thresholds_.size(), 0.0);
    for (const auto& m : members_) {
        const auto s = m->predict_scores(x);
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += s[j];
    }
    for (double& v : sum) v /= static_cast<double>(members_.size());
    return sum;
}

EnsemblePrediction EnsembleModel::predict(std::span<const double> x) const {
    EnsemblePrediction p;
    p.scores = predict_scores(x);
    p.bits = bipartition(p.scores, thresholds_);
    return p;
}

double tune_threshold(std::span<const double> scores, std::span<const LabelBit> truth) {
    if (scores.size() != truth.size()) throw Error("score and truth lengths differ");
    if (scores.empty()) return 0.0;

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
    const auto positives = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), LabelBit{1}));

    // Sweep from lowest threshold upward. At a candidate t, predicted positives are the
    // instances with score > t: tp/fp shrink as groups of tied scores fall below t.
    std::size_t tp = positives;
    std::size_t fp = scores.size() - positives;
    auto f1 = [&] {
        const std::size_t denom = 2 * tp + fp + (positives - tp);
        return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    };

    const double lowest = scores[order.front()];
    double best_t = std::nextafter(lowest, -std::numeric_limits<double>::infinity());
    double best_f = f1();
    std::size_t i = 0;
    while (i < order.size()) {
        const double value = scores[order[i]];
        while (i < order.size() && scores[order[i]] == value) {
            if (truth[order[i]]) --tp; else --fp;
            ++i;
        }
        double candidate = value;
        if (i < order.size()) {
            const double next = scores[order[i]];
            candidate = value / 2.0 + next / 2.0;
            if (candidate >= next) candidate = value;  // adjacent doubles
        }
        const double f = f1();
        if (f > best_f) {
            best_f = f;
            best_t = candidate;
        }
    }
    if (best_f == 0.0) return scores[order.back()];
    return best_t;
}

std::vector<double> tune_thresholds(const Matrix<double>& scores, const Matrix<LabelBit>& truth) {
    if (scores.rows() != truth.rows() || scores.cols() != truth.cols()) throw Error("score and truth shapes differ");
    std::vector<double> out(scores.cols());
    for (std::size_t j = 0; j < scores.cols(); ++j) {
        const auto s = scores.column(j);
        const auto t = truth.column(j);
        out[j] = tune_threshold(s, t);
    }
    return out;
}

EnsembleModel train_emls(const MultiLabelDataset& dataset, const Sampler& sampler, const Learner& learner,
                         std::size_t members, std::uint64_t seed, const MemberObserver& observer) {
    if (members < 1) throw Error("ensemble size must be at least 1");
    std::vector<std::shared_ptr<const RelevanceScorer>> models;
    models.reserve(members);
    for (std::size_t m = 0; m < members; ++m) {
        const auto resampled = sampler(dataset, seed + m);
        if (observer) observer(m, resampled);
        models.push_back(learner(resampled.dataset));
    }

    const std::size_t n = dataset.size();
    const std::size_t q = dataset.num_labels();
    Matrix<double> scores(n, q, 0.0);
    for (const auto& model : models) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto s = model->predict_scores(dataset.x(i));
            for (std::size_t j = 0; j < q; ++j) scores(i, j) += s[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : scores.row(i)) v /= static_cast<double>(members);
    }
    return EnsembleModel(std::move(models), tune_thresholds(scores, dataset.labels()));
}

}  // namespace mlsol

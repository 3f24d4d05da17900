#include "mlsol/learners.hpp"

#include <string>

#include "mlsol/error.hpp"
#include "mlsol/neighbors.hpp"

namespace mlsol {

std::vector<LabelBit> bipartition(std::span<const double> scores, std::span<const double> thresholds) {
    if (scores.size() != thresholds.size()) throw Error("score and threshold counts differ");
    std::vector<LabelBit> out(scores.size());
    for (std::size_t j = 0; j < scores.size(); ++j) out[j] = scores[j] > thresholds[j] ? 1 : 0;
    return out;
}

std::vector<LabelBit> RelevanceScorer::predict_bipartition(std::span<const double> x,
                                                           std::span<const double> thresholds) const {
    return bipartition(predict_scores(x), thresholds);
}

BrKnnModel::BrKnnModel(MultiLabelDataset training, std::size_t k) : training_(std::move(training)), k_(k) {
    if (k_ == 0) throw Error("learner k must be at least 1");
    if (k_ > training_.size()) {
        throw Error("learner k (" + std::to_string(k_) + ") exceeds the training size (" +
                    std::to_string(training_.size()) + ")");
    }
}

std::vector<double> BrKnnModel::predict_scores(std::span<const double> x) const {
    if (x.size() != training_.num_features()) {
        throw Error("dimension mismatch: model expects " + std::to_string(training_.num_features()) +
                    " features, got " + std::to_string(x.size()));
    }
    const auto neighbors = knn_of_point(training_, x, k_);
    std::vector<double> scores(training_.num_labels(), 0.0);
    for (const auto& nb : neighbors) {
        const auto y = training_.y(nb.index);
        for (std::size_t j = 0; j < scores.size(); ++j) scores[j] += y[j];
    }
    for (double& s : scores) s /= static_cast<double>(k_);
    return scores;
}

std::shared_ptr<const BrKnnModel> train_br_knn(const MultiLabelDataset& dataset, std::size_t k) {
    return std::make_shared<const BrKnnModel>(dataset, k);
}

Learner br_knn_learner(std::size_t k) {
    return [k](const MultiLabelDataset& data) -> std::shared_ptr<const RelevanceScorer> { return train_br_knn(data, k); };
}

}  // namespace mlsol

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mlsol/dataset.hpp"

namespace mlsol {

/// A trained multi-label model mapping a feature vector to per-label relevance degrees.
/// Implement this to plug a different base learner into the ensemble and benchmark.
class RelevanceScorer {
public:
    virtual ~RelevanceScorer() = default;

    virtual std::size_t num_features() const = 0;
    virtual std::size_t num_labels() const = 0;
    virtual std::vector<double> predict_scores(std::span<const double> x) const = 0;

    /// Label j is 1 iff score_j > thresholds[j].
    std::vector<LabelBit> predict_bipartition(std::span<const double> x, std::span<const double> thresholds) const;
};

/// Trains a scorer on a dataset.
using Learner = std::function<std::shared_ptr<const RelevanceScorer>(const MultiLabelDataset&)>;

/// Binary relevance over a shared kNN lookup: score_j is the fraction of the k nearest
/// training instances positive for label j. Lazy; training only stores the data.
class BrKnnModel final : public RelevanceScorer {
public:
    BrKnnModel(MultiLabelDataset training, std::size_t k);

    std::size_t k() const noexcept { return k_; }
    const MultiLabelDataset& training() const noexcept { return training_; }

    std::size_t num_features() const override { return training_.num_features(); }
    std::size_t num_labels() const override { return training_.num_labels(); }
    std::vector<double> predict_scores(std::span<const double> x) const override;

private:
    MultiLabelDataset training_;
    std::size_t k_;
};

std::shared_ptr<const BrKnnModel> train_br_knn(const MultiLabelDataset& dataset, std::size_t k);

Learner br_knn_learner(std::size_t k);

/// score > threshold per label.
std::vector<LabelBit> bipartition(std::span<const double> scores, std::span<const double> thresholds);

}  // namespace mlsol

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mlsol/dataset.hpp"
#include "mlsol/learners.hpp"
#include "mlsol/matrix.hpp"
#include "mlsol/resampling.hpp"

namespace mlsol {

struct EnsemblePrediction {
    std::vector<double> scores;
    std::vector<LabelBit> bits;
};

/// M relevance models trained on independently resampled copies of one training set,
/// sharing a single per-label threshold vector.
class EnsembleModel {
public:
    EnsembleModel(std::vector<std::shared_ptr<const RelevanceScorer>> members, std::vector<double> thresholds);

    std::size_t size() const noexcept { return members_.size(); }
    const std::vector<double>& thresholds() const noexcept { return thresholds_; }
    const std::vector<std::shared_ptr<const RelevanceScorer>>& members() const noexcept { return members_; }

    /// Mean of the member scores.
    std::vector<double> predict_scores(std::span<const double> x) const;
    EnsemblePrediction predict(std::span<const double> x) const;

private:
    std::vector<std::shared_ptr<const RelevanceScorer>> members_;
    std::vector<double> thresholds_;
};

/// Threshold maximizing F1 of (score > t) for one label.
///
/// Candidates are a sentinel just below the minimum score, the midpoints between
/// consecutive distinct scores, and the maximum score itself (nothing predicted). The
/// smallest candidate wins ties. If no candidate reaches a positive F1 the maximum-score
/// sentinel is returned so the label is never predicted.
double tune_threshold(std::span<const double> scores, std::span<const LabelBit> truth);

std::vector<double> tune_thresholds(const Matrix<double>& scores, const Matrix<LabelBit>& truth);

/// Called once per trained member with its index and resampled training set.
using MemberObserver = std::function<void(std::size_t member, const Resampled&)>;

/// Member i is trained on sampler(dataset, seed + i). Thresholds are tuned on the
/// ensemble-averaged scores of the original training instances.
EnsembleModel train_emls(const MultiLabelDataset& dataset, const Sampler& sampler, const Learner& learner,
                         std::size_t members, std::uint64_t seed, const MemberObserver& observer = {});

}  // namespace mlsol

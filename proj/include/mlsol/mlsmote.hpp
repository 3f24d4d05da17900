#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlsol/dataset.hpp"
#include "mlsol/neighbors.hpp"
#include "mlsol/resampling.hpp"

namespace mlsol {

struct MlsmoteConfig {
    std::size_t k = 5;
    std::uint64_t seed = 0;
};

/// Labels whose imbalance ratio strictly exceeds the dataset mean imbalance ratio.
std::vector<std::size_t> minority_labels(const MultiLabelDataset& dataset);

/// Ranking label generation: label j is set iff more than half of the seed and its k
/// neighbours carry it, i.e. count > (k + 1) / 2.
std::vector<LabelBit> ranking_labels(const MultiLabelDataset& dataset, std::size_t seed,
                                     std::span<const std::size_t> neighbors);

struct MlsmoteRun {
    MultiLabelDataset dataset;
    std::vector<SyntheticOrigin> origins;
};

/// One synthetic instance per (minority label, instance holding that label's minority class)
/// pair, labels by the Ranking rule. Labels are visited in index order and instances in
/// row order; each synthetic draws the reference first, then one value per feature.
MlsmoteRun run_mlsmote(const MultiLabelDataset& dataset, const MlsmoteConfig& config);

MultiLabelDataset mlsmote(const MultiLabelDataset& dataset, const MlsmoteConfig& config);

}  // namespace mlsol
